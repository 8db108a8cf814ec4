"""Service configuration: TOML file plus INFOTRIAGE_* env overrides.

The backend registry maps a name to either lexicon parameters or a remote
endpoint URL; a default lexicon backend is always present unless the file
redefines it.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # 3.10
    import tomli as tomllib

__all__ = ["BackendConfig", "ServiceConfig", "ConfigError", "load_config"]

DEFAULT_UPLOAD_LIMIT = 512 * 1024 * 1024


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BackendConfig:
    name: str
    type: str  # "lexicon" | "remote"
    url: str | None = None
    capabilities: tuple[str, ...] = ("sentiment", "aspects", "stance")
    timeout: float = 30.0
    pool_size: int = 4
    window: int = 3
    theta_rel: float = 0.15
    lexicon_path: str | None = None

    def __post_init__(self):
        if self.type not in ("lexicon", "remote"):
            raise ConfigError(f"backend {self.name!r}: unknown type {self.type!r}")
        if self.type == "remote" and not self.url:
            raise ConfigError(f"backend {self.name!r}: remote backend needs a url")
        bad = set(self.capabilities) - {"sentiment", "aspects", "stance"}
        if bad:
            raise ConfigError(f"backend {self.name!r}: unknown capabilities {sorted(bad)}")


def _default_backends() -> dict[str, BackendConfig]:
    return {"lexicon": BackendConfig(name="lexicon", type="lexicon")}


@dataclass
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8787
    store_dir: str = "./store"
    parallelism: int = 0  # 0 = one worker per processor
    upload_limit_bytes: int = DEFAULT_UPLOAD_LIMIT
    backends: dict[str, BackendConfig] = field(default_factory=_default_backends)


_ENV_FIELDS = {
    "INFOTRIAGE_HOST": ("host", str),
    "INFOTRIAGE_PORT": ("port", int),
    "INFOTRIAGE_STORE_DIR": ("store_dir", str),
    "INFOTRIAGE_PARALLELISM": ("parallelism", int),
    "INFOTRIAGE_UPLOAD_LIMIT_BYTES": ("upload_limit_bytes", int),
}


def _backend_from_table(name: str, table: dict) -> BackendConfig:
    if not isinstance(table, dict):
        raise ConfigError(f"backend {name!r} must be a table")
    known = {"type", "url", "capabilities", "timeout", "pool_size",
             "window", "theta_rel", "lexicon_path"}
    extras = set(table) - known
    if extras:
        raise ConfigError(f"backend {name!r}: unknown keys {sorted(extras)}")
    kwargs: dict = {"name": name, "type": table.get("type", "lexicon")}
    for key in known - {"type", "capabilities"}:
        if key in table:
            kwargs[key] = table[key]
    if "capabilities" in table:
        caps = table["capabilities"]
        if not isinstance(caps, list) or any(not isinstance(c, str) for c in caps):
            raise ConfigError(f"backend {name!r}: capabilities must be a string list")
        kwargs["capabilities"] = tuple(caps)
    return BackendConfig(**kwargs)


def load_config(path: str | Path | None = None,
                env: dict[str, str] | None = None) -> ServiceConfig:
    """Read the TOML file if given, then apply environment overrides."""
    config = ServiceConfig()
    if path is not None:
        with open(path, "rb") as f:
            try:
                data = tomllib.load(f)
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from None
        server = data.get("server", {})
        if not isinstance(server, dict):
            raise ConfigError("[server] must be a table")
        for key in ("host", "store_dir"):
            if key in server:
                config.__setattr__(key, str(server[key]))
        for key in ("port", "parallelism", "upload_limit_bytes"):
            if key in server:
                value = server[key]
                if not isinstance(value, int):
                    raise ConfigError(f"server.{key} must be an integer")
                setattr(config, key, value)
        backends = data.get("backends", {})
        if not isinstance(backends, dict):
            raise ConfigError("[backends] must be a table of tables")
        if backends:
            config.backends = {}
            for name, table in backends.items():
                config.backends[name] = _backend_from_table(name, table)
            config.backends.setdefault(
                "lexicon", BackendConfig(name="lexicon", type="lexicon"))

    environ = os.environ if env is None else env
    for var, (attr, cast) in _ENV_FIELDS.items():
        if var in environ:
            try:
                setattr(config, attr, cast(environ[var]))
            except ValueError:
                raise ConfigError(f"{var} must be {cast.__name__}") from None

    if config.port < 1 or config.port > 65535:
        raise ConfigError(f"port {config.port} out of range")
    if config.parallelism < 0:
        raise ConfigError("parallelism must be >= 0")
    if config.upload_limit_bytes < 1:
        raise ConfigError("upload_limit_bytes must be positive")
    return config
