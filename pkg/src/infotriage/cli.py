"""Command-line driver.

Thin shells over the module operations: ingest/validate a corpus file,
run one query spec against a corpus, score a saved search against gold,
run a whole labeled suite into a report, build the training datasets,
expand claim templates, and serve the HTTP API.

Machine-readable output goes to stdout; diagnostics go to stderr. Exit
codes: 0 success, 1 user error, 2 internal error. Output is never
colorized, so NO_COLOR needs no special handling.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import adapters, datasets, evaluate, queryspec
from .classify import LexiconBackend, StanceLabel, UnsupportedCapability
from .config import ConfigError, load_config
from .corpus import IngestError, ingest
from .query import (
    BackendCallError,
    InvalidQuery,
    SearchFailed,
    UnboundVariable,
    expand_claims,
    run_search,
)
from .remote import BackendTimeout, ProtocolError, RemoteBackend

USER_ERRORS = (
    IngestError, InvalidQuery, UnboundVariable, SearchFailed, BackendCallError,
    ProtocolError, BackendTimeout, UnsupportedCapability, ConfigError,
    evaluate.GoldError, evaluate.UnknownDocId, evaluate.LengthMismatch,
    evaluate.EmptyInput, datasets.CountMismatch, datasets.InsufficientExamples,
    datasets.OutOfRange, datasets.EmptyNameList, adapters.MalformedSource,
    OSError, json.JSONDecodeError, ValueError,
)

_OUTPUT = click.option("--output", type=click.Choice(["text", "csv", "json"]),
                       default="text", help="stdout format")


def _infer_format(path: str, fmt: str | None) -> str:
    if fmt is not None:
        return fmt
    return "csv" if path.endswith(".csv") else "jsonl"


def _backend_for(name: str):
    """'lexicon' or a remote endpoint URL."""
    if name == "lexicon":
        return LexiconBackend()
    if name.startswith(("http://", "https://")):
        return RemoteBackend(url=name,
                             capabilities={"sentiment", "aspects", "stance"})
    raise click.UsageError(
        f"unknown backend {name!r}; use 'lexicon' or an http(s) URL")


def _target_stance(value: str | None) -> StanceLabel | None:
    if value is None:
        return None
    try:
        return StanceLabel(value)
    except ValueError:
        raise click.UsageError(f"unknown stance {value!r}") from None


@click.group()
def cli():
    """Corpus triage engine."""


@cli.command("ingest")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]),
              default=None, help="default: by file extension")
@_OUTPUT
def cmd_ingest(file: str, fmt: str | None, output: str):
    """Validate FILE and print its corpus id and document count."""
    corpus = ingest(file, _infer_format(file, fmt))
    info = {"corpus_id": corpus.corpus_id,
            "documents": len(corpus.documents),
            "gold_annotations": len(corpus.gold)}
    if output == "json":
        click.echo(json.dumps(info, indent=2))
    elif output == "csv":
        click.echo("corpus_id,documents,gold_annotations")
        click.echo(f"{info['corpus_id']},{info['documents']},{info['gold_annotations']}")
    else:
        click.echo(f"{info['corpus_id']}  {info['documents']} documents "
                   f"({info['gold_annotations']} with gold)")


@cli.command("search")
@click.argument("corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--query", "query_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="query spec JSON file")
@click.option("--backend", default="lexicon", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default=None)
@click.option("--parallelism", type=int, default=None)
@_OUTPUT
def cmd_search(corpus: str, query_path: str, backend: str, fmt: str | None,
               parallelism: int | None, output: str):
    """Run one query spec against a corpus file."""
    query = queryspec.parse_query(Path(query_path).read_text(encoding="utf-8"))
    loaded = ingest(corpus, _infer_format(corpus, fmt))
    result = run_search(query, loaded, _backend_for(backend),
                        parallelism=parallelism)
    if output == "json":
        click.echo(json.dumps({
            "corpus_id": loaded.corpus_id,
            "query": queryspec.query_to_obj(query),
            "doc_ids": result.doc_ids,
            "rationales": {d: r.as_dict() for d, r in result.rationales.items()},
            "skipped": result.skipped,
        }, indent=2, ensure_ascii=False))
    elif output == "csv":
        click.echo("doc_id,rule_fired,classifier_output")
        for doc_id in result.doc_ids:
            r = result.rationales[doc_id]
            click.echo(f"{doc_id},{r.rule_fired},{r.classifier_output}")
    else:
        for doc_id in result.doc_ids:
            click.echo(doc_id)
    if result.skipped:
        click.echo(f"skipped {len(result.skipped)} documents after "
                   f"classifier failures", err=True)


@cli.command("eval")
@click.option("--search-output", "search_output", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON produced by `search --output json`")
@click.option("--gold", "gold_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--target-stance", default=None,
              help="map stance-form gold through this target")
@click.option("--label", default="search", show_default=True)
@_OUTPUT
def cmd_eval(search_output: str, gold_path: str, target_stance: str | None,
             label: str, output: str):
    """Score a saved search result against gold relevance."""
    saved = json.loads(Path(search_output).read_text(encoding="utf-8"))
    if not isinstance(saved, dict) or "doc_ids" not in saved:
        raise click.UsageError("search output file must contain 'doc_ids'")
    gold = evaluate.load_gold(Path(gold_path).read_text(encoding="utf-8"),
                              _target_stance(target_stance))
    counts = evaluate.confusion(saved["doc_ids"], gold)
    row = evaluate.prf(counts, label=label)
    report = evaluate.Report(rows=[evaluate.ReportRow(
        label=label, metrics=row, counts=counts,
        skipped=len(saved.get("skipped", [])))])
    _emit_report(report, output)


def _emit_report(report: "evaluate.Report", output: str) -> None:
    if output == "json":
        rows = []
        for r in report.rows:
            if r.error is not None:
                rows.append({"label": r.label, "error": r.error})
                continue
            rows.append({"label": r.label, "precision": r.metrics.precision,
                         "recall": r.metrics.recall, "f1": r.metrics.f1,
                         "tp": r.counts.tp, "fp": r.counts.fp,
                         "fn": r.counts.fn, "skipped": r.skipped})
        click.echo(json.dumps({"rows": rows}, indent=2))
    elif output == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        click.echo(report.to_text(), nl=False)


@cli.command("report")
@click.option("--suite", "suite_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="labeled query suite JSON")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--gold", "gold_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="default: gold embedded in the corpus file")
@click.option("--backend", default="lexicon", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv"]), default=None)
@click.option("--target-stance", default=None)
@click.option("--parallelism", type=int, default=None)
@_OUTPUT
def cmd_report(suite_path: str, corpus_path: str, gold_path: str | None,
               backend: str, fmt: str | None, target_stance: str | None,
               parallelism: int | None, output: str):
    """Run a labeled suite of queries and print the metric table."""
    rows = queryspec.parse_suite(Path(suite_path).read_text(encoding="utf-8"))
    corpus = ingest(corpus_path, _infer_format(corpus_path, fmt))
    target = _target_stance(target_stance)
    if gold_path is not None:
        gold = evaluate.load_gold(Path(gold_path).read_text(encoding="utf-8"),
                                  target)
    else:
        gold = evaluate.gold_from_corpus(corpus, target)
    report = evaluate.emit_report(rows, corpus, gold, _backend_for(backend),
                                  parallelism=parallelism)
    _emit_report(report, output)


@cli.command("build-dataset")
@click.argument("task", type=click.Choice(["sa", "absa", "sd"]))
@click.option("--sources", "sources_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON manifest naming the source files")
@click.option("--out", "out_dir", required=True,
              type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_build_dataset(task: str, sources_path: str, out_dir: str, seed: int):
    """Assemble one training recipe into OUT/{train,val}.jsonl + manifest."""
    sources = json.loads(Path(sources_path).read_text(encoding="utf-8"))
    if not isinstance(sources, dict):
        raise click.UsageError("sources manifest must be a JSON object")

    def need(*keys):
        missing = [k for k in keys if k not in sources]
        if missing:
            raise click.UsageError(
                f"sources manifest missing {', '.join(missing)}")
        return [sources[k] for k in keys]

    def stance_src(value):
        if isinstance(value, dict):
            return (value["stances"], value["bodies"])
        if isinstance(value, list) and len(value) == 2:
            return (value[0], value[1])
        return value

    if task == "sa":
        args = need("sst", "amazon_test", "amazon_train", "yelp_test", "yelp_train")
        train, val = datasets.build_sa_dataset(*args)
        writer = datasets.write_sa_jsonl
        manifest = datasets.build_manifest("SA", train, val)
    elif task == "absa":
        args = need("semeval14", "negspec", "mams", "twitter", "yaso",
                    "sentihood_train", "sentihood_dev", "sentihood_test", "names")
        train, val = datasets.build_absa_dataset(*args, seed=seed)
        writer = datasets.write_absa_jsonl
        manifest = datasets.build_manifest("ABSA", train, val, {"seed": seed})
    else:
        args = need("fnc_train", "fnc_test", "arc", "perspectrum")
        train, val = datasets.build_sd_dataset(*(stance_src(a) for a in args))
        writer = datasets.write_sd_jsonl
        manifest = datasets.build_manifest("SD", train, val)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    writer(train, out / "train.jsonl")
    writer(val, out / "val.jsonl")
    manifest_text = json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    (out / "manifest.json").write_text(manifest_text, encoding="utf-8")
    click.echo(manifest_text, nl=False)
    click.echo(f"wrote {len(train)} train / {len(val)} val items to {out}",
               err=True)


@cli.command("claims")
@click.option("--template", "template_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--negate", is_flag=True, default=False)
@_OUTPUT
def cmd_claims(template_path: str, negate: bool, output: str):
    """Expand claim templates; one claim per line."""
    templates = queryspec.parse_templates(
        Path(template_path).read_text(encoding="utf-8"))
    claims: list[str] = []
    for template in templates:
        claims.extend(expand_claims(template, negate=negate))
    if output == "json":
        click.echo(json.dumps({"claims": claims}, indent=2, ensure_ascii=False))
    elif output == "csv":
        click.echo("claim")
        for claim in claims:
            click.echo('"' + claim.replace('"', '""') + '"')
    else:
        for claim in claims:
            click.echo(claim)


@cli.command("serve")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--host", default=None, help="override configured host")
@click.option("--port", type=int, default=None, help="override configured port")
def cmd_serve(config_path: str | None, host: str | None, port: int | None):
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    config = load_config(config_path)
    if host is not None:
        config.host = host
    if port is not None:
        config.port = port
    uvicorn.run(create_app(config), host=config.host, port=config.port,
                log_level="info")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except USER_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
