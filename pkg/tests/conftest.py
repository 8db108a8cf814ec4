import pytest


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        word = "PASS" if report.passed else "FAIL"
        print(f"\n[{word}] {name}", flush=True)
    elif report.when == "setup" and report.failed:
        print(f"\n[FAIL] {name} (setup)", flush=True)


@pytest.fixture(scope="session")
def synth_sources(tmp_path_factory):
    """All synthetic dataset source files, written once per session."""
    import synth

    root = tmp_path_factory.mktemp("sources")
    return {
        "sa": synth.write_sa_sources(root / "sa"),
        "absa": synth.write_absa_sources(root / "absa"),
        "sd": synth.write_sd_sources(root / "sd"),
    }
