from pathlib import Path

import pytest

from lud.corpus import load_entry, load_lud

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = CORPUS / "golden"
ENTRY_IDS = ["F1", "F3", "F4", "F5", "F6a", "F6b", "F7", "T1"]

# F1 preferred reading, completed with the forced holes
F1_PREFERRED = {
    "h0": "l4", "h5": "l2", "h2": "l3", "h1": "l5", "h3": "l8",
    "h4": "l17", "h6": "l16", "h7": "l21", "h8": "l24",
}


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def entries():
    return {i: load_entry(CORPUS / f"{i}.lud") for i in ENTRY_IDS}


@pytest.fixture(scope="session")
def f1():
    return load_lud(CORPUS / "F1.lud")


_acceptance_lines: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        line = f"{'PASS' if report.passed else 'FAIL'} {marker.args[0]}"
        _acceptance_lines.append(line)
        print("\n" + line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
