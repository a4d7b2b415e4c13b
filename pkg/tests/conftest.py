import pytest

from scalingid.census import classify
from scalingid.identifiability import RunConfig

CENSUS_SEED = 20240611


@pytest.fixture(scope="session")
def config():
    return RunConfig(seed=CENSUS_SEED)


@pytest.fixture(scope="session")
def census(config):
    """Classified census rows for n = 3, 4, 5, computed once."""
    return {n: classify(n, config) for n in (3, 4, 5)}


@pytest.fixture(scope="session")
def census_graphs(census):
    return [r.graph for n in (3, 4, 5) for r in census[n].records]


_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
