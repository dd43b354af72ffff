import time

import pytest

from spinindex import casestudies
from spinindex.indexengine import index_report

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _CRITERIA.get(n, True)
        _CRITERIA[n] = prev and rep.outcome == "passed"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if _CRITERIA[n] else 'FAIL'}")


@pytest.fixture(scope="session")
def davis_timed():
    casestudies.davis_case.cache_clear()
    t0 = time.perf_counter()
    case = casestudies.davis_case()
    return case, time.perf_counter() - t0


@pytest.fixture(scope="session")
def davis(davis_timed):
    return davis_timed[0]


@pytest.fixture(scope="session")
def decagon_timed():
    casestudies.decagon_case.cache_clear()
    t0 = time.perf_counter()
    case = casestudies.decagon_case()
    return case, time.perf_counter() - t0


@pytest.fixture(scope="session")
def decagon(decagon_timed):
    return decagon_timed[0]


@pytest.fixture(scope="session")
def davis_report(davis):
    return index_report(davis)


@pytest.fixture(scope="session")
def decagon_report(decagon):
    return index_report(decagon)
