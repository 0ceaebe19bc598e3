import numpy as np
import pytest

from specgap import kernels

_criteria = {}


def pytest_runtest_logreport(report):
    marker = getattr(report, "_criterion", None)
    if marker is None:
        return
    n, text = marker
    ok = report.passed if report.when == "call" else not report.failed
    prev = _criteria.get(n, (text, True))
    _criteria[n] = (text, prev[1] and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep._criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {text}")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request):
    """Each importable kernel implementation in turn."""
    return kernels.backends()[request.param]


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)

