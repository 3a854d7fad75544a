import numpy as np
import pytest

from hide_de.core import SearchSpace


class CountingSphere:
    """Plain (non-vectorised) sphere on a box, counting its own calls."""

    def __init__(self, dim=2, low=-5.0, high=5.0):
        self.space = SearchSpace.box(dim, low, high)
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return float(np.sum(np.asarray(x) ** 2))


@pytest.fixture
def sphere2():
    return CountingSphere(2)


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    number, title = mark.args
    ok = call.excinfo is None
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}")
