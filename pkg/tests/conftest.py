import pytest
from hypothesis import HealthCheck, settings
from mpmath import mp, mpf

from qident.numeric import PrecisionContext, to_big

settings.register_profile(
    "qident",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("qident")

GRID = ("0.1", "0.3", "0.5", "0.7", "0.9")

_CRITERIA = []


def record_criterion(number, title, passed, detail=""):
    line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
    _CRITERIA.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


@pytest.fixture
def ctx():
    return PrecisionContext()


def big(x):
    """Exact decimal or rational literal as an mpf, independent of the ambient precision."""
    with mp.workprec(1100):
        return to_big(x)


def rel(a, b):
    """Relative difference, computed well above any context used in the tests."""
    with mp.workprec(1100):
        a, b = mpf(a), mpf(b)
        return abs(a - b) / abs(b) if b else abs(a)
