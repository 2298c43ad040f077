import numpy as np
import pytest

from afcm.datasets import load_iris, minmax_normalize

_CRITERIA = {}


@pytest.fixture(scope="session")
def iris():
    return minmax_normalize(load_iris())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def criterion():
    """Record an acceptance criterion outcome for the end-of-run report."""
    def record(number, name, passed, detail):
        _CRITERIA[number] = (name, bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        name, passed, detail = _CRITERIA[number]
        terminalreporter.write_line(
            f"[{'PASS' if passed else 'FAIL'}] {number}. {name}: {detail}")
