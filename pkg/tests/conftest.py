import numpy as np
import pytest

from matmod.random_arrays import stream

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng(request):
    # one stream per test, keyed by the test name, so tests do not share draws
    key = sum(request.node.name.encode()) * 7919
    return stream(12345, key)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_spd(p, rng, jitter=0.5):
    a = rng.normal(size=(p, p))
    return a @ a.T + jitter * np.eye(p)
