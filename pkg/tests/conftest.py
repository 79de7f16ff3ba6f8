import sys

import numpy as np
import pytest

from ramificant.exact_algebra import NormalizedP0


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def disc_p0(rng, d, radius=0.5):
    r = radius * np.sqrt(rng.uniform(0, 1, d))
    th = rng.uniform(0, 2 * np.pi, d)
    return NormalizedP0(d, tuple(complex(x) for x in r * np.exp(1j * th)))


def square(rng, n):
    return [complex(x, y) for x, y in rng.uniform(-1, 1, (n, 2))]


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
