import math

import numpy as np
import pytest
from scipy.optimize import brentq

from hnnroute.core import PathSetInstance

# verdict lines from the acceptance module, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)


def crossing_time(ki, kj, r):
    """Independent oracle: first t >= 0 with |relative position(t)| = r, by bracketing."""
    vx = ki.speed * math.cos(ki.heading) - kj.speed * math.cos(kj.heading)
    vy = ki.speed * math.sin(ki.heading) - kj.speed * math.sin(kj.heading)
    px, py = ki.x - kj.x, ki.y - kj.y
    if vx == 0 and vy == 0:
        return math.inf

    def f(t):
        return math.hypot(px + vx * t, py + vy * t) - r

    # distance is monotone after the closest approach
    lo = max(0.0, -(px * vx + py * vy) / (vx * vx + vy * vy))
    if f(lo) >= 0:
        return lo
    hi = lo + 1.0
    while f(hi) < 0:
        hi = lo + 2.0 * (hi - lo)
    return brentq(f, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=500)


def random_conflict(rng, n, density=None):
    density = rng.uniform(0.1, 0.7) if density is None else density
    upper = np.triu(rng.random((n, n)) < density, 1)
    return (upper | upper.T).astype(np.int8)


def abstract_instance(rng, n, density=None):
    rel = rng.uniform(0.01, 1.0, n)
    return PathSetInstance.from_conflict(rel, random_conflict(rng, n, density))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
