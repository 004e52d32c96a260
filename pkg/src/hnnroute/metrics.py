"""Path-set reliability and lifetime."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidInput, Path
from .mobility import MobilityState, advance_inplace


@dataclass
class PathSetResult:
    selected: tuple[int, ...]
    set_reliability: float
    set_reliability_sum_approx: float
    path_fail: tuple[float, ...] = field(default=())
    lifetime_s: float | None = None

    @classmethod
    def from_selection(cls, selected, reliabilities) -> "PathSetResult":
        sel = tuple(sorted(int(i) for i in selected))
        rel = [float(reliabilities[i]) for i in sel]
        return cls(sel, pathset_reliability(rel), pathset_reliability_sum_approx(rel),
                   tuple(1.0 - r for r in rel))


def _check(reliabilities) -> list[float]:
    vals = [float(r) for r in reliabilities]
    for r in vals:
        if not 0.0 <= r <= 1.0:
            raise InvalidInput(f"reliability {r} outside [0, 1]")
    return vals


def pathset_reliability(reliabilities) -> float:
    """Probability that at least one of independent paths survives."""
    vals = _check(reliabilities)
    if not vals:
        return 0.0
    return 1.0 - math.prod(1.0 - r for r in vals)


def pathset_reliability_sum_approx(reliabilities) -> float:
    """Plain sum of path reliabilities; an upper bound, not a probability."""
    return math.fsum(_check(reliabilities))


def link_break_times(links, mobility: MobilityState, r: float,
                     dt_sim: float = 0.1, horizon: float = 600.0) -> dict:
    """Replay mobility and return the first sampled time each link exceeds ``r``.

    Links still intact at ``horizon`` map to ``horizon``. Times are relative to
    the state's current time. The input state is not modified.
    """
    if dt_sim <= 0:
        raise InvalidInput("dt_sim must be positive")
    keys = sorted({(min(a, b), max(a, b)) for a, b in links})
    out = {}
    if not keys:
        return out
    ia = np.array([k[0] for k in keys])
    ib = np.array([k[1] for k in keys])
    alive = np.ones(len(keys), dtype=bool)
    breaks = np.full(len(keys), float(horizon))
    state = mobility.copy()
    steps = int(math.ceil(horizon / dt_sim - 1e-9))
    for k in range(1, steps + 1):
        advance_inplace(state, dt_sim)
        t = min(k * dt_sim, horizon)
        d = np.hypot(*(state.pos[ia] - state.pos[ib]).T)
        newly = alive & (d > r)
        if np.any(newly):
            breaks[newly] = t
            alive &= ~newly
            if not alive.any():
                break
    return {key: float(t) for key, t in zip(keys, breaks)}


def paths_lifetime(paths, break_times: dict) -> float:
    """Time until every path has lost a link, given per-link break times."""
    if not paths:
        return 0.0
    per_path = []
    for p in paths:
        nodes = p.nodes if isinstance(p, Path) else tuple(p)
        per_path.append(min(break_times[(min(a, b), max(a, b))]
                            for a, b in zip(nodes[:-1], nodes[1:])))
    return max(per_path)


def lifetime(paths, mobility: MobilityState, r: float,
             dt_sim: float = 0.1, horizon: float = 600.0) -> float:
    if not paths:
        return 0.0
    links = set()
    for p in paths:
        nodes = p.nodes if isinstance(p, Path) else tuple(p)
        for a, b in zip(nodes[:-1], nodes[1:]):
            if math.dist(mobility.pos[a], mobility.pos[b]) > r:
                raise InvalidInput(f"link {a}-{b} is already broken")
            links.add((min(a, b), max(a, b)))
    return paths_lifetime(paths, link_break_times(links, mobility, r, dt_sim, horizon))
