"""Link expiration time prediction and link operation probabilities."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import combinations

from .core import InvalidInput
from .mobility import Kinematics


class DegenerateSnapshotError(InvalidInput):
    """The normalizing maximum link expiration time is not positive."""


@dataclass(frozen=True)
class LinkEstimate:
    endpoints: tuple[int, int]
    let_s: float
    prob: float
    distance: float = float("nan")


@dataclass
class LinkSnapshot:
    time: float
    transmission_range: float
    links: dict = field(default_factory=dict)   # (i, j) with i < j -> LinkEstimate
    let_max: float = math.inf
    node_count: int = 0

    def prob(self, i: int, j: int) -> float:
        return self.links[(min(i, j), max(i, j))].prob

    def has_link(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.links

    def neighbors(self) -> dict[int, list[int]]:
        adj = {v: [] for v in range(self.node_count)}
        for i, j in self.links:
            adj.setdefault(i, []).append(j)
            adj.setdefault(j, []).append(i)
        for v in adj:
            adj[v].sort()
        return adj

    def write_csv(self, fh) -> None:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["time", "i", "j", "distance", "let", "p"])
        for (i, j), est in sorted(self.links.items()):
            w.writerow([f"{self.time:.9g}", i, j, f"{est.distance:.9g}",
                        f"{est.let_s:.9g}", f"{est.prob:.9g}"])


def link_expiration_time(ki: Kinematics, kj: Kinematics, r: float) -> float:
    """Time until two linearly moving nodes drift farther apart than ``r``.

    Returns ``math.inf`` for identical velocity vectors.
    """
    b = ki.x - kj.x
    d = ki.y - kj.y
    if math.hypot(b, d) > r:
        raise InvalidInput(f"nodes are {math.hypot(b, d):.6g} m apart, beyond range {r}")
    a = ki.speed * math.cos(ki.heading) - kj.speed * math.cos(kj.heading)
    c = ki.speed * math.sin(ki.heading) - kj.speed * math.sin(kj.heading)
    rel2 = a * a + c * c
    if rel2 == 0.0:
        return math.inf
    # tangent geometries can make this a hair negative
    disc = max(rel2 * r * r - (a * d - b * c) ** 2, 0.0)
    t = (-(a * b + c * d) + math.sqrt(disc)) / rel2
    return max(t, 0.0)


def link_probability(let_s: float, let_max: float) -> float:
    if not let_max > 0:
        raise DegenerateSnapshotError(f"let_max must be positive, got {let_max}")
    if math.isinf(let_s):
        return 1.0
    return min(1.0, let_s / let_max)


def build_link_snapshot(kinematics: list[Kinematics], r: float, time: float = 0.0) -> LinkSnapshot:
    if not r > 0:
        raise InvalidInput("transmission range must be positive")
    raw = {}
    for i, j in combinations(range(len(kinematics)), 2):
        ki, kj = kinematics[i], kinematics[j]
        dist = math.hypot(ki.x - kj.x, ki.y - kj.y)
        if dist <= r:
            raw[(i, j)] = (link_expiration_time(ki, kj, r), dist)
    finite = [t for t, _ in raw.values() if math.isfinite(t)]
    let_max = max(finite) if finite else math.inf
    links = {}
    for key, (t, dist) in raw.items():
        if math.isinf(t) or math.isinf(let_max):
            p = 1.0
        elif let_max == 0.0:
            # every finite link is breaking right now
            p = 0.0
        else:
            p = link_probability(t, let_max)
        links[key] = LinkEstimate(key, t, p, dist)
    return LinkSnapshot(time, float(r), links, let_max, len(kinematics))
