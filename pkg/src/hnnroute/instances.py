"""Random path-set instances for solver checks and tuning suites."""

from __future__ import annotations

import numpy as np

from .core import DisjointnessMode, Path, PathSetInstance


def random_path_list(rng: np.random.Generator, n_paths: int, n_relays: int | None = None,
                     max_hops: int = 3) -> list[tuple[int, ...]]:
    """Distinct simple paths from node 0 to node 1 through relays 2, 3, ...

    Paths mimic TTL-bounded discovery output: at most ``max_hops`` links.
    Fewer than ``n_paths`` are returned when the relay pool is exhausted.
    """
    if n_relays is None:
        n_relays = max(2, int(round(np.sqrt(2 * n_paths))) + 1)
    relays = np.arange(2, 2 + n_relays)
    seen = set()
    out = []
    for _ in range(50 * n_paths + 50):
        if len(out) == n_paths:
            break
        k = int(rng.integers(0, max_hops))  # intermediate count
        k = min(k, n_relays)
        mids = tuple(int(v) for v in rng.choice(relays, size=k, replace=False))
        rec = (0,) + mids + (1,)
        if rec not in seen:
            seen.add(rec)
            out.append(rec)
    return out


def random_instance(rng: np.random.Generator, n_max: int = 20, mode=DisjointnessMode.LINK,
                    n_min: int = 1, n_relays: int | None = None) -> PathSetInstance:
    """Random instance whose path reliabilities are products of link probabilities."""
    n = int(rng.integers(n_min, n_max + 1))
    records = random_path_list(rng, n, n_relays)
    links = sorted({(min(a, b), max(a, b)) for rec in records for a, b in zip(rec[:-1], rec[1:])})
    p = dict(zip(links, rng.uniform(0.05, 1.0, len(links))))
    paths = []
    for rec in records:
        rel = 1.0
        for a, b in zip(rec[:-1], rec[1:]):
            rel *= p[(min(a, b), max(a, b))]
        paths.append(Path(rec, rel))
    return PathSetInstance(paths, mode)
