"""Reference selectors: exact optimum, greedy backup selection, shortest path."""

from __future__ import annotations

import enum

from .core import InvalidInput, NoRouteError, Path, PathSetInstance
from .metrics import PathSetResult, pathset_reliability

MAX_ORACLE_PATHS = 25


class EnumerationGuardError(InvalidInput):
    pass


class SelectorKind(str, enum.Enum):
    HNN = "Hnn"
    ORACLE = "Oracle"
    GREEDY = "Greedy"
    SHORTEST_PATH = "ShortestPath"

    @classmethod
    def parse(cls, value) -> "SelectorKind":
        if isinstance(value, cls):
            return value
        for kind in cls:
            if kind.value.lower() == str(value).lower() or kind.name.lower() == str(value).lower():
                return kind
        raise InvalidInput(f"unknown selector {value!r}")


def brute_force_optimum(instance: PathSetInstance, max_paths: int = MAX_ORACLE_PATHS) -> PathSetResult:
    """Most reliable disjoint subset by exhaustive search.

    Walks the include/exclude tree over independent sets and prunes a branch
    only when even taking every remaining compatible path cannot reach the
    incumbent, so the result equals plain enumeration of all 2^n subsets.
    Ties go to fewer paths, then the lexicographically smallest index set.
    """
    n = instance.n
    if n > max_paths:
        raise EnumerationGuardError(f"{n} paths exceeds the enumeration guard of {max_paths}")
    rel = [float(r) for r in instance.reliabilities]
    conflict_mask = [0] * n
    for j in range(n):
        for k in range(n):
            if instance.conflict[j, k]:
                conflict_mask[j] |= 1 << k
    # zero-reliability paths never improve a set and lose the size tie-break
    useful = [i for i in range(n) if rel[i] > 0.0]

    best_sel: tuple[int, ...] = ()
    best_rel = 0.0

    def better(r, sel) -> bool:
        if r != best_rel:
            return r > best_rel
        if len(sel) != len(best_sel):
            return len(sel) < len(best_sel)
        return sel < best_sel

    def rec(pos: int, chosen: list[int], blocked: int, fail: float):
        nonlocal best_sel, best_rel
        if pos == len(useful):
            r = 1.0 - fail if chosen else 0.0
            sel = tuple(chosen)
            if better(r, sel):
                best_sel, best_rel = sel, r
            return
        bound = fail
        for i in useful[pos:]:
            if not blocked >> i & 1:
                bound *= 1.0 - rel[i]
        if 1.0 - bound < best_rel:
            return
        i = useful[pos]
        if not blocked >> i & 1:
            chosen.append(i)
            rec(pos + 1, chosen, blocked | conflict_mask[i], fail * (1.0 - rel[i]))
            chosen.pop()
        rec(pos + 1, chosen, blocked, fail)

    rec(0, [], 0, 1.0)
    return PathSetResult.from_selection(best_sel, rel)


def greedy_backup_select(instance: PathSetInstance) -> PathSetResult:
    """Take the most reliable remaining path, drop everything it conflicts with, repeat."""
    rel = instance.reliabilities
    order = sorted(range(instance.n),
                   key=lambda i: (-rel[i], instance.paths[i].hops, i))
    removed = set()
    chosen = []
    for i in order:
        if i in removed:
            continue
        chosen.append(i)
        removed.update(int(k) for k in instance.conflict[i].nonzero()[0])
    return PathSetResult.from_selection(chosen, rel)


def shortest_path(cache) -> Path:
    """Fewest hops; ties by higher reliability, then lexicographic node record."""
    paths = cache.paths if hasattr(cache, "paths") else list(cache)
    if not paths:
        raise NoRouteError("route cache is empty")
    return min(paths, key=lambda p: (p.hops, -p.reliability, p.nodes))


def shortest_path_result(instance: PathSetInstance) -> PathSetResult:
    if instance.n == 0:
        return PathSetResult.from_selection((), [])
    sp = shortest_path(instance.paths)
    idx = instance.paths.index(sp)
    return PathSetResult.from_selection((idx,), instance.reliabilities)


def exact_reliability(selection, reliabilities) -> float:
    return pathset_reliability([reliabilities[i] for i in selection])
