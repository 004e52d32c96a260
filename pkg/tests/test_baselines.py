import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import abstract_instance
from hnnroute.baselines import (
    EnumerationGuardError, SelectorKind, brute_force_optimum, greedy_backup_select,
    shortest_path, shortest_path_result,
)
from hnnroute.core import NoRouteError, Path, PathSetInstance, is_disjoint_set
from hnnroute.discovery import RouteCache
from hnnroute.instances import random_path_list
from hnnroute.metrics import pathset_reliability


def naive_optimum(inst):
    """Plain enumeration of all 2^n subsets with the documented tie-break."""
    rel = inst.reliabilities
    best = (0.0, ())
    for mask in range(1 << inst.n):
        sel = tuple(i for i in range(inst.n) if mask >> i & 1)
        if not is_disjoint_set(sel, inst.conflict):
            continue
        r = pathset_reliability(rel[list(sel)])
        if r > best[0] or (r == best[0] and (len(sel), sel) < (len(best[1]), best[1])):
            best = (r, sel)
    return best


def conflict_only(rel, pairs):
    n = len(rel)
    rho = np.zeros((n, n), dtype=np.int8)
    for a, b in pairs:
        rho[a, b] = rho[b, a] = 1
    return PathSetInstance.from_conflict(rel, rho)


def test_empty_instance():
    res = brute_force_optimum(PathSetInstance([]))
    assert res.selected == () and res.set_reliability == 0.0


def test_all_disjoint_selects_all():
    inst = conflict_only([0.3, 0.2, 0.9], [])
    assert brute_force_optimum(inst).selected == (0, 1, 2)


def test_oracle_skips_conflict():
    inst = conflict_only([0.6, 0.5, 0.4], [(0, 1)])
    res = brute_force_optimum(inst)
    assert res.selected == (0, 2)
    assert res.set_reliability == pytest.approx(1 - 0.4 * 0.6)
    assert naive_optimum(inst)[1] == (0, 2)


def test_guard():
    inst = conflict_only([0.5] * 26, [])
    with pytest.raises(EnumerationGuardError):
        brute_force_optimum(inst)


def test_greedy_examples():
    assert greedy_backup_select(conflict_only([0.4], [])).selected == (0,)
    assert greedy_backup_select(conflict_only([0.6, 0.5, 0.4], [(0, 1)])).selected == (0, 2)
    gap = conflict_only([0.6, 0.5, 0.5], [(0, 1), (0, 2)])
    g, o = greedy_backup_select(gap), brute_force_optimum(gap)
    assert g.selected == (0,) and g.set_reliability == pytest.approx(0.6)
    assert o.selected == (1, 2) and o.set_reliability == pytest.approx(0.75)


def test_shortest_path():
    direct = RouteCache(0, 1, [Path((0, 2, 1), 0.9), Path((0, 1), 0.1)])
    assert shortest_path(direct).nodes == (0, 1)
    cache = RouteCache(0, 9, [Path((0, 2, 9), 0.5), Path((0, 3, 4, 9), 0.9)])
    assert shortest_path(cache).nodes == (0, 2, 9)
    tie = RouteCache(0, 9, [Path((0, 2, 9), 0.4), Path((0, 3, 9), 0.7)])
    assert shortest_path(tie).nodes == (0, 3, 9)
    with pytest.raises(NoRouteError):
        shortest_path(RouteCache(0, 9, []))


def test_selector_parse():
    assert SelectorKind.parse("hnn") is SelectorKind.HNN
    assert SelectorKind.parse("ShortestPath") is SelectorKind.SHORTEST_PATH


def test_oracle_matches_naive_enumeration(rng):
    for _ in range(150):
        inst = abstract_instance(rng, int(rng.integers(1, 11)))
        naive_rel, naive_sel = naive_optimum(inst)
        res = brute_force_optimum(inst)
        assert res.set_reliability == pytest.approx(naive_rel, abs=1e-15)
        assert res.selected == naive_sel


def test_oracle_dominance(rng):
    for _ in range(200):
        inst = abstract_instance(rng, int(rng.integers(1, 13)))
        o = brute_force_optimum(inst)
        assert is_disjoint_set(o.selected, inst.conflict)
        assert o.set_reliability >= greedy_backup_select(inst).set_reliability
        assert o.set_reliability >= shortest_path_result(inst).set_reliability


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 14))
def test_link_mode_optimum_dominates_node_mode(seed, n):
    rng = np.random.default_rng(seed)
    records = random_path_list(rng, n)
    rel = rng.uniform(0, 1, len(records))
    paths = [Path(r, p) for r, p in zip(records, rel)]
    ld = brute_force_optimum(PathSetInstance(paths, "link"))
    nd = brute_force_optimum(PathSetInstance(paths, "node"))
    assert ld.set_reliability >= nd.set_reliability
