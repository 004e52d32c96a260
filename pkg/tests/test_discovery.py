import math

import networkx as nx
import pytest

from hnnroute.core import InvalidInput, StalePathError
from hnnroute.discovery import discover_paths, path_reliability
from hnnroute.links import LinkEstimate, LinkSnapshot, build_link_snapshot
from hnnroute.mobility import Kinematics


def make_snapshot(edges, n):
    """Snapshot from explicit {(i, j): p} probabilities."""
    links = {(min(i, j), max(i, j)): LinkEstimate((min(i, j), max(i, j)), p * 100.0, p)
             for (i, j), p in edges.items()}
    return LinkSnapshot(0.0, 100.0, links, 100.0, n)


def dfs_oracle(snapshot, s, d, ttl):
    g = nx.Graph()
    g.add_nodes_from(range(snapshot.node_count))
    g.add_edges_from(snapshot.links)
    return {tuple(p) for p in nx.all_simple_paths(g, s, d, cutoff=ttl)}


def random_snapshot(rng, n, r=120.0):
    kin = [Kinematics(*rng.uniform(0, 300, 2), rng.uniform(0, 20), rng.uniform(0, 2 * math.pi))
           for _ in range(n)]
    return build_link_snapshot(kin, r)


def test_single_hop():
    snap = make_snapshot({(0, 1): 0.7}, 2)
    cache = discover_paths(snap, 0, 1, ttl=1)
    assert [p.nodes for p in cache.paths] == [(0, 1)]
    assert cache.paths[0].reliability == pytest.approx(0.7)


def test_diamond():
    S, A, B, D = 0, 1, 2, 3
    snap = make_snapshot({(S, A): 0.9, (A, D): 0.8, (S, B): 0.5, (B, D): 0.5}, 4)
    cache = discover_paths(snap, S, D, ttl=3)
    assert {p.nodes for p in cache.paths} == dfs_oracle(snap, S, D, 3) == {(S, A, D), (S, B, D)}
    rel = {p.nodes: p.reliability for p in cache.paths}
    assert rel[(S, A, D)] == pytest.approx(0.72)


def test_triangle_has_no_loops():
    S, A, D = 0, 1, 2
    snap = make_snapshot({(S, A): 0.9, (A, D): 0.9, (S, D): 0.4}, 3)
    cache = discover_paths(snap, S, D, ttl=3)
    assert {p.nodes for p in cache.paths} == dfs_oracle(snap, S, D, 3) == {(S, D), (S, A, D)}


def test_ttl_bounds_hop_count():
    line = {(i, i + 1): 1.0 for i in range(5)}
    snap = make_snapshot(line, 6)
    assert discover_paths(snap, 0, 3, ttl=3).paths[0].nodes == (0, 1, 2, 3)
    assert len(discover_paths(snap, 0, 4, ttl=3)) == 0


def test_errors_and_disconnected():
    snap = make_snapshot({(0, 1): 1.0}, 3)
    with pytest.raises(InvalidInput):
        discover_paths(snap, 1, 1)
    assert len(discover_paths(snap, 0, 2)) == 0


def test_cap_keeps_most_reliable():
    # complete graph on 6 nodes gives many 0 -> 1 paths
    edges = {(i, j): 0.1 + 0.1 * ((i + j) % 9) for i in range(6) for j in range(i + 1, 6)}
    snap = make_snapshot(edges, 6)
    full = discover_paths(snap, 0, 1, ttl=3, cap=1000)
    capped = discover_paths(snap, 0, 1, ttl=3, cap=5)
    assert not full.truncated and capped.truncated
    ranked = sorted(full.paths, key=lambda p: (-p.reliability, len(p.nodes), p.nodes))[:5]
    assert {p.nodes for p in capped.paths} == {p.nodes for p in ranked}


def test_path_reliability():
    snap = make_snapshot({(0, 2): 0.9, (2, 1): 0.8, (0, 1): 1.0}, 3)
    assert path_reliability((0, 1), snap) == 1.0
    assert path_reliability((0, 2, 1), snap) == pytest.approx(0.72)
    with pytest.raises(StalePathError):
        path_reliability((0, 3, 1), snap)


def test_three_link_reliability_from_raw_lets(rng):
    for _ in range(20):
        snap = random_snapshot(rng, 10)
        cache = discover_paths(snap, 0, 1, ttl=3)
        for p in cache.paths:
            if p.hops == 3:
                lets = [snap.links[(min(a, b), max(a, b))].let_s for a, b in zip(p.nodes, p.nodes[1:])]
                expect = math.prod(1.0 if math.isinf(t) else t / snap.let_max for t in lets)
                assert path_reliability(p, snap) == pytest.approx(expect, rel=1e-12)
                return
    pytest.skip("no 3-link path drawn")


def test_completeness_against_dfs(rng):
    for _ in range(100):
        n = int(rng.integers(3, 11))
        ttl = int(rng.integers(1, 4))
        snap = random_snapshot(rng, n)
        cache = discover_paths(snap, 0, n - 1, ttl=ttl, cap=10_000)
        assert not cache.truncated
        records = [p.nodes for p in cache.paths]
        assert len(records) == len(set(records))
        assert set(records) == dfs_oracle(snap, 0, n - 1, ttl)
        for p in cache.paths:
            assert len(set(p.nodes)) == len(p.nodes) and p.hops <= ttl
            assert p.reliability == pytest.approx(path_reliability(p, snap), rel=1e-12, abs=0)


def test_route_cache_json():
    snap = make_snapshot({(0, 2): 0.9, (2, 1): 0.8}, 3)
    text = discover_paths(snap, 0, 1).to_json()
    assert '"source": 0' in text and '"path_reliabilities"' in text
