import json
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hnnroute.core import (
    DisjointnessMode, InstanceFormatError, InvalidInput, Path, PathSetInstance,
    build_conflict_matrix, is_disjoint_set, parse_instance,
)

S, A, B, C, D, E = 0, 1, 2, 3, 9, 5


def brute_conflict(paths, mode):
    """Pairwise intersection check written independently of build_conflict_matrix."""
    n = len(paths)
    rho = np.zeros((n, n), dtype=int)
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            pj, pk = paths[j], paths[k]
            if mode == "node":
                shared = [v for v in pj[1:-1] if v in pk[1:-1]]
            else:
                lj = [set(e) for e in zip(pj, pj[1:])]
                lk = [set(e) for e in zip(pk, pk[1:])]
                shared = [e for e in lj if e in lk]
            rho[j, k] = 1 if shared else 0
    return rho


@pytest.mark.parametrize("mode", ["node", "link"])
def test_disjoint_diamond(mode):
    rho = build_conflict_matrix([(S, A, D), (S, B, D)], mode)
    assert rho[0, 1] == 0


def test_shared_first_hop_conflicts_in_both_modes():
    paths = [(S, A, D), (S, A, C, D)]
    assert build_conflict_matrix(paths, "node")[0, 1] == 1
    assert build_conflict_matrix(paths, "link")[0, 1] == 1


def test_shared_node_without_shared_link():
    paths = [(S, A, C, D), (S, B, A, E, D)]
    nd = build_conflict_matrix(paths, DisjointnessMode.NODE)
    ld = build_conflict_matrix(paths, DisjointnessMode.LINK)
    assert nd[0, 1] == 1 and ld[0, 1] == 0
    np.testing.assert_array_equal(nd, brute_conflict(paths, "node"))
    np.testing.assert_array_equal(ld, brute_conflict(paths, "link"))


def test_reverse_direction_link_counts_as_shared():
    # S-A-B-D uses A->B, S-B-A-D uses B->A
    rho = build_conflict_matrix([(S, A, B, D), (S, B, A, D)], "link")
    assert rho[0, 1] == 1


def test_mismatched_endpoints_rejected():
    with pytest.raises(InvalidInput):
        build_conflict_matrix([(S, A, D), (S, A, C)], "node")


def test_non_simple_path_rejected():
    with pytest.raises(InvalidInput, match="node 1 repeats"):
        Path((0, 1, 2, 1, 9))


def test_is_disjoint_set():
    rho = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=np.int8)
    assert is_disjoint_set([], rho)
    assert is_disjoint_set([1], rho)
    assert not is_disjoint_set([0, 1], rho)
    assert is_disjoint_set([0, 2], rho)
    with pytest.raises(InvalidInput):
        is_disjoint_set([3], rho)


@st.composite
def path_lists(draw):
    relays = list(range(2, 2 + draw(st.integers(1, 6))))
    n = draw(st.integers(0, 8))
    out = []
    for _ in range(n):
        mids = draw(st.lists(st.sampled_from(relays), max_size=3, unique=True))
        out.append((0, *mids, 1))
    return out


@settings(max_examples=200, deadline=None)
@given(path_lists())
def test_conflict_matrix_properties(paths):
    nd = build_conflict_matrix(paths, "node")
    ld = build_conflict_matrix(paths, "link")
    for rho in (nd, ld):
        assert np.array_equal(rho, rho.T)
        assert not np.any(np.diag(rho))
        assert set(np.unique(rho)) <= {0, 1}
    np.testing.assert_array_equal(nd, brute_conflict(paths, "node"))
    np.testing.assert_array_equal(ld, brute_conflict(paths, "link"))
    # distinct simple paths: shared link implies shared intermediate node
    distinct = [(j, k) for j, k in combinations(range(len(paths)), 2) if paths[j] != paths[k]]
    for j, k in distinct:
        assert nd[j, k] >= ld[j, k]


@settings(max_examples=100, deadline=None)
@given(path_lists(), st.randoms(use_true_random=False))
def test_conflict_matrix_permutation_covariance(paths, rnd):
    perm = list(range(len(paths)))
    rnd.shuffle(perm)
    for mode in ("node", "link"):
        rho = build_conflict_matrix(paths, mode)
        rho_p = build_conflict_matrix([paths[i] for i in perm], mode)
        np.testing.assert_array_equal(rho_p, rho[np.ix_(perm, perm)])


def test_instance_roundtrip():
    inst = PathSetInstance.from_lists([(0, 2, 1), (0, 3, 1)], [0.5, 0.25], "node")
    text = json.dumps(inst.to_dict())
    back = parse_instance(text, "node")
    assert [p.nodes for p in back.paths] == [(0, 2, 1), (0, 3, 1)]
    np.testing.assert_array_equal(back.reliabilities, [0.5, 0.25])


@pytest.mark.parametrize("text, match", [
    ('{"source": 0, "destination": 1, "paths": [[0, 2, 2, 1]], "path_reliabilities": [0.5]}',
     "node 2 repeats"),
    ('{"source": 0, "destination": 1, "paths": [[0, 2, 1]]}', "path_reliabilities"),
    ('{"source": 0, "destination": 1,\n "paths": [[0, 2, 1]], "path_reliabilities": [0.5,]}',
     "line 2"),
    ('{"source": 0, "destination": 1, "paths": [[0, 2, 3]], "path_reliabilities": [0.5]}',
     "endpoints"),
    ('{"source": 0, "destination": 1, "paths": [[0, 1]], "path_reliabilities": [1.5]}',
     "outside"),
])
def test_instance_parse_errors(text, match):
    with pytest.raises(InstanceFormatError, match=match):
        parse_instance(text)
