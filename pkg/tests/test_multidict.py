import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sidx.bitcore import info_bound
from sidx.errors import InputError
from sidx.multidict import (Digraph, PairDict, build_pairdict, digraph_adjacent,
                            digraph_neighbor, digraph_out_degree, md_rank, md_select, md_size)
from sidx.oracle import NaiveMultiDict

from generators import random_sets_collection


def mismatches(pd, sets, m, probes):
    ref = NaiveMultiDict(sets, m)
    bad = 0
    for i in range(len(sets)):
        bad += pd.size(i) != ref.size(i)
        for x in probes:
            bad += pd.rank(i, x) != ref.rank(i, x)
        for j in range(1, ref.size(i) + 1):
            bad += pd.select(i, j) != ref.select(i, j)
    return bad


def test_example():
    d = build_pairdict([[5], [], [3]], 8)
    assert [md_size(d, i) for i in range(3)] == [1, 0, 1]
    assert md_rank(d, 0, 5) == 0
    assert md_rank(d, 0, 3) == -1
    assert md_select(d, 2, 1) == 3
    with pytest.raises(InputError):
        md_select(d, 1, 1)


@pytest.mark.parametrize("mode", ["auto", "dense", "sparse"])
def test_exhaustive_two_sets(mode):
    m = 3
    subsets = [[x for x in range(m) if b >> x & 1] for b in range(1 << m)]
    for a, b in itertools.product(subsets, repeat=2):
        if not a and not b:
            continue
        d = PairDict.build([a, b], m, mode=mode)
        assert mismatches(d, [a, b], m, range(m)) == 0


@pytest.mark.parametrize("s,m,n", [(8, 1 << 20, 1 << 12), (1000, 1 << 16, 5000),
                                   (50, 200, 6000), (3, 1 << 30, 100), (64, 37, 1000)])
def test_random_collections(s, m, n):
    rng = np.random.default_rng(s * 7 + n)
    sets = random_sets_collection(rng, s, m, n)
    d = PairDict.build(sets, m, seed=s)
    probes = sorted(set(rng.integers(0, m, 40).tolist()) | {0, m - 1} |
                    {v for st in sets[:3] for v in st})
    assert mismatches(d, sets, m, probes) == 0
    if d.core.dense is None:
        assert d.mp % (1 << d.l) == 0 and d.mp >= m
        assert d.rounding_ok in (True, None)


@given(st.integers(1, 6), st.integers(1, 40), st.data())
def test_boundary_is_prefix_size(s, m, data):
    sets = [sorted(data.draw(st.sets(st.integers(0, m - 1), max_size=m))) for _ in range(s)]
    n = sum(map(len, sets))
    if n == 0 or s > 4 * n:
        return
    d = PairDict.build(sets, m)
    sizes = [len(x) for x in sets]
    assert [d.boundary_rank(i) for i in range(s + 1)] == list(np.cumsum([0] + sizes))


def test_space_near_bound():
    rng = np.random.default_rng(2)
    s, m, n = 256, 1 << 24, 1 << 14
    d = PairDict.build(random_sets_collection(rng, s, m, n), m)
    assert sum(d.space().values()) <= info_bound(n, m * s) + 3 * n + 8192


def test_set_count_limit():
    with pytest.raises(InputError):
        PairDict.build([[1]] + [[]] * 4, 4)
    assert PairDict.build([[1]] + [[]] * 3, 4).size(3) == 0


def test_rejects_bad_input():
    with pytest.raises(InputError):
        PairDict.from_pairs([0, 0], [2, 1], 1, 4)
    with pytest.raises(InputError):
        PairDict.from_pairs([0], [4], 1, 4)
    with pytest.raises(InputError):
        PairDict.build([[1, 1]], 4)
    with pytest.raises(InputError):
        PairDict.build([[1]], 1 << 62)


def test_three_cycle():
    g = Digraph.build(3, [(0, 1), (1, 2), (2, 0)])
    assert digraph_neighbor(g, 1, 1) == 2
    assert digraph_adjacent(g, 2, 0) and not digraph_adjacent(g, 0, 2)
    assert [digraph_out_degree(g, u) for u in range(3)] == [1, 1, 1]


def test_complete_digraph():
    g = Digraph.build(4, [(u, v) for u in range(4) for v in range(4) if u != v])
    assert all(g.out_degree(u) == 3 for u in range(4))
    assert [g.neighbor(2, i) for i in (1, 2, 3)] == [0, 1, 3]
    assert not any(g.adjacent(u, u) for u in range(4))


def test_empty_graph():
    g = Digraph.build(5, [])
    assert all(g.out_degree(u) == 0 for u in range(5))
    assert not g.adjacent(0, 4)
    with pytest.raises(InputError):
        g.neighbor(0, 1)


def test_random_digraph():
    rng = np.random.default_rng(6)
    nv = 500
    edges = {(int(u), int(v)) for u, v in rng.integers(0, nv, (3000, 2))}
    g = Digraph.build(nv, edges)
    adj = [sorted(v for u, v in edges if u == w) for w in range(nv)]
    for u in range(0, nv, 7):
        assert g.out_degree(u) == len(adj[u])
        assert [g.neighbor(u, i) for i in range(1, len(adj[u]) + 1)] == adj[u]
        for v in range(0, nv, 13):
            assert g.adjacent(u, v) == (v in adj[u])
