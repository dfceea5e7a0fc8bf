import math

import numpy as np
import pytest

from sidx.bitcore import ktree_bound
from sidx.errors import InputError
from sidx.ktree import CardinalTree, build_tree
from sidx.oracle import NaiveTree

from generators import all_trees, random_tree

EXAMPLE = [(0, 0), (0, 2), (1, 1)]


def tree_mismatches(t, n, k, edges):
    ref = NaiveTree(n, k, edges)
    bad = 0
    for x in range(n):
        bad += t.degree(x) != ref.degree(x)
        for j in range(k):
            bad += t.child_by_label(x, j) != ref.child_by_label(x, j)
            if j in ref.kids[x]:
                bad += t.ordinal_of_child(x, j) != ref.ordinal_of_child(x, j)
        for i in range(1, ref.degree(x) + 1):
            bad += t.ith_child(x, i) != ref.ith_child(x, i)
    for i in range(1, n):
        bad += t.parent(i) != ref.parent(i)
    return bad


def test_example():
    t = build_tree(4, 3, EXAMPLE)
    assert t.child_by_label(0, 0) == 1
    assert t.child_by_label(0, 1) is None
    assert t.child_by_label(1, 1) == 3
    assert t.parent(3) == 1 and t.parent(1) == 0
    assert t.degree(0) == 2
    assert t.ith_child(0, 2) == 2
    assert t.ordinal_of_child(1, 1) == 1
    assert t.edges() == EXAMPLE


def test_single_node():
    for k in (1, 5):
        t = build_tree(1, k, [])
        assert t.degree(0) == 0 and t.child_by_label(0, 0) is None
        with pytest.raises(InputError):
            t.parent(0)
        with pytest.raises(InputError):
            t.ordinal_of_child(0, 0)


def test_complete_binary_and_chain():
    t = build_tree(7, 2, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)])
    assert [t.degree(x) for x in range(7)] == [2, 2, 2, 0, 0, 0, 0]
    chain = build_tree(50, 3, [(i, 1) for i in range(49)])
    assert all(chain.parent(i) == i - 1 for i in range(1, 50))


def test_exhaustive_small_trees():
    total = 0
    for n in range(1, 7):
        for k in range(1, 4):
            for edges in all_trees(n, k):
                t = build_tree(n, k, edges)
                assert tree_mismatches(t, n, k, edges) == 0
                assert t.edges() == edges
                total += 1
    # Fuss-Catalan counts C(kn+1, n)/(kn+1) summed over the grid
    assert total == sum(math.comb(k * n + 1, n) // (k * n + 1)
                        for n in range(1, 7) for k in range(1, 4)) == 1974


@pytest.mark.parametrize("n,k", [(200, 2), (1000, 7), (3000, 64), (2000, 1024)])
def test_random_trees(n, k):
    rng = np.random.default_rng(n + k)
    parents, labels = random_tree(rng, n, k)
    t = CardinalTree.from_parents(parents, labels, k, seed=3)
    edges = list(zip(parents, labels))
    ref = NaiveTree(n, k, edges)
    for x in rng.integers(0, n, 100).tolist():
        for j in set(rng.integers(0, k, 8).tolist()) | set(ref.kids[x]):
            c = t.child_by_label(x, j)
            assert c == ref.child_by_label(x, j)
            if c is not None:
                assert t.parent(c) == x
                assert t.ith_child(x, t.ordinal_of_child(x, j)) == c
    assert sum(t.degree(x) for x in range(n)) == n - 1
    assert t.edges() == edges


@pytest.mark.parametrize("n,k", [(1 << 12, 4), (1 << 12, 64), (1 << 12, 1024)])
def test_space_budget(n, k):
    parents, labels = random_tree(np.random.default_rng(k), n, k)
    t = CardinalTree.from_parents(parents, labels, k)
    assert sum(t.space().values()) <= ktree_bound(n, k) + 6 * n + 8192
    assert t.lower_bound() == ktree_bound(n, k)


@pytest.mark.parametrize("n,k,edges", [
    (3, 2, [(0, 0), (0, 2)]),        # label >= k
    (3, 2, [(0, 1), (0, 1)]),        # repeated label
    (3, 2, [(0, 1), (0, 0)]),        # labels out of order
    (4, 2, [(0, 0), (1, 0), (0, 1)]),  # not level order
    (3, 2, [(0, 0), (2, 0)]),        # parent after child
    (3, 2, [(0, 0)]),                # wrong edge count
    (0, 2, []),
    (2, 0, [(0, 0)]),
])
def test_validation(n, k, edges):
    with pytest.raises(InputError):
        build_tree(n, k, edges)


def test_query_ranges():
    t = build_tree(4, 3, EXAMPLE)
    for call in (lambda: t.child_by_label(4, 0), lambda: t.child_by_label(0, 3),
                 lambda: t.ith_child(0, 3), lambda: t.ith_child(3, 1),
                 lambda: t.ordinal_of_child(0, 1), lambda: t.parent(4)):
        with pytest.raises(InputError):
            call()
