"""Randomized oracle-equivalence drivers, one per structure kind.

Each `check_<kind>(rng)` builds one random instance, fires about 10^4
queries at it (members, absent keys, the ends of every range) and returns
(queries, mismatches). Oracle answers come from the generator's own input,
never from the structure.
"""
from __future__ import annotations

import numpy as np

from sidx.errors import InputError
from sidx.idict import MainDict, SelectOnlySet
from sidx.ktree import CardinalTree
from sidx.multidict import PairDict
from sidx.multiset import DenseMultiset, SelectOnlyMultiset, SparseMultiset
from sidx.oracle import NaiveMultiDict, NaiveMultiset, NaivePrefixSum, NaiveSet, NaiveTree
from sidx.prefixsum import SearchablePrefixSum
from sidx.rankselect import RsDirectory
from sidx.rrrfid import RrrFid

from generators import log_uniform, random_multiset, random_set, random_sets_collection, \
    random_tree

QUERIES = 10_000
MAX_N = 1 << 16
MAX_M = 1 << 32
# bit-vector kinds materialize m bits; see the ledger for the cap
MAX_M_BITS = 1 << 24


def _count(got, exp):
    got = np.asarray(got, dtype=np.int64)
    exp = np.asarray(exp, dtype=np.int64)
    return len(exp), int(np.count_nonzero(got != exp))


def _points(rng, hi, k, extra=()):
    """k values in [0, hi) plus the given fixed ones (clipped to range)."""
    pts = rng.integers(0, hi, k) if hi > 0 else np.zeros(0, np.int64)
    fixed = [v for v in extra if 0 <= v < hi]
    return np.concatenate([pts, np.array(fixed, dtype=np.int64)]).astype(np.int64)


def _raises(f, *a):
    try:
        f(*a)
    except InputError:
        return True
    return False


def _set_instance(rng, max_m):
    n = log_uniform(rng, 1, MAX_N)
    m = log_uniform(rng, n, max_m)
    n = min(n, m)
    return random_set(rng, n, m), n, m


def _probe_values(rng, elems, m, k):
    members = rng.choice(elems, min(k // 2, len(elems))) if len(elems) else []
    return np.concatenate([np.asarray(members, np.int64),
                           _points(rng, m, k - len(members), (0, m - 1))])


def check_fid(rng, kind):
    elems, n, m = _set_instance(rng, MAX_M_BITS)
    obj = RsDirectory.build(elems, m) if kind == "plain" else RrrFid.build(elems, m)
    ref = NaiveSet(elems, m)
    q = QUERIES // 6 + 1
    xs = _probe_values(rng, elems, m, q)
    ps = _points(rng, m + 1, q, (0, m))
    # a full set has no zeros to select; give that share to select1
    ones = _points(rng, n, q if n < m else 2 * q, (0, n - 1)) + 1
    zeros = _points(rng, m - n, q, (0, m - n - 1)) + 1
    pairs = [
        ([obj.set_rank(x) for x in xs.tolist()], ref.rank_many(xs)),
        ([obj.get(x) for x in xs.tolist()], ref.rank_many(xs) >= 0),
        ([obj.rank1(i) for i in ps.tolist()], ref.rank1_many(ps)),
        ([obj.rank0(i) for i in ps.tolist()], ps - ref.rank1_many(ps)),
        ([obj.select1(j) for j in ones.tolist()], ref.select_many(ones)),
        ([obj.select0(j) for j in zeros.tolist()], ref.select0_many(zeros)),
    ]
    total = bad = 0
    for got, exp in pairs:
        a, b = _count(got, exp)
        total, bad = total + a, bad + b
    for f, hi in ((obj.select1, n), (obj.select0, m - n)):
        for j in (0, hi + 1):
            total += 1
            bad += not _raises(f, j)
    return total, bad


def check_id(rng):
    elems, n, m = _set_instance(rng, MAX_M)
    obj = MainDict.build(elems, m, seed=int(rng.integers(1 << 31)))
    ref = NaiveSet(elems, m)
    xs = _probe_values(rng, elems, m, QUERIES * 6 // 10)
    idx = _points(rng, n, QUERIES * 4 // 10, (0, n - 1)) + 1
    a = _count([obj.rank(x) for x in xs.tolist()], ref.rank_many(xs))
    b = _count([obj.select(i) for i in idx.tolist()], ref.select_many(idx))
    edge = [not _raises(obj.select, j) for j in (0, n + 1)]
    return a[0] + b[0] + 2, a[1] + b[1] + sum(edge)


def check_selectonly(rng):
    elems, n, m = _set_instance(rng, MAX_M)
    obj = SelectOnlySet.build(elems, m)
    ref = NaiveSet(elems, m)
    idx = _points(rng, n, QUERIES, (0, n - 1)) + 1
    a = _count([obj.select(i) for i in idx.tolist()], ref.select_many(idx))
    edge = [not _raises(obj.select, j) for j in (0, n + 1)]
    return a[0] + 2, a[1] + sum(edge)


def check_multiset(rng, t):
    n = log_uniform(rng, 1, MAX_N)
    m = log_uniform(rng, 1, MAX_M)
    vals = random_multiset(rng, n, m)
    ref = NaiveMultiset(vals, m)
    # rotate through the three representations; dense needs m + n bits
    shape = t % 3
    if shape == 0 and m > MAX_M_BITS:
        shape = 1
    if shape == 0:
        obj = DenseMultiset.build(vals, m)
    elif shape == 1:
        obj = SparseMultiset.build(vals, m, seed=t)
    else:
        obj = SelectOnlyMultiset.build(vals, m)
    share = {0: (2, 4), 1: (2, 2), 2: (1, 0)}[shape]
    idx = _points(rng, n, QUERIES // share[0], (0, n - 1)) + 1
    total, bad = _count([obj.selectm(i) for i in idx.tolist()], ref.selectm_many(idx))
    if shape != 2:
        xs = _probe_values(rng, np.unique(vals), m, QUERIES // share[1])
        a = _count([obj.rankm(x) for x in xs.tolist()], ref.rankm_many(xs))
        total, bad = total + a[0], bad + a[1]
    if shape == 0:
        a = _count([obj.rankm_plus(x) for x in xs.tolist()], ref.rankm_plus_many(xs))
        total, bad = total + a[0], bad + a[1]
    edge = [not _raises(obj.selectm, j) for j in (0, n + 1)]
    return total + 2, bad + sum(edge)


def check_psum(rng):
    n = log_uniform(rng, 1, MAX_N)
    top = log_uniform(rng, 1, max(1, MAX_M_BITS // n))
    xs = rng.integers(0, top + 1, n)
    if rng.random() < 0.2:
        xs[rng.random(n) < 0.7] = 0  # long zero runs
    obj = SearchablePrefixSum.build(xs)
    ref = NaivePrefixSum(xs)
    idx = _points(rng, n + 1, QUERIES // 2 if xs.any() else QUERIES, (0, n))
    total, bad = _count([obj.sum(i) for i in idx.tolist()], ref.sum_many(idx))
    if ref.total:
        vs = _points(rng, ref.total, QUERIES // 2, (0, ref.total - 1)) + 1
        a = _count([obj.pred(v) for v in vs.tolist()], ref.pred_many(vs))
        total, bad = total + a[0], bad + a[1]
    edge = [not _raises(obj.sum, n + 1), not _raises(obj.pred, ref.total + 1)]
    return total + 2, bad + sum(edge)


def check_pairdict(rng):
    while True:
        n = log_uniform(rng, 1, MAX_N)
        s = log_uniform(rng, 1, min(4 * n, 1 << 12))
        m = log_uniform(rng, max(1, -(-n // s)), MAX_M)
        sets = random_sets_collection(rng, s, m, n)
        if s <= 4 * sum(map(len, sets)):
            break
    obj = PairDict.build(sets, m, seed=int(rng.integers(1 << 31)))
    ref = NaiveMultiDict(sets, m)
    si = _points(rng, s, QUERIES // 10, (0, s - 1))
    total, bad = _count([obj.size(i) for i in si.tolist()], ref.size_many(si))
    k = QUERIES * 45 // 100
    ri = _points(rng, s, k)
    rx = _points(rng, m, k)
    # half the rank probes hit stored pairs
    flat = [(i, x) for i, st in enumerate(sets) for x in st]
    pick = rng.integers(0, len(flat), k // 2)
    ri[:k // 2] = [flat[p][0] for p in pick]
    rx[:k // 2] = [flat[p][1] for p in pick]
    rx[-1], rx[-2] = 0, m - 1
    a = _count([obj.rank(i, x) for i, x in zip(ri.tolist(), rx.tolist())],
               ref.rank_many(ri, rx))
    sizes = ref.size_many(np.arange(s))
    nonempty = np.flatnonzero(sizes)
    qi = rng.choice(nonempty, k)
    qj = (rng.random(k) * sizes[qi]).astype(np.int64) + 1
    qj[0], qj[-1] = 1, sizes[qi[-1]]
    b = _count([obj.select(i, j) for i, j in zip(qi.tolist(), qj.tolist())],
               ref.select_many(qi, qj))
    edge = [not _raises(obj.select, int(qi[0]), int(sizes[qi[0]]) + 1)]
    return total + a[0] + b[0] + 1, bad + a[1] + b[1] + sum(edge)


def check_tree(rng):
    n = log_uniform(rng, 2, MAX_N)
    k = log_uniform(rng, 1, 1 << 10)
    parents, labels = random_tree(rng, n, k)
    obj = CardinalTree.from_parents(parents, labels, k, seed=int(rng.integers(1 << 31)))
    ref = NaiveTree(n, k, list(zip(parents, labels)))
    kids = [sorted(d) for d in ref.kids]
    per = QUERIES // 5
    xs = _points(rng, n, per, (0, n - 1)).tolist()
    js = _points(rng, k, per, (0, k - 1)).tolist()
    # half the label probes follow a real edge
    for t in range(0, per, 2):
        c = int(rng.integers(1, n))
        xs[t], js[t] = parents[c - 1], labels[c - 1]
    got = [obj.child_by_label(x, j) for x, j in zip(xs, js)]
    exp = [ref.kids[x].get(j) for x, j in zip(xs, js)]
    total, bad = len(exp), sum(a != b for a, b in zip(got, exp))
    cs = (_points(rng, n - 1, per, (0, n - 2)) + 1).tolist()
    total += len(cs)
    bad += sum(obj.parent(c) != ref.par[c] for c in cs)
    dx = _points(rng, n, per, (0, n - 1)).tolist()
    total += len(dx)
    bad += sum(obj.degree(x) != len(kids[x]) for x in dx)
    inner = [x for x in range(n) if kids[x]]
    ox = rng.choice(inner, per)
    for x in ox.tolist():
        i = int(rng.integers(1, len(kids[x]) + 1))
        j = kids[x][i - 1]
        total += 2
        bad += obj.ith_child(x, i) != ref.kids[x][j]
        bad += obj.ordinal_of_child(x, j) != i
    edge = [not _raises(obj.parent, 0), not _raises(obj.ith_child, 0, len(kids[0]) + 1)]
    return total + 2, bad + sum(edge)


def check_tree_exhaustive(n, k, edges):
    """Every defined query on one small tree."""
    t = CardinalTree.build(n, k, edges)
    ref = NaiveTree(n, k, edges)
    q = bad = 0
    for x in range(n):
        q += 1
        bad += t.degree(x) != ref.degree(x)
        for j in range(k):
            q += 1
            bad += t.child_by_label(x, j) != ref.child_by_label(x, j)
            if j in ref.kids[x]:
                q += 1
                bad += t.ordinal_of_child(x, j) != ref.ordinal_of_child(x, j)
        for i in range(1, ref.degree(x) + 1):
            q += 1
            bad += t.ith_child(x, i) != ref.ith_child(x, i)
    for i in range(1, n):
        q += 1
        bad += t.parent(i) != ref.parent(i)
    q += 1
    bad += t.edges() != list(edges)
    return q, bad
