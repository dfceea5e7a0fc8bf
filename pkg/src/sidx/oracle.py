"""Reference implementations used as ground truth.

Everything here follows the textbook definitions directly: sorted arrays,
scans and exact big-integer arithmetic. Batch helpers use numpy's
searchsorted on the same sorted arrays so large randomized checks stay fast.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right

import gmpy2
import numpy as np

from .errors import InputError


def _need(cond, msg):
    if not cond:
        raise InputError(msg)


# ------------------------------------------------------------------ sets

def oracle_rank(S, x) -> int:
    """-1 if x not in S else |{y in S : y < x}| (linear scan)."""
    below, found = 0, False
    for y in S:
        if y < x:
            below += 1
        elif y == x:
            found = True
    return below if found else -1


def oracle_select(S, i) -> int:
    s = sorted(S)
    _need(1 <= i <= len(s), f"select rank {i} out of range")
    return s[i - 1]


def oracle_rank_bit(S, m, b, i) -> int:
    _need(0 <= i <= m, f"rank position {i} out of range")
    ones = sum(1 for y in S if y < i)
    return ones if b else i - ones


def oracle_select_bit(S, m, b, j) -> int:
    members = set(S)
    seen = 0
    for p in range(m):
        if (p in members) == bool(b):
            seen += 1
            if seen == j:
                return p
    raise InputError(f"select rank {j} out of range")


class NaiveSet:
    """Sorted-array set with FID and dictionary queries."""

    def __init__(self, elements, m):
        self.s = sorted(int(e) for e in elements)
        self.arr = np.array(self.s, dtype=np.int64)
        self.m = m
        self.n = len(self.s)
        self.members = set(self.s)

    def rank(self, x):
        _need(0 <= x < self.m, "value out of range")
        return bisect_left(self.s, x) if x in self.members else -1

    def select(self, i):
        _need(1 <= i <= self.n, "select rank out of range")
        return self.s[i - 1]

    def rank_bit(self, b, i):
        _need(0 <= i <= self.m, "rank position out of range")
        r = bisect_left(self.s, i)
        return r if b else i - r

    def select_bit(self, b, j):
        if b:
            return self.select(j)
        _need(1 <= j <= self.m - self.n, "select rank out of range")
        # j-th value not in S: smallest p with p - |S ∩ [0,p]| = j
        lo, hi = 0, self.m - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if mid + 1 - bisect_right(self.s, mid) >= j:
                hi = mid
            else:
                lo = mid + 1
        return lo

    # batch forms
    def rank_many(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        r = np.searchsorted(self.arr, xs, side="left")
        hit = np.zeros(len(xs), dtype=bool)
        inside = r < self.n
        hit[inside] = self.arr[r[inside]] == xs[inside]
        return np.where(hit, r, -1)

    def rank1_many(self, xs):
        return np.searchsorted(self.arr, np.asarray(xs, dtype=np.int64), side="left")

    def select_many(self, idx):
        return self.arr[np.asarray(idx, dtype=np.int64) - 1]

    def select0_many(self, js):
        js = np.asarray(js, dtype=np.int64)
        # zeros before element k (0-based) = arr[k] - k; the j-th zero sits
        # after the elements whose gap count is < j
        gaps = self.arr - np.arange(self.n)
        k = np.searchsorted(gaps, js, side="left")
        return js - 1 + k


# -------------------------------------------------------------- multisets

class NaiveMultiset:
    def __init__(self, values, m):
        self.v = sorted(int(x) for x in values)
        self.m = m
        self.n = len(self.v)
        self.arr = np.array(self.v, dtype=np.int64)

    def rankm(self, x):
        _need(0 <= x < self.m, "value out of range")
        lo = bisect_left(self.v, x)
        return lo if lo < self.n and self.v[lo] == x else -1

    def rankm_plus(self, x):
        _need(0 <= x < self.m, "value out of range")
        return bisect_left(self.v, x)

    def selectm(self, i):
        """Largest x in M with rankm(x) <= i-1."""
        _need(1 <= i <= self.n, "select rank out of range")
        best = None
        for x in sorted(set(self.v)):
            if self.rankm(x) <= i - 1:
                best = x
        return best

    def selectm_fast(self, i):
        _need(1 <= i <= self.n, "select rank out of range")
        return self.v[i - 1]

    # batch forms
    def rankm_plus_many(self, xs):
        return np.searchsorted(self.arr, np.asarray(xs, dtype=np.int64), side="left")

    def rankm_many(self, xs):
        xs = np.asarray(xs, dtype=np.int64)
        r = self.rankm_plus_many(xs)
        hit = np.zeros(len(xs), dtype=bool)
        inside = r < self.n
        hit[inside] = self.arr[r[inside]] == xs[inside]
        return np.where(hit, r, -1)

    def selectm_many(self, idx):
        return self.arr[np.asarray(idx, dtype=np.int64) - 1]


def oracle_rankm(M, x):
    below = sum(1 for y in M if y < x)
    return below if x in M else -1


def oracle_rankm_plus(M, x):
    return sum(1 for y in M if y < x)


def oracle_selectm(M, i):
    _need(1 <= i <= len(M), "select rank out of range")
    cands = [x for x in set(M) if oracle_rankm(M, x) <= i - 1]
    return max(cands)


# ------------------------------------------------------------ prefix sums

class NaivePrefixSum:
    def __init__(self, xs):
        self.x = [int(v) for v in xs]
        _need(all(v >= 0 for v in self.x), "values must be non-negative")
        self.n = len(self.x)
        self.prefix = [0]
        for v in self.x:
            self.prefix.append(self.prefix[-1] + v)
        self.total = self.prefix[-1]

    def sum(self, i):
        _need(0 <= i <= self.n, "index out of range")
        return sum(self.x[:i])

    def pred(self, x):
        """max{i <= n : Sum(i) < x}, 0 when none."""
        _need(1 <= x <= self.total, "value out of range")
        best = 0
        for i in range(1, self.n + 1):
            if self.prefix[i] < x:
                best = i
        return best

    def pred_fast(self, x):
        _need(1 <= x <= self.total, "value out of range")
        return bisect_left(self.prefix, x) - 1

    # batch forms
    def sum_many(self, idx):
        return np.asarray(self.prefix, dtype=np.int64)[np.asarray(idx, dtype=np.int64)]

    def pred_many(self, xs):
        pre = np.asarray(self.prefix, dtype=np.int64)
        return np.searchsorted(pre, np.asarray(xs, dtype=np.int64), side="left") - 1


# ------------------------------------------------------------ pair dicts

class NaiveMultiDict:
    def __init__(self, sets, m):
        self.sets = [sorted(int(v) for v in s) for s in sets]
        self.m = m
        self.s = len(self.sets)

    def size(self, i):
        _need(0 <= i < self.s, "set index out of range")
        return len(self.sets[i])

    def rank(self, i, x):
        _need(0 <= i < self.s and 0 <= x < self.m, "argument out of range")
        return oracle_rank(self.sets[i], x)

    def select(self, i, j):
        _need(0 <= i < self.s, "set index out of range")
        _need(1 <= j <= len(self.sets[i]), "select rank out of range")
        return self.sets[i][j - 1]

    # batch forms over one flat sorted key array, key = i * m + x
    def _flat(self):
        if not hasattr(self, "_keys"):
            self._keys = np.array([i * self.m + x for i, st in enumerate(self.sets) for x in st],
                                  dtype=np.int64)
            self._start = np.cumsum([0] + [len(st) for st in self.sets])
        return self._keys, self._start

    def size_many(self, idx):
        _, start = self._flat()
        idx = np.asarray(idx, dtype=np.int64)
        return start[idx + 1] - start[idx]

    def rank_many(self, idx, xs):
        keys, start = self._flat()
        idx = np.asarray(idx, dtype=np.int64)
        q = idx * self.m + np.asarray(xs, dtype=np.int64)
        r = np.searchsorted(keys, q, side="left")
        hit = np.zeros(len(q), dtype=bool)
        inside = r < len(keys)
        hit[inside] = keys[r[inside]] == q[inside]
        return np.where(hit, r - start[idx], -1)

    def select_many(self, idx, js):
        keys, start = self._flat()
        idx = np.asarray(idx, dtype=np.int64)
        return keys[start[idx] + np.asarray(js, dtype=np.int64) - 1] - idx * self.m


# ----------------------------------------------------------------- trees

class NaiveTree:
    """Cardinal tree from (parent, label) pairs of nodes 1..n-1."""

    def __init__(self, n, k, edges):
        self.n, self.k = n, k
        self.par = [None] + [int(p) for p, _ in edges]
        self.lab = [None] + [int(j) for _, j in edges]
        self.kids = [dict() for _ in range(n)]
        for child in range(1, n):
            self.kids[self.par[child]][self.lab[child]] = child

    def child_by_label(self, x, j):
        _need(0 <= x < self.n and 0 <= j < self.k, "argument out of range")
        return self.kids[x].get(j)

    def parent(self, i):
        _need(1 <= i < self.n, "node has no parent")
        return self.par[i]

    def degree(self, x):
        _need(0 <= x < self.n, "node out of range")
        return len(self.kids[x])

    def ith_child(self, x, i):
        _need(0 <= x < self.n, "node out of range")
        labels = sorted(self.kids[x])
        _need(1 <= i <= len(labels), "child index out of range")
        return self.kids[x][labels[i - 1]]

    def ordinal_of_child(self, x, j):
        _need(0 <= x < self.n and 0 <= j < self.k, "argument out of range")
        _need(j in self.kids[x], "no child with that label")
        return sorted(self.kids[x]).index(j) + 1


# -------------------------------------------------- binomial growth check

def binomial_growth_bound(x, y, c, K):
    """K * (c x / y + lg x + x^2 / y); the lg term is taken as at least 1 so
    the ceiling in B(.,.) is absorbed."""
    if y == 0:
        return 0.0
    lg = max(1.0, math.log2(x)) if x >= 1 else 0.0
    return K * (c * x / y + lg + x * x / y)


def exact_info_bound(n, m) -> int:
    """ceil(lg C(m, n)) straight from the big-integer binomial."""
    _need(0 <= n <= m, "need 0 <= n <= m")
    c = gmpy2.comb(m, n)
    return int((c - 1).bit_length())


def check_binomial_growth(x, y, c, K=2.0):
    """Exact B(x, y+c) - B(x, y) against the growth expression."""
    _need(0 <= x <= y and c >= 0, "need 0 <= x <= y and c >= 0")
    diff = exact_info_bound(x, y + c) - exact_info_bound(x, y)
    bound = binomial_growth_bound(x, y, c, K)
    return {"x": x, "y": y, "c": c, "difference": diff, "bound": bound,
            "ok": diff <= bound}
