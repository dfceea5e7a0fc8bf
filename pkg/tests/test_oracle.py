import math

import pytest
from hypothesis import given, strategies as st

from sidx.bitcore import info_bound
from sidx.errors import InputError
from sidx.oracle import (NaiveMultiDict, NaiveMultiset, NaivePrefixSum, NaiveSet, binomial_growth_bound,
                         check_binomial_growth, exact_info_bound, oracle_rank,
                         oracle_rank_bit, oracle_rankm, oracle_rankm_plus, oracle_select,
                         oracle_select_bit, oracle_selectm)


def test_examples():
    assert oracle_rank({2, 3, 5}, 5) == 2
    assert oracle_rank(set(), 4) == -1
    assert oracle_selectm([1, 1, 3], 3) == 3
    assert oracle_select([5, 2, 3], 1) == 2
    assert oracle_rankm_plus([1, 1, 3], 2) == 2
    assert oracle_rankm([1, 1, 3], 1) == 0


sets = st.integers(1, 64).flatmap(
    lambda m: st.tuples(st.just(m), st.sets(st.integers(0, m - 1))))


@given(sets)
def test_naive_set_matches_scans(args):
    m, S = args
    ref = NaiveSet(S, m)
    for x in range(m):
        assert ref.rank(x) == oracle_rank(S, x)
    for b in (0, 1):
        for i in range(m + 1):
            assert ref.rank_bit(b, i) == oracle_rank_bit(S, m, b, i)
        count = len(S) if b else m - len(S)
        for j in range(1, count + 1):
            assert ref.select_bit(b, j) == oracle_select_bit(S, m, b, j)
    for i in range(1, len(S) + 1):
        assert ref.select(i) == oracle_select(S, i)


@given(sets)
def test_batch_helpers_match(args):
    m, S = args
    ref = NaiveSet(S, m)
    xs = list(range(m))
    assert list(ref.rank_many(xs)) == [ref.rank(x) for x in xs]
    assert list(ref.rank1_many(xs)) == [ref.rank_bit(1, x) for x in xs]
    if S:
        idx = list(range(1, len(S) + 1))
        assert list(ref.select_many(idx)) == [ref.select(i) for i in idx]
    if m > len(S):
        js = list(range(1, m - len(S) + 1))
        assert list(ref.select0_many(js)) == [ref.select_bit(0, j) for j in js]


@given(st.lists(st.integers(0, 20), max_size=30), st.integers(21, 25))
def test_multiset_sort_vs_count(vals, m):
    ref = NaiveMultiset(vals, m)
    for x in range(m):
        assert ref.rankm_plus(x) == oracle_rankm_plus(vals, x)
        assert ref.rankm(x) == oracle_rankm(vals, x)
    for i in range(1, len(vals) + 1):
        assert ref.selectm(i) == ref.selectm_fast(i) == oracle_selectm(vals, i)


@given(st.lists(st.integers(0, 9), min_size=1, max_size=30))
def test_prefix_sum_scan_vs_bisect(xs):
    ref = NaivePrefixSum(xs)
    for x in range(1, ref.total + 1):
        assert ref.pred(x) == ref.pred_fast(x)
    assert ref.sum(len(xs)) == sum(xs)


def test_rejections():
    with pytest.raises(InputError):
        oracle_select([1], 2)
    with pytest.raises(InputError):
        oracle_select_bit([1], 4, 1, 2)
    with pytest.raises(InputError):
        NaivePrefixSum([1, -1])
    with pytest.raises(InputError):
        check_binomial_growth(5, 4, 0)


@given(st.integers(0, 300).flatmap(lambda m: st.tuples(st.integers(0, m), st.just(m))))
def test_exact_bound_matches_bitcore(args):
    n, m = args
    c = math.comb(m, n)
    expect = math.ceil(math.log2(c)) if c > 1 else 0
    assert exact_info_bound(n, m) == info_bound(n, m) == expect


def test_binomial_growth_examples():
    assert check_binomial_growth(7, 50, 0)["difference"] == 0
    r = check_binomial_growth(100, 10 ** 4, 10 ** 2)
    assert r["ok"] and r["difference"] == 1
    r = check_binomial_growth(1, 1000, 1000)
    # B(1, y) = ceil(lg y)
    assert r["difference"] == math.ceil(math.log2(2000)) - math.ceil(math.log2(1000)) == 1
    assert binomial_growth_bound(0, 0, 5, 2.0) == 0.0


@given(st.lists(st.integers(0, 20), min_size=1, max_size=30))
def test_multiset_batch_matches_scalar(vals):
    ref = NaiveMultiset(vals, 21)
    xs = list(range(21))
    assert list(ref.rankm_many(xs)) == [ref.rankm(x) for x in xs]
    assert list(ref.rankm_plus_many(xs)) == [ref.rankm_plus(x) for x in xs]
    idx = list(range(1, ref.n + 1))
    assert list(ref.selectm_many(idx)) == [ref.selectm(i) for i in idx]


@given(st.lists(st.integers(0, 9), min_size=1, max_size=30))
def test_prefix_sum_batch_matches_scalar(xs):
    ref = NaivePrefixSum(xs)
    assert list(ref.sum_many(range(len(xs) + 1))) == [ref.sum(i) for i in range(len(xs) + 1)]
    vals = list(range(1, ref.total + 1))
    assert list(ref.pred_many(vals)) == [ref.pred(x) for x in vals]


@given(st.lists(st.sets(st.integers(0, 9)), min_size=1, max_size=5))
def test_multidict_batch_matches_scalar(sets):
    ref = NaiveMultiDict(sets, 10)
    idx = [i for i in range(ref.s) for _ in range(10)]
    xs = [x for _ in range(ref.s) for x in range(10)]
    assert list(ref.size_many(range(ref.s))) == [ref.size(i) for i in range(ref.s)]
    assert list(ref.rank_many(idx, xs)) == [ref.rank(i, x) for i, x in zip(idx, xs)]
    pairs = [(i, j) for i in range(ref.s) for j in range(1, ref.size(i) + 1)]
    if pairs:
        got = ref.select_many([i for i, _ in pairs], [j for _, j in pairs])
        assert list(got) == [ref.select(i, j) for i, j in pairs]
