import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sidx.errors import InputError
from sidx.oracle import NaiveSet
from sidx.rankselect import RsDirectory

from generators import fid_mismatches

S6 = [2, 3, 5, 7, 11, 13]


def test_empty_set():
    d = RsDirectory.build([], 8)
    assert [d.rank1(x) for x in range(9)] == [0] * 9


def test_full_set():
    d = RsDirectory.build(range(8), 8)
    assert [d.rank1(x) for x in range(9)] == list(range(9))
    assert [d.select1(i) for i in range(1, 9)] == list(range(8))
    assert d.select_bit(1, 5) == 4


def test_six_element_examples():
    d = RsDirectory.build(S6, 16)
    assert d.select1(4) == 7
    assert d.rank_bit(1, 0) == 0
    assert d.rank_bit(1, 6) == 3
    assert d.rank_bit(0, 6) == 3
    assert d.select_bit(1, 1) == 2
    assert d.select_bit(0, 3) == 4


def test_set_rank_examples():
    d = RsDirectory.build([2, 3, 5], 8)
    assert d.set_rank(4) == -1
    assert d.set_rank(5) == 2
    assert d.set_rank(2) == 0


def test_one_past_end_rank_is_total():
    d = RsDirectory.build(S6, 16)
    assert d.rank1(16) == 6 and d.rank0(16) == 10


@pytest.mark.parametrize("elems,m", [([3, 2], 8), ([2, 2], 8), ([8], 8), ([-1], 8)])
def test_build_rejects_bad_input(elems, m):
    with pytest.raises(InputError):
        RsDirectory.build(elems, m)


@pytest.mark.parametrize("call", [lambda d: d.rank1(17), lambda d: d.set_rank(16),
                                  lambda d: d.select1(7), lambda d: d.select0(11),
                                  lambda d: d.select1(0)])
def test_queries_reject_out_of_range(call):
    with pytest.raises(InputError):
        call(RsDirectory.build(S6, 16))


def test_exhaustive_small_universes():
    for m in range(0, 9):
        for bits in itertools.product((0, 1), repeat=m):
            elems = [i for i, b in enumerate(bits) if b]
            assert fid_mismatches(RsDirectory.build(elems, m), elems, m) == 0


@given(st.integers(1, 5000).flatmap(
    lambda m: st.tuples(st.just(m), st.sets(st.integers(0, m - 1), max_size=m))))
def test_invariants_random(args):
    m, s = args
    elems = sorted(s)
    d = RsDirectory.build(elems, m)
    ref = NaiveSet(elems, m)
    rng = np.random.default_rng(m)
    for i in rng.integers(0, m + 1, 50).tolist():
        assert d.rank_bit(0, i) + d.rank_bit(1, i) == i
        assert d.rank1(i) == ref.rank_bit(1, i)
    for j in range(1, len(elems) + 1, max(1, len(elems) // 40)):
        p = d.select_bit(1, j)
        assert d.get(p) == 1 and d.rank1(p) == j - 1
    zeros = m - len(elems)
    for j in range(1, zeros + 1, max(1, zeros // 40)):
        p = d.select_bit(0, j)
        assert d.get(p) == 0 and d.rank0(p) == j - 1


def test_sparse_large_universe_selects():
    # few ones over many superblocks exercises the sampled search
    rng = np.random.default_rng(5)
    m = 1 << 22
    elems = np.sort(rng.choice(m, 3000, replace=False))
    d = RsDirectory.build(elems, m)
    ref = NaiveSet(elems, m)
    idx = rng.integers(1, 3001, 500)
    assert [d.select1(int(j)) for j in idx] == ref.select_many(idx).tolist()
    zs = rng.integers(1, m - 3000 + 1, 500)
    assert [d.select0(int(j)) for j in zs] == ref.select0_many(zs).tolist()


@pytest.mark.parametrize("m", [1 << 12, 1 << 16, 1 << 20])
def test_auxiliary_space_within_budget(m):
    rng = np.random.default_rng(m)
    elems = np.sort(rng.choice(m, m // 2, replace=False))
    d = RsDirectory.build(elems, m)
    sp = d.space()
    assert sp["bits"] == m
    assert sum(sp.values()) - m <= d.aux_budget()
