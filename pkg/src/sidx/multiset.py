"""Indexable multisets.

Dense: one FID over m + n bits, value i written as a 1 followed by n_i 0s.
Sparse: a dictionary over the distinct values plus an n-bit run string
holding a 1 followed by n_i - 1 0s per distinct value.
Select-only: the zero positions of the dense encoding in a select-only set.
"""
from __future__ import annotations

import math

import numpy as np

from .bitcore import BitVector, info_bound
from .errors import InputError
from .idict import MainDict, SelectOnlySet
from .rankselect import RsDirectory
from .rrrfid import RrrFid


def check_multiset(values, m: int) -> np.ndarray:
    arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values,
                     dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("values must be a flat sequence")
    if m < 0:
        raise InputError("universe size must be non-negative")
    if len(arr):
        if arr[0] < 0 or arr[-1] >= m or arr.min() < 0:
            raise InputError(f"values must lie in [0, {m})")
        if np.any(arr[1:] < arr[:-1]):
            raise InputError("values must be non-decreasing")
    return arr


def _dense_ones(arr: np.ndarray, m: int) -> np.ndarray:
    """Positions of the m ones: value i's 1 sits after all smaller values."""
    below = np.searchsorted(arr, np.arange(m), side="left") if m else np.zeros(0, np.int64)
    return np.arange(m) + below


def dense_encoding(values, m: int) -> BitVector:
    arr = check_multiset(values, m)
    return BitVector.from_positions(_dense_ones(arr, m), m + len(arr))


def prefers_dense(n: int, m: int) -> bool:
    return n >= 2 and m <= 4 * n * math.sqrt(math.log2(n))


def prefers_rrr_runs(n: int, nd: int) -> bool:
    return nd >= 2 and n <= 4 * nd * math.sqrt(math.log2(nd))


def _fid(bools: np.ndarray, rrr: bool):
    if rrr:
        return RrrFid.from_bools(bools)
    return RsDirectory.from_bits(BitVector.from_bools(bools))


def _sub(d: dict, pre: str) -> dict:
    return {k[len(pre):]: v for k, v in d.items() if k.startswith(pre)}


def _nest(pre: str, d: dict) -> dict:
    return {f"{pre}{k}": v for k, v in d.items()}


class DenseMultiset:
    KIND = "dmultiset"

    def __init__(self, n: int, m: int, fid):
        self.n, self.m, self.fid = n, m, fid

    @classmethod
    def build(cls, values, m: int, backing: str = "rrr"):
        arr = check_multiset(values, m)
        bools = np.zeros(m + len(arr), dtype=bool)
        bools[_dense_ones(arr, m)] = True
        return cls(len(arr), m, _fid(bools, backing == "rrr"))

    def _check(self, x):
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")

    def ones(self) -> list[int]:
        """T, the positions of the ones of the encoding."""
        return [self.fid.select1(j) for j in range(1, self.m + 1)]

    def rankm_plus(self, x: int) -> int:
        self._check(x)
        return self.fid.select1(x + 1) - x

    def rankm(self, x: int) -> int:
        self._check(x)
        p = self.fid.select1(x + 1)
        if p + 1 >= self.m + self.n or self.fid.get(p + 1):
            return -1
        return p - x

    def selectm(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InputError(f"select rank {i} out of range [1, {self.n}]")
        return self.fid.select0(i) - i

    def params(self):
        return {"n": self.n, "m": self.m, "rrr": int(isinstance(self.fid, RrrFid)),
                **_nest("fid.", self.fid.params())}

    def sections(self):
        return _nest("fid.", self.fid.sections())

    @classmethod
    def from_parts(cls, params, sections):
        fc = RrrFid if params["rrr"] else RsDirectory
        return cls(params["n"], params["m"],
                   fc.from_parts(_sub(params, "fid."), _sub(sections, "fid.")))

    def space(self) -> dict:
        return _nest("fid.", self.fid.space())


class SparseMultiset:
    KIND = "smultiset"

    def __init__(self, n: int, m: int, distinct: MainDict, runs):
        self.n, self.m, self.distinct, self.runs = n, m, distinct, runs
        self.nd = distinct.n

    @classmethod
    def build(cls, values, m: int, seed: int = 0, check_bound: bool = True):
        arr = check_multiset(values, m)
        n = len(arr)
        uniq, first = np.unique(arr, return_index=True) if n else (arr, arr)
        nd = len(uniq)
        if check_bound and m >= 3 * n and nd < n:
            # n - n' extra run bits are paid for by the smaller dictionary
            assert info_bound(nd, m) + n <= info_bound(n, m) + nd + 1
        bools = np.zeros(n, dtype=bool)
        bools[first] = True
        distinct = MainDict.build(uniq, m, seed=seed)
        return cls(n, m, distinct, _fid(bools, prefers_rrr_runs(n, nd)))

    def rankm(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        r = self.distinct.rank(x)
        return -1 if r < 0 else self.runs.select1(r + 1)

    def selectm(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InputError(f"select rank {i} out of range [1, {self.n}]")
        # ones among positions 0..i-1 of R
        return self.distinct.select(self.runs.rank1(i))

    def params(self):
        return {"n": self.n, "m": self.m, "rrr": int(isinstance(self.runs, RrrFid)),
                **_nest("set.", self.distinct.params()), **_nest("runs.", self.runs.params())}

    def sections(self):
        return {**_nest("set.", self.distinct.sections()), **_nest("runs.", self.runs.sections())}

    @classmethod
    def from_parts(cls, params, sections):
        distinct = MainDict.from_parts(_sub(params, "set."), _sub(sections, "set."))
        fc = RrrFid if params["rrr"] else RsDirectory
        runs = fc.from_parts(_sub(params, "runs."), _sub(sections, "runs."))
        return cls(params["n"], params["m"], distinct, runs)

    def space(self) -> dict:
        return {**_nest("set.", self.distinct.space()), **_nest("runs.", self.runs.space())}


class SelectOnlyMultiset:
    KIND = "somultiset"

    def __init__(self, n: int, m: int, zeros: SelectOnlySet):
        self.n, self.m, self.zeros = n, m, zeros

    @classmethod
    def build(cls, values, m: int):
        arr = check_multiset(values, m)
        n = len(arr)
        # the zero of the i-th value v (0-based) follows v + 1 ones and i zeros
        zpos = arr + 1 + np.arange(n)
        return cls(n, m, SelectOnlySet.build(zpos, m + n))

    def selectm(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InputError(f"select rank {i} out of range [1, {self.n}]")
        return self.zeros.select(i) - i

    def params(self):
        return {"n": self.n, "m": self.m, **_nest("set.", self.zeros.params())}

    def sections(self):
        return _nest("set.", self.zeros.sections())

    @classmethod
    def from_parts(cls, params, sections):
        return cls(params["n"], params["m"],
                   SelectOnlySet.from_parts(_sub(params, "set."), _sub(sections, "set.")))

    def space(self) -> dict:
        return _nest("set.", self.zeros.space())


def build_multiset(values, m: int, branch: str = "auto", seed: int = 0):
    arr = check_multiset(values, m)
    if branch == "auto":
        branch = "dense" if prefers_dense(len(arr), m) else "sparse"
    if branch == "dense":
        return DenseMultiset.build(arr, m)
    if branch == "sparse":
        return SparseMultiset.build(arr, m, seed=seed)
    raise InputError(f"unknown branch {branch!r}")


def rankm(ms, x):
    return ms.rankm(x)


def rankm_plus(ms, x):
    return ms.rankm_plus(x)


def selectm(ms, i):
    return ms.selectm(i)
