"""Searchable prefix sums via the unary encoding "x_i zeros then a one"."""
from __future__ import annotations

import math

import numpy as np

from .bitcore import BitVector
from .errors import InputError
from .rankselect import RsDirectory, encode_region
from .rrrfid import RrrFid


def _check_values(xs) -> np.ndarray:
    arr = np.asarray(list(xs) if not isinstance(xs, np.ndarray) else xs, dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("values must be a flat sequence")
    if len(arr) and arr.min() < 0:
        raise InputError("prefix-sum values must be non-negative")
    return arr


def unary_ones(xs: np.ndarray) -> np.ndarray:
    """Positions of the ones in the unary encoding."""
    if len(xs) == 0:
        return np.zeros(0, dtype=np.int64)
    return np.cumsum(xs) + np.arange(len(xs))


def unary_bits(xs) -> BitVector:
    xs = _check_values(xs)
    length = int(xs.sum()) + len(xs)
    return BitVector.from_positions(unary_ones(xs), length)


def prefers_rrr(n: int, total: int) -> bool:
    if n < 2:
        return False
    return total + n <= 4 * n * math.sqrt(math.log2(n))


class SearchablePrefixSum:
    """Sum and Pred over a sequence of n non-negative integers."""

    KIND = "psum"

    def __init__(self, n: int, total: int, backing):
        self.n = n
        self.total = total
        self.backing = backing

    @classmethod
    def build(cls, xs, backing: str = "auto", u: int | None = None):
        xs = _check_values(xs)
        n, total = len(xs), int(xs.sum())
        if backing == "auto":
            backing = "rrr" if prefers_rrr(n, total) else "plain"
        ones = unary_ones(xs)
        if backing == "rrr":
            bools = np.zeros(total + n, dtype=bool)
            bools[ones] = True
            fid = RrrFid.from_bools(bools, u)
        elif backing == "plain":
            fid = RsDirectory.from_bits(BitVector.from_positions(ones, total + n))
        else:
            raise InputError(f"unknown backing {backing!r}")
        return cls(n, total, fid)

    @classmethod
    def in_region(cls, bv: BitVector, base: int, n: int, total: int):
        """Reader over a plain-directory region written by `region_for`."""
        return cls(n, total, RsDirectory(bv, base, total + n, n))

    @staticmethod
    def region_for(xs) -> BitVector:
        return encode_region(unary_bits(xs))

    # -- queries
    def sum(self, i: int) -> int:
        """Sum of the first i values (i = 0 gives 0)."""
        if not 0 <= i <= self.n:
            raise InputError(f"prefix index {i} out of range [0, {self.n}]")
        if i == 0:
            return 0
        return self.backing.select1(i) - i + 1

    def bounds(self, i: int):
        """(sum(i), sum(i+1)) with one select and a forward scan."""
        if not 0 <= i < self.n:
            raise InputError(f"prefix index {i} out of range [0, {self.n})")
        if i == 0:
            return 0, self.backing.select1(1)
        p = self.backing.select1(i)
        return p - i + 1, self.backing.next1(p + 1) - i

    def pred(self, x: int) -> int:
        """max{i : sum(i) < x}, 0 when no prefix sum is below x."""
        if not 1 <= x <= self.total:
            raise InputError(f"pred argument {x} out of range [1, {self.total}]")
        return self.backing.select0(x) - x + 1

    def value(self, i: int) -> int:
        """x_i, 1-based."""
        if not 1 <= i <= self.n:
            raise InputError(f"index {i} out of range [1, {self.n}]")
        return self.sum(i) - self.sum(i - 1)

    # -- serialization
    @property
    def backing_kind(self) -> str:
        return "rrr" if isinstance(self.backing, RrrFid) else "plain"

    def params(self):
        out = {"n": self.n, "total": self.total, "rrr": int(self.backing_kind == "rrr")}
        out.update({f"fid.{k}": v for k, v in self.backing.params().items()})
        return out

    def sections(self):
        return {f"fid.{k}": v for k, v in self.backing.sections().items()}

    @classmethod
    def from_parts(cls, params, sections):
        fp = {k[4:]: v for k, v in params.items() if k.startswith("fid.")}
        fs = {k[4:]: v for k, v in sections.items() if k.startswith("fid.")}
        fid = (RrrFid if params["rrr"] else RsDirectory).from_parts(fp, fs)
        return cls(params["n"], params["total"], fid)

    def space(self) -> dict:
        return {f"fid.{k}": v for k, v in self.backing.space().items()}


def build_psum(xs, backing: str = "auto", u: int | None = None) -> SearchablePrefixSum:
    return SearchablePrefixSum.build(xs, backing, u)


class SumOnlyPrefixSum:
    """Prefix sums answering only sum(i), via the select-only multiset of
    partial sums over [total+1]."""

    KIND = "sumonly"

    def __init__(self, n: int, total: int, ms):
        self.n, self.total, self.ms = n, total, ms

    @classmethod
    def build(cls, xs):
        from .multiset import SelectOnlyMultiset
        xs = _check_values(xs)
        partial = np.cumsum(xs) if len(xs) else np.zeros(0, dtype=np.int64)
        total = int(partial[-1]) if len(xs) else 0
        return cls(len(xs), total, SelectOnlyMultiset.build(partial, total + 1))

    def partial_sums(self) -> list[int]:
        return [self.ms.selectm(i) for i in range(1, self.n + 1)]

    def sum(self, i: int) -> int:
        if not 0 <= i <= self.n:
            raise InputError(f"prefix index {i} out of range [0, {self.n}]")
        return 0 if i == 0 else self.ms.selectm(i)

    def space(self) -> dict:
        return self.ms.space()


def build_sum_only(xs) -> SumOnlyPrefixSum:
    return SumOnlyPrefixSum.build(xs)
