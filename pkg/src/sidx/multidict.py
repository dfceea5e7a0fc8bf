"""Several dictionaries over [m] stored as one dictionary over pairs.

Pair <i, j> maps to i*m' + j where m' rounds m up to a multiple of 2^l and
l is the top-level shift of the underlying dictionary. With that rounding
no top-level bucket mixes two sets, so set boundaries are prefix sums of
the bucket sizes.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError
from .idict import MAX_KEY_BITS, MainDict, choose_shift, is_dense
from .bitcore import ceil_lg

SIGMA = 4


def _sub(d: dict, pre: str) -> dict:
    return {k[len(pre):]: v for k, v in d.items() if k.startswith(pre)}


class PairDict:
    KIND = "multidict"

    def __init__(self, s: int, m: int, mp: int, l: int, core: MainDict):
        self.s, self.m, self.mp, self.l, self.core = s, m, mp, l, core
        self.n = core.n
        self._bps = mp >> l if core.dense is None else 0  # buckets per set

    # -- construction
    @classmethod
    def from_pairs(cls, firsts, seconds, s: int, m: int, sigma: int = SIGMA,
                   seed: int = 0, mode: str = "auto"):
        a = np.asarray(firsts, dtype=np.int64)
        b = np.asarray(seconds, dtype=np.int64)
        n = len(a)
        if len(b) != n:
            raise InputError("pair coordinate arrays differ in length")
        if s < 1:
            raise InputError("need at least one set")
        if m < 1:
            raise InputError("per-set universe must be non-empty")
        # an empty collection is trivially representable, whatever s is
        if n and s > sigma * n:
            raise InputError(f"{s} sets exceed {sigma} times the {n} stored keys")
        if n:
            if a.min() < 0 or a.max() >= s or b.min() < 0 or b.max() >= m:
                raise InputError("pair outside [s] x [m]")
            if n > 1:
                da, db = np.diff(a), np.diff(b)
                if np.any((da < 0) | ((da == 0) & (db <= 0))):
                    raise InputError("pairs must be strictly increasing")
        ms = m * s
        if ceil_lg(2 * ms) > MAX_KEY_BITS:
            raise InputError("pair universe too large")
        dense = mode == "dense" or (mode == "auto" and is_dense(n, ms))
        if dense:
            l, mp = 0, m
            core = MainDict.build(a * m + b, ms, mode="dense", seed=seed)
        else:
            l = choose_shift(n, ms)
            mp = (-(-m >> l)) << l
            keys = a * mp + b
            core = MainDict.build(keys, mp * s, mode="sparse", shift=l, seed=seed)
            # every bucket holds pairs of a single set
            assert np.array_equal((keys >> l) // (mp >> l), a), "bucket mixes two sets"
        out = cls(s, m, mp, l, core)
        out.rounding_ok = mp * s < 2 * ms if (1 << l) <= m else None
        return out

    @classmethod
    def build(cls, sets, m: int, **kw):
        sets = [sorted(int(v) for v in st) for st in sets]
        for st in sets:
            if len(set(st)) != len(st):
                raise InputError("duplicate value inside a set")
        firsts = np.repeat(np.arange(len(sets)), [len(st) for st in sets])
        seconds = np.array([v for st in sets for v in st], dtype=np.int64)
        return cls.from_pairs(firsts, seconds, len(sets), m, **kw)

    # -- queries
    def _set(self, i: int):
        if not 0 <= i < self.s:
            raise InputError(f"set index {i} out of range [0, {self.s})")

    def boundary_rank(self, i: int) -> int:
        """Number of stored pairs below <i, 0>, for i in [0, s]."""
        if not 0 <= i <= self.s:
            raise InputError(f"boundary index {i} out of range [0, {self.s}]")
        if self.core.dense is not None:
            return self.core.dense.rank1(i * self.mp)
        return self.core.top.sum(i * self._bps)

    def size(self, i: int) -> int:
        self._set(i)
        return self.boundary_rank(i + 1) - self.boundary_rank(i)

    def global_rank(self, i: int, x: int) -> int:
        """Rank of <i, x> among all pairs, -1 if absent."""
        self._set(i)
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        return self.core.rank(i * self.mp + x)

    def rank(self, i: int, x: int) -> int:
        r = self.global_rank(i, x)
        return -1 if r < 0 else r - self.boundary_rank(i)

    def select(self, i: int, j: int) -> int:
        lo = self.boundary_rank(i) if 0 <= i < self.s else self._set(i)
        hi = self.boundary_rank(i + 1)
        if not 1 <= j <= hi - lo:
            raise InputError(f"select rank {j} out of range [1, {hi - lo}]")
        return self.core.select(lo + j) - i * self.mp

    def first_of(self, r: int) -> int:
        """First coordinate of the r-th smallest pair (1-based)."""
        return self.core.select(r) // self.mp

    # -- serialization
    def params(self):
        out = {"s": self.s, "m": self.m, "mp": self.mp, "l": self.l}
        out.update({f"core.{k}": v for k, v in self.core.params().items()})
        return out

    def sections(self):
        return {f"core.{k}": v for k, v in self.core.sections().items()}

    @classmethod
    def from_parts(cls, params, sections):
        core = MainDict.from_parts(_sub(params, "core."), _sub(sections, "core."))
        return cls(params["s"], params["m"], params["mp"], params["l"], core)

    def space(self) -> dict:
        return {f"core.{k}": v for k, v in self.core.space().items()}


def build_pairdict(sets, m: int, **kw) -> PairDict:
    return PairDict.build(sets, m, **kw)


def md_size(d: PairDict, i: int) -> int:
    return d.size(i)


def md_rank(d: PairDict, i: int, x: int) -> int:
    return d.rank(i, x)


def md_select(d: PairDict, i: int, j: int) -> int:
    return d.select(i, j)


class Digraph:
    """Directed graph on nv vertices as one pair dictionary."""

    def __init__(self, pd: PairDict):
        self.pd = pd
        self.nv = pd.s

    @classmethod
    def build(cls, nv: int, edges, **kw):
        edges = sorted({(int(u), int(v)) for u, v in edges})
        for u, v in edges:
            if not (0 <= u < nv and 0 <= v < nv):
                raise InputError(f"edge ({u}, {v}) outside [0, {nv})")
        firsts = np.array([u for u, _ in edges], dtype=np.int64)
        seconds = np.array([v for _, v in edges], dtype=np.int64)
        return cls(PairDict.from_pairs(firsts, seconds, nv, nv, **kw))

    def adjacent(self, u: int, v: int) -> bool:
        return self.pd.rank(u, v) >= 0

    def out_degree(self, u: int) -> int:
        return self.pd.size(u)

    def neighbor(self, u: int, i: int) -> int:
        return self.pd.select(u, i)


def digraph_adjacent(g: Digraph, u: int, v: int) -> bool:
    return g.adjacent(u, v)


def digraph_out_degree(g: Digraph, u: int) -> int:
    return g.out_degree(u)


def digraph_neighbor(g: Digraph, u: int, i: int) -> int:
    return g.neighbor(u, i)
