"""Hashing toolkit for leaf dictionaries: invertible quotient pairs, minimal
perfect hashing, and a store of hash functions shared by many small sets."""
from __future__ import annotations

import math

import numpy as np

from .bitcore import BitVector, BitWriter, ceil_lg, width_for
from .errors import HashConstructionError, InputError
from .rankselect import RsDirectory, encode_region, region_bits

M64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
ATT_BITS = 4  # per-set retry counter stored inline
MAX_ATTEMPTS = 1 << ATT_BITS
MAX_LEVELS = 64
RANGE_EXCESS = 0  # ceil lg ||h|| + ceil lg ||q|| - ceil lg m*, achieved exactly


def mix64(x: int, seed: int) -> int:
    """splitmix64 finalizer over x + seed * golden."""
    z = (x + seed * GOLDEN) & M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & M64
    return z ^ (z >> 31)


def _mix_np(xs: np.ndarray, seed: int) -> np.ndarray:
    z = xs.astype(np.uint64) + np.uint64((seed * GOLDEN) & M64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def h_width(l: int, L: int) -> int:
    """Bits of the reduced key: 2 lg l + 2, capped by the key width."""
    return min(L, 2 * ceil_lg(l) + 2)


class QuotientPair:
    """x -> (h, q) with h the top b bits of a*x mod 2^L and q the rest.

    a is odd, so x -> a*x mod 2^L is a bijection and (h, q) determines x."""

    __slots__ = ("L", "b", "a", "ainv", "_qmask", "_mask")

    def __init__(self, L: int, b: int, a: int):
        if not 0 <= b <= L:
            raise InputError("need 0 <= b <= L")
        self.L, self.b = L, b
        self._mask = (1 << L) - 1
        self._qmask = (1 << (L - b)) - 1
        self.a = (a | 1) & self._mask if L else 0
        self.ainv = pow(self.a, -1, 1 << L) if L else 0

    @property
    def h_range(self) -> int:
        return 1 << self.b

    @property
    def q_range(self) -> int:
        return 1 << (self.L - self.b)

    def h(self, x: int) -> int:
        return ((self.a * x) & self._mask) >> (self.L - self.b)

    def q(self, x: int) -> int:
        return (self.a * x) & self._qmask

    def reconstruct(self, h: int, q: int) -> int:
        return (self.ainv * ((h << (self.L - self.b)) | q)) & self._mask

    def range_excess(self) -> int:
        return ceil_lg(self.h_range) + ceil_lg(self.q_range) - self.L


class SharedFunctionStore:
    """Hash parameters shared by every leaf of one structure.

    Only a 64-bit seed is stored; multipliers for a given key width, set
    size class and attempt number are derived from it. Each leaf keeps a
    ATT_BITS-bit attempt counter inline; `leaves` maps leaf numbers to
    those counters at build time so the per-set bits can be reported."""

    SEED_BITS = 64

    def __init__(self, seed: int = 0):
        self.seed = seed & M64
        self._pairs: dict = {}
        self.leaves: dict = {}

    @property
    def records(self) -> int:
        return len(self.leaves)

    def register(self, number: int, att: int):
        """Leaf numbered by the global rank of its first key."""
        self.leaves[number] = att

    def multiplier(self, L: int, lgsize: int, att: int) -> int:
        if L == 0:
            return 0
        a = mix64((L << 16) | (lgsize << 8) | att, self.seed)
        if L > 64:
            a |= mix64(a, self.seed ^ L) << 64
            a |= mix64(a ^ 1, self.seed) << 128
        return (a | 1) & ((1 << L) - 1)

    def pair(self, L: int, b: int, lgsize: int, att: int) -> QuotientPair:
        key = (L, b, lgsize, att)
        p = self._pairs.get(key)
        if p is None:
            p = QuotientPair(L, b, self.multiplier(L, lgsize, att))
            self._pairs[key] = p
        return p

    def mphf_seed(self, att: int) -> int:
        return mix64(att + 1, self.seed ^ 0x5DEECE66D)

    def description_bits(self) -> int:
        return self.SEED_BITS + ATT_BITS * self.records


def make_quotient_pair(keys, m_star: int, n_star: int | None = None,
                       store: SharedFunctionStore | None = None, start: int = 0):
    """First attempt >= start whose h is injective on keys; (pair, attempt)."""
    keys = [int(k) for k in keys]
    if n_star is not None and len(keys) > n_star:
        raise InputError("set larger than n*")
    if any(not 0 <= k < max(m_star, 1) for k in keys):
        raise InputError("key outside the universe")
    store = store or SharedFunctionStore()
    L = ceil_lg(m_star)
    b = h_width(len(keys), L)
    for att in range(start, MAX_ATTEMPTS):
        p = store.pair(L, b, ceil_lg(len(keys)), att)
        if len({p.h(k) for k in keys}) == len(keys):
            return p, att
    raise HashConstructionError(f"no injective reduction for {len(keys)} keys")


# ------------------------------------------------------------------ MPHF

def _len_width(l: int) -> int:
    return width_for(4 * l + 64)


def mphf_region(keys, seed: int) -> BitVector:
    """[total length][directory region over the level bit arrays].

    Level sizes equal the number of keys still unplaced (gamma = 1)."""
    rem = np.asarray(keys, dtype=np.uint64)
    l = len(rem)
    levels = []
    level = 0
    while len(rem):
        if level >= MAX_LEVELS:
            raise HashConstructionError("mphf level budget exhausted")
        size = len(rem)
        pos = (_mix_np(rem, seed + level) % np.uint64(size)).astype(np.int64)
        cnt = np.bincount(pos, minlength=size)
        alone = cnt[pos] == 1
        bits = np.zeros(size, dtype=bool)
        bits[pos[alone]] = True
        levels.append(bits)
        rem = rem[~alone]
        level += 1
    allbits = np.concatenate(levels) if levels else np.zeros(0, dtype=bool)
    total = len(allbits)
    lw = _len_width(l)
    if total >> lw:
        raise HashConstructionError("mphf longer than its length field")
    w = BitWriter()
    w.append(total, lw)
    w.append_bv(encode_region(BitVector.from_bools(allbits)))
    return w.finish()


def mphf_region_bits(bv: BitVector, base: int, l: int) -> int:
    lw = _len_width(l)
    return lw + region_bits(bv.get_bits(base, lw), l)


class Mphf:
    """Minimal perfect hash read from a region of a shared bit vector."""

    def __init__(self, bv: BitVector, base: int, l: int, seed: int):
        lw = _len_width(l)
        self.l = l
        self.seed = seed
        self.length = bv.get_bits(base, lw)
        self.fid = RsDirectory(bv, base + lw, self.length, l)
        self.size_bits = lw + self.fid.total_bits

    def __call__(self, key: int):
        """Slot in [0, l) for a member; None or an arbitrary slot otherwise."""
        fid = self.fid
        off, rem, level = 0, self.l, 0
        while rem > 0:
            pos = off + mix64(key, self.seed + level) % rem
            if (fid._word(pos >> 6) >> (pos & 63)) & 1:
                return fid.rank1(pos)
            placed = fid.rank1(off + rem) - fid.rank1(off)
            off += rem
            rem -= placed
            level += 1
        return None


def build_mphf(keys, seed: int = 0) -> Mphf:
    keys = [int(k) for k in keys]
    if len(set(keys)) != len(keys):
        raise InputError("mphf keys must be distinct")
    if any(not 0 <= k <= M64 for k in keys):
        raise InputError("mphf keys must fit 64 bits")
    for att in range(MAX_ATTEMPTS):
        s = mix64(att, seed)
        try:
            region = mphf_region(keys, s)
        except HashConstructionError:
            continue
        return Mphf(region, 0, len(keys), s)
    raise HashConstructionError("mphf construction failed")


def mphf_beta(l: int) -> float:
    """Budget for size_bits: beta * l + lg lg bound, with beta = 4."""
    return 4.0 * l + 64 + math.log2(max(2, math.log2(max(2, l))))
