"""Plain fully indexable dictionary: a bit vector plus a two-level rank
directory and sampled select positions.

The directory can live anywhere inside a larger bit region; its layout is a
pure function of (length, ones), so an embedding structure only needs the
base offset to use it.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .bitcore import W, BitVector, concat, pack_fields, select_in_word, width_for
from .errors import InputError

SR = 8192  # select sampling rate
ALPHA = 1.5  # aux <= ALPHA * m lglg m / lg m + GAMMA
GAMMA = 256


def check_sorted(elements, m: int) -> np.ndarray:
    """Validate a strictly increasing sequence inside [m]."""
    arr = np.asarray(list(elements) if not isinstance(elements, np.ndarray) else elements,
                     dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("elements must be a flat sequence")
    if m < 0:
        raise InputError("universe size must be non-negative")
    if len(arr):
        if arr[0] < 0 or arr[-1] >= m:
            raise InputError(f"elements must lie in [0, {m})")
        if len(arr) > 1 and not np.all(arr[1:] > arr[:-1]):
            raise InputError("elements must be strictly increasing")
    return arr


def words_per_super(length: int) -> int:
    lg = max(1, (length - 1).bit_length()) if length > 1 else 1
    return max(1, (lg + 1) // 2)


@lru_cache(maxsize=8192)
def layout(length: int, ones: int) -> dict:
    """Offsets (relative to base), counts and widths of each part."""
    nw = (length + W - 1) // W
    wps = words_per_super(length)
    nsb = (nw + wps - 1) // wps
    sb_bits = W * wps
    ws = width_for(length)
    wb = width_for(sb_bits - W)
    zeros = length - ones
    n1 = max(0, -(-ones // SR) - 1)
    n0 = max(0, -(-zeros // SR) - 1)
    off = length
    parts = {}
    for name, count, width in (("super_ranks", max(0, nsb - 1), ws),
                               ("block_ranks", nw - nsb, wb),
                               ("samples1", n1, ws),
                               ("samples0", n0, ws)):
        parts[name] = (off, count, width)
        off += count * width
    return dict(nw=nw, wps=wps, nsb=nsb, sb_bits=sb_bits, parts=parts, total=off)


def region_bits(length: int, ones: int) -> int:
    return layout(length, ones)["total"]


def encode_region(bits: BitVector) -> BitVector:
    """Bits followed by their directory, as one region."""
    length = bits.length_bits
    arr = np.array(bits.words, dtype=np.uint64)
    wc = np.bitwise_count(arr).astype(np.int64) if len(arr) else np.zeros(0, np.int64)
    cum = np.zeros(len(wc) + 1, dtype=np.int64)
    np.cumsum(wc, out=cum[1:])
    ones = int(cum[-1])
    lay = layout(length, ones)
    wps, nw, nsb = lay["wps"], lay["nw"], lay["nsb"]
    parts = lay["parts"]
    sup = cum[np.arange(1, nsb) * wps]
    widx = np.arange(nw)
    keep = widx % wps != 0
    blk = (cum[:nw] - cum[(widx // wps) * wps])[keep]
    bools = bits.to_bools()
    pos1 = np.flatnonzero(bools)
    pos0 = np.flatnonzero(~bools)
    s1 = pos1[SR::SR]
    s0 = pos0[SR::SR]
    assert len(s1) == parts["samples1"][1] and len(s0) == parts["samples0"][1]
    out = concat([bits,
                  pack_fields(sup, parts["super_ranks"][2]),
                  pack_fields(blk, parts["block_ranks"][2]),
                  pack_fields(s1, parts["samples1"][2]),
                  pack_fields(s0, parts["samples0"][2])])
    assert out.length_bits == lay["total"]
    return out


class RsDirectory:
    """Rank/select over a plain bit vector in m + o(m) bits."""

    KIND = "plain"

    def __init__(self, bv: BitVector, base: int, length: int, ones: int):
        self.bv = bv
        self.base = base
        self.m = length
        self.n = ones
        lay = layout(length, ones)
        self.nw, self.wps, self.nsb = lay["nw"], lay["wps"], lay["nsb"]
        self.sb_bits = lay["sb_bits"]
        self.total_bits = lay["total"]
        p = lay["parts"]
        self._sup_off, _, self._ws = p["super_ranks"]
        self._blk_off, _, self._wb = p["block_ranks"]
        self._s1_off, self._n1, _ = p["samples1"]
        self._s0_off, self._n0, _ = p["samples0"]
        self._sup_off += base
        self._blk_off += base
        self._s1_off += base
        self._s0_off += base
        self._aligned = base % W == 0
        self._w0 = base // W

    # -- construction
    @classmethod
    def from_bits(cls, bits: BitVector):
        region = encode_region(bits)
        return cls(region, 0, bits.length_bits, bits.popcount())

    @classmethod
    def build(cls, elements, m: int):
        arr = check_sorted(elements, m)
        return cls.from_bits(BitVector.from_positions(arr, m))

    # -- serialization
    def params(self):
        return {"m": self.m, "n": self.n}

    def sections(self):
        assert self.base == 0
        return {"fid": self.bv}

    @classmethod
    def from_parts(cls, params, sections):
        return cls(sections["fid"], 0, params["m"], params["n"])

    def space(self) -> dict:
        p = layout(self.m, self.n)["parts"]
        return {"bits": self.m,
                "super_ranks": p["super_ranks"][1] * p["super_ranks"][2],
                "block_ranks": p["block_ranks"][1] * p["block_ranks"][2],
                "select_samples": p["samples1"][1] * p["samples1"][2]
                + p["samples0"][1] * p["samples0"][2]}

    def aux_budget(self) -> float:
        m = max(self.m, 4)
        lg = math.log2(m)
        return ALPHA * m * math.log2(lg) / lg + GAMMA

    # -- primitives
    def _word(self, w: int) -> int:
        if self._aligned:
            return self.bv.words[self._w0 + w]
        return self.bv.word_at(self.base + W * w)

    def _super(self, sb: int) -> int:
        if sb == 0:
            return 0
        return self.bv.get_bits(self._sup_off + (sb - 1) * self._ws, self._ws)

    def _block(self, w: int) -> int:
        wps = self.wps
        j = w % wps
        if j == 0:
            return 0
        return self.bv.get_bits(self._blk_off + ((w // wps) * (wps - 1) + j - 1) * self._wb,
                                self._wb)

    def get(self, i: int) -> int:
        if not 0 <= i < self.m:
            raise InputError(f"position {i} out of range [0, {self.m})")
        return (self._word(i >> 6) >> (i & 63)) & 1

    # -- rank
    def rank1(self, i: int) -> int:
        if not 0 <= i <= self.m:
            raise InputError(f"rank position {i} out of range [0, {self.m}]")
        if i == self.m:
            return self.n
        w = i >> 6
        r = self._super(w // self.wps) + self._block(w)
        s = i & 63
        if s:
            r += (self._word(w) & ((1 << s) - 1)).bit_count()
        return r

    def rank0(self, i: int) -> int:
        return i - self.rank1(i)

    def rank_bit(self, b: int, i: int) -> int:
        return self.rank1(i) if b else self.rank0(i)

    def set_rank(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        if not self.get(x):
            return -1
        return self.rank1(x)

    # -- select
    def _sample(self, bit: int, k: int) -> int:
        off = self._s1_off if bit else self._s0_off
        return self.bv.get_bits(off + (k - 1) * self._ws, self._ws)

    def _select(self, bit: int, j: int) -> int:
        count = self.n if bit else self.m - self.n
        if not 1 <= j <= count:
            raise InputError(f"select rank {j} out of range [1, {count}]")
        nsamp = self._n1 if bit else self._n0
        k = (j - 1) // SR
        sbb = self.sb_bits
        lo = 0 if k == 0 else self._sample(bit, k) // sbb
        hi = self._sample(bit, k + 1) // sbb if k < nsamp else self.nsb - 1
        if bit:
            def before(sb):
                return self._super(sb)
        else:
            def before(sb):
                return sb * sbb - self._super(sb)
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if before(mid) < j:
                lo = mid
            else:
                hi = mid - 1
        sb = lo
        r = j - before(sb)
        w_lo = sb * self.wps
        w_hi = min(self.nw, w_lo + self.wps) - 1
        if bit:
            def inner(w):
                return self._block(w)
        else:
            def inner(w):
                return (w - w_lo) * W - self._block(w)
        lo, hi = w_lo, w_hi
        while lo < hi:
            mid = (lo + hi + 1) >> 1
            if inner(mid) < r:
                lo = mid
            else:
                hi = mid - 1
        w = lo
        r -= inner(w)
        word = self._word(w)
        if not bit:
            valid = min(W, self.m - W * w)
            word = ~word & ((1 << valid) - 1)
        return W * w + select_in_word(word, r)

    def select1(self, j: int) -> int:
        return self._select(1, j)

    def next1(self, x: int) -> int:
        """Smallest set position >= x, or m when there is none."""
        if not 0 <= x <= self.m:
            raise InputError(f"position {x} out of range [0, {self.m}]")
        w = x >> 6
        word = self._word(w) >> (x & 63) << (x & 63) if w < self.nw else 0
        while True:
            if word:
                return min(self.m, W * w + (word & -word).bit_length() - 1)
            w += 1
            if w >= self.nw:
                return self.m
            word = self._word(w)

    def select0(self, j: int) -> int:
        return self._select(0, j)

    def select_bit(self, b: int, j: int) -> int:
        return self._select(1 if b else 0, j)


def build_plain(elements, m: int) -> RsDirectory:
    return RsDirectory.build(elements, m)
