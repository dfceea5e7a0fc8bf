"""Bit-level substrate: packed bit vectors, word primitives, enumerative
block coding and exact binomial arithmetic."""
from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

import gmpy2
import numpy as np

W = 64
MASK64 = (1 << W) - 1


def ceil_lg(x: int) -> int:
    """Smallest e with 2**e >= x (0 for x <= 1)."""
    return (x - 1).bit_length() if x > 1 else 0


def floor_lg(x: int) -> int:
    if x < 1:
        raise ValueError("floor_lg of a non-positive value")
    return x.bit_length() - 1


def width_for(max_value: int) -> int:
    """Field width able to hold every value in [0, max_value]."""
    return max(0, int(max_value)).bit_length()


# ---------------------------------------------------------------- word ops

def popcount_word(w: int) -> int:
    if w < 0:
        raise ValueError("words are unsigned")
    return w.bit_count()


_POP8 = [bin(b).count("1") for b in range(256)]
_SEL8 = [[j for j in range(8) if b >> j & 1] for b in range(256)]


def select_in_word(w: int, j: int) -> int:
    """Position (LSB-first) of the j-th set bit of w, j 1-based."""
    if j < 1 or j > w.bit_count():
        raise ValueError(f"select_in_word: rank {j} out of range")
    pos = 0
    lo = w & 0xFFFFFFFF
    c = lo.bit_count()
    if j > c:
        j -= c
        w >>= 32
        pos = 32
    else:
        w = lo
    lo = w & 0xFFFF
    c = lo.bit_count()
    if j > c:
        j -= c
        w >>= 16
        pos += 16
    b = w & 0xFF
    c = _POP8[b]
    if j > c:
        j -= c
        pos += 8
        b = (w >> 8) & 0xFF
    return pos + _SEL8[b][j - 1]


# ------------------------------------------------------------- bit vectors

class BitVector:
    """Immutable packed bits, LSB-first inside 64-bit words."""

    __slots__ = ("words", "length_bits")

    def __init__(self, words: list[int], length_bits: int):
        need = (length_bits + W - 1) // W
        if len(words) < need:
            words = list(words) + [0] * (need - len(words))
        elif len(words) > need:
            words = list(words[:need])
        if length_bits % W and need:
            words[-1] &= (1 << (length_bits % W)) - 1
        self.words = words
        self.length_bits = length_bits

    def __len__(self):
        return self.length_bits

    def __eq__(self, other):
        return (isinstance(other, BitVector) and self.length_bits == other.length_bits
                and self.words == other.words)

    def __repr__(self):
        if self.length_bits <= 64:
            return f"BitVector('{self.to_string()}')"
        return f"BitVector(<{self.length_bits} bits>)"

    @classmethod
    def empty(cls):
        return cls([], 0)

    @classmethod
    def from_string(cls, s: str):
        s = s.strip()
        bools = np.fromiter((ch == "1" for ch in s), dtype=bool, count=len(s))
        return cls.from_bools(bools)

    @classmethod
    def from_bools(cls, bools):
        bools = np.asarray(bools, dtype=bool)
        n = len(bools)
        if n == 0:
            return cls([], 0)
        pad = (-n) % W
        if pad:
            bools = np.concatenate([bools, np.zeros(pad, dtype=bool)])
        packed = np.packbits(bools, bitorder="little")
        return cls(packed.view("<u8").tolist(), n)

    @classmethod
    def from_positions(cls, positions, m: int):
        bools = np.zeros(m, dtype=bool)
        if len(positions):
            bools[np.asarray(positions, dtype=np.int64)] = True
        return cls.from_bools(bools)

    @classmethod
    def from_words_array(cls, arr: np.ndarray, length_bits: int):
        return cls(arr.astype(np.uint64).tolist(), length_bits)

    def get(self, i: int) -> int:
        if not 0 <= i < self.length_bits:
            raise IndexError(f"bit {i} out of range")
        return (self.words[i >> 6] >> (i & 63)) & 1

    def get_bits(self, pos: int, width: int) -> int:
        """Unsigned field of `width` bits starting at bit `pos`."""
        if width <= 0:
            return 0
        w, s = pos >> 6, pos & 63
        words = self.words
        x = words[w] >> s
        if s + width > 64:
            got = 64 - s
            k = w + 1
            while got < width:
                x |= words[k] << got
                got += 64
                k += 1
        return x & ((1 << width) - 1)

    def word_at(self, pos: int) -> int:
        """64 bits starting at `pos` (zero beyond the end)."""
        w, s = pos >> 6, pos & 63
        words = self.words
        if s == 0:
            return words[w] if w < len(words) else 0
        x = words[w] >> s if w < len(words) else 0
        if w + 1 < len(words):
            x |= (words[w + 1] << (64 - s)) & MASK64
        return x

    def popcount(self) -> int:
        return sum(w.bit_count() for w in self.words)

    def to_bools(self) -> np.ndarray:
        if self.length_bits == 0:
            return np.zeros(0, dtype=bool)
        arr = np.array(self.words, dtype=np.uint64).view(np.uint8)
        return np.unpackbits(arr, bitorder="little")[: self.length_bits].astype(bool)

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_bools())

    def ones(self) -> np.ndarray:
        return np.flatnonzero(self.to_bools())

    def to_bytes(self) -> bytes:
        nbytes = (self.length_bits + 7) // 8
        if nbytes == 0:
            return b""
        return np.array(self.words, dtype="<u8").tobytes()[:nbytes]

    @classmethod
    def from_bytes(cls, data: bytes, length_bits: int):
        nbytes = (length_bits + 7) // 8
        if len(data) != nbytes:
            raise ValueError("byte length does not match bit length")
        if nbytes == 0:
            return cls([], 0)
        if length_bits % 8 and data[-1] >> (length_bits % 8):
            raise ValueError("nonzero padding bits")
        padded = data + b"\0" * ((-nbytes) % 8)
        return cls(np.frombuffer(padded, dtype="<u8").tolist(), length_bits)


class BitWriter:
    """Append-only builder producing a BitVector."""

    def __init__(self):
        self.words: list[int] = []
        self.acc = 0
        self.accbits = 0

    @property
    def length(self) -> int:
        return len(self.words) * W + self.accbits

    def append(self, value: int, width: int):
        if width <= 0:
            return
        if value >> width:
            raise ValueError(f"value {value} does not fit {width} bits")
        self.acc |= value << self.accbits
        self.accbits += width
        while self.accbits >= W:
            self.words.append(self.acc & MASK64)
            self.acc >>= W
            self.accbits -= W

    def append_fields(self, values, width: int):
        for v in values:
            self.append(int(v), width)

    def append_bv(self, bv: BitVector, start: int = 0, nbits: int | None = None):
        if nbits is None:
            nbits = bv.length_bits - start
        pos, end = start, start + nbits
        while pos < end:
            k = min(W, end - pos)
            self.append(bv.get_bits(pos, k), k)
            pos += k

    def pad_to(self, length: int):
        cur = self.length
        if cur > length:
            raise ValueError(f"content of {cur} bits exceeds the padded size {length}")
        while cur < length:
            k = min(W, length - cur)
            self.append(0, k)
            cur += k

    def finish(self) -> BitVector:
        words = list(self.words)
        n = self.length
        if self.accbits:
            words.append(self.acc)
        return BitVector(words, n)


def pack_fields(values, width: int) -> BitVector:
    """Fixed-width fields packed back to back (vectorized)."""
    values = np.asarray(values, dtype=np.uint64)
    n = len(values)
    if width == 0 or n == 0:
        return BitVector([], 0)
    if width > W:
        bw = BitWriter()
        bw.append_fields(values.tolist(), width)
        return bw.finish()
    widths = np.full(n, width, dtype=np.int64)
    return pack_varfields(values, widths)


def pack_varfields(values, widths) -> BitVector:
    """Variable-width fields (each width <= 64) packed back to back."""
    values = np.asarray(values, dtype=np.uint64)
    widths = np.asarray(widths, dtype=np.int64)
    total = int(widths.sum()) if len(widths) else 0
    if total == 0:
        return BitVector([], 0)
    nwords = (total + W - 1) // W
    pos = np.zeros(len(widths), dtype=np.int64)
    np.cumsum(widths[:-1], out=pos[1:])
    keep = widths > 0
    values, widths, pos = values[keep], widths[keep], pos[keep]
    wi = pos >> 6
    sh = (pos & 63).astype(np.uint64)
    out = np.zeros(nwords + 1, dtype=np.uint64)
    np.bitwise_or.at(out, wi, values << sh)
    spill = (pos & 63) + widths > 64
    if spill.any():
        back = (np.uint64(64) - sh[spill])
        np.bitwise_or.at(out, wi[spill] + 1, values[spill] >> back)
    return BitVector(out[:nwords].tolist(), total)


def concat(parts: Sequence[BitVector]) -> BitVector:
    bw = BitWriter()
    for p in parts:
        if bw.accbits == 0 and p.length_bits:
            bw.words.extend(p.words[: p.length_bits // W])
            rem = p.length_bits % W
            if rem:
                bw.append(p.words[-1], rem)
        else:
            bw.append_bv(p)
    return bw.finish()


# ------------------------------------------------------------ combinatorics

class BinomialTable:
    """C(a, b) for 0 <= b <= a <= max_u, built with Pascal's rule."""

    def __init__(self, max_u: int = 63):
        self.max_u = max_u
        rows = [[1]]
        for a in range(1, max_u + 1):
            prev = rows[-1]
            rows.append([1] + [prev[b - 1] + prev[b] for b in range(1, a)] + [1])
        self.rows = rows

    def __call__(self, a: int, b: int) -> int:
        if b < 0 or a < 0 or b > a:
            return 0
        return self.rows[a][b]

    def as_array(self, size: int) -> np.ndarray:
        """Dense (size+1) x (size+2) int64 table, zero outside the triangle."""
        t = np.zeros((size + 1, size + 2), dtype=np.int64)
        for a in range(size + 1):
            t[a, : a + 1] = self.rows[a]
        return t


BINOM = BinomialTable(63)


class BlockCode(NamedTuple):
    cls: int
    offset: int
    width_bits: int


def code_width(c: int, u: int) -> int:
    return ceil_lg(BINOM(u, c))


def _block_bits(bits, u=None) -> list[int]:
    if isinstance(bits, str):
        out = [1 if ch == "1" else 0 for ch in bits.strip()]
    else:
        out = [1 if b else 0 for b in bits]
    if u is not None and len(out) != u:
        raise ValueError(f"block has {len(out)} bits, expected {u}")
    return out


def encode_block(bits, u: int | None = None) -> BlockCode:
    """Enumerative code of a block; block bit 0 is the most significant
    digit of the lexicographic order."""
    b = _block_bits(bits, u)
    u = len(b)
    if u > BINOM.max_u:
        raise ValueError("block wider than the binomial table")
    k = sum(b)
    offset, rem = 0, k
    for j, bit in enumerate(b):
        if bit:
            offset += BINOM(u - 1 - j, rem)
            rem -= 1
    return BlockCode(k, offset, code_width(k, u))


def decode_word(c: int, offset: int, u: int) -> int:
    """Greedy binomial walk; returns the block LSB-first (bit j = block bit j).

    Blocks wider than 16 walk only their first u - 16 positions; the rest
    is one lookup in the u = 16 table."""
    rows = BINOM.rows
    w = 0
    tail = 16 if u > 16 else 0
    for j in range(u - tail):
        if c == 0:
            return w
        a = u - 1 - j
        if c <= a:
            b = rows[a][c]
            if offset >= b:
                w |= 1 << j
                offset -= b
                c -= 1
        else:
            w |= ((1 << c) - 1) << j
            return w
    if tail:
        w |= decode_table(16)[c][offset] << (u - 16)
    return w


def decode_block(code, u: int) -> str:
    c, offset = code[0], code[1]
    if not 0 <= c <= u or u > BINOM.max_u:
        raise ValueError(f"class {c} invalid for u={u}")
    if not 0 <= offset < BINOM(u, c):
        raise ValueError(f"offset {offset} invalid for class {c}, u={u}")
    w = decode_word(c, offset, u)
    return "".join("1" if w >> j & 1 else "0" for j in range(u))


@lru_cache(maxsize=None)
def decode_table(u: int) -> tuple:
    """decode_table(u)[c][offset] -> LSB-first block word (u <= 16)."""
    if u > 16:
        raise ValueError("decode tables are only built for u <= 16")
    v = np.arange(1 << u, dtype=np.int64)
    pc = np.zeros_like(v)
    rev = np.zeros_like(v)
    for j in range(u):
        bit = (v >> (u - 1 - j)) & 1
        pc += bit
        rev |= bit << j
    order = np.argsort(pc, kind="stable")
    counts = np.bincount(pc, minlength=u + 1)
    out, start = [], 0
    for c in range(u + 1):
        out.append(rev[order[start:start + counts[c]]].tolist())
        start += counts[c]
    return tuple(out)


@lru_cache(maxsize=None)
def width_table(u: int) -> tuple:
    return tuple(code_width(c, u) for c in range(u + 1))


def encode_blocks_np(vals: np.ndarray, u: int):
    """Vectorized encode of MSB-first block values -> (class, offset)."""
    vals = vals.astype(np.int64)
    cls = np.zeros(len(vals), dtype=np.int64)
    bits = []
    for j in range(u):
        b = (vals >> (u - 1 - j)) & 1
        bits.append(b)
        cls += b
    table = BINOM.as_array(u)
    rem = cls.copy()
    off = np.zeros(len(vals), dtype=np.int64)
    for j in range(u):
        b = bits[j].astype(bool)
        off[b] += table[u - 1 - j][rem[b]]
        rem -= bits[j]
    return cls, off


# --------------------------------------------------------- information bounds

_EXACT_BELOW = 1 << 14


def _ceil_log2_lgamma(terms) -> int | None:
    """ceil of sum(sign * lg Gamma(a)) from 256-bit MPFR values, or None when
    the value sits too close to an integer to decide."""
    with gmpy2.context(gmpy2.get_context(), precision=256):
        v = gmpy2.mpfr(0)
        for sign, a in terms:
            v += sign * gmpy2.lgamma(a)[0]
        v /= gmpy2.log(2)
        f = gmpy2.floor(v)
        frac = v - f
        eps = gmpy2.mpfr(2) ** -200
        if frac < eps or frac > 1 - eps:
            return None
        return int(f) + 1


@lru_cache(maxsize=4096)
def info_bound(n: int, m: int) -> int:
    """B(n, m) = ceil(lg C(m, n)), exact.

    Large cases go through high-precision log-gamma; ties with an integer
    fall back to the big-integer binomial."""
    if n < 0 or m < 0 or n > m:
        raise ValueError(f"info_bound needs 0 <= n <= m (got n={n}, m={m})")
    if min(n, m - n) >= _EXACT_BELOW:
        got = _ceil_log2_lgamma([(1, m + 1), (-1, n + 1), (-1, m - n + 1)])
        if got is not None:
            return got
    c = gmpy2.comb(m, n)
    return 0 if c == 1 else int((c - 1).bit_length())


@lru_cache(maxsize=1024)
def ktree_bound(n: int, k: int) -> int:
    """ceil(lg (C(kn+1, n) / (kn+1))), the count of k-ary cardinal trees."""
    if k < 1:
        raise ValueError("arity must be at least 1")
    if n < 1:
        raise ValueError("a tree has at least one node")
    N = k * n + 1
    if n >= _EXACT_BELOW and N - n >= _EXACT_BELOW:
        # C(N, n) / N = (N-1)! / (n! (N-n)!)
        got = _ceil_log2_lgamma([(1, N), (-1, n + 1), (-1, N - n + 1)])
        if got is not None:
            return got
    total = gmpy2.comb(N, n)
    q, r = divmod(total, N)
    assert r == 0
    return 0 if q == 1 else int((q - 1).bit_length())
