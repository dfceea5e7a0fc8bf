"""Compressed FID: enumerative block coding with sampled prefix directories
and a segment-based select structure for both S and its complement."""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .bitcore import (BitVector, decode_table, decode_word, encode_blocks_np,
                      pack_fields, pack_varfields, select_in_word, width_for, width_table)
from .errors import InputError
from .rankselect import RsDirectory, check_sorted, encode_region

MAX_TABLE_U = 16
DEFAULT_U = 15
SAMPLE = 64        # blocks per relative directory entry
SUPER = 1024       # blocks per absolute directory entry
IMPLICIT_LEVELS = 3  # dense-tree levels recomputed from the class stream


def default_block_width(m: int) -> int:
    # a fixed 15 keeps the decode table at 2^15 entries; see notes on u
    return max(1, min(DEFAULT_U, m))


@lru_cache(maxsize=None)
def chunk_table(u: int):
    """Per-chunk sums of classes (low 16 bits) and offset widths (high bits)."""
    cw = width_for(u)
    g = max(1, 16 // cw)
    cb = g * cw
    wt = np.array(list(width_table(u)) + [0] * ((1 << cw) - u - 1), dtype=np.int64)
    v = np.arange(1 << cb, dtype=np.int64)
    a = np.zeros_like(v)
    b = np.zeros_like(v)
    for k in range(g):
        f = (v >> (k * cw)) & ((1 << cw) - 1)
        a += f
        b += wt[f]
    return (a + (b << 16)).tolist(), cb


class _SelectPart:
    """Select structure for one bit value (ones, or zeros)."""

    __slots__ = ("bit", "N", "v", "q", "f", "H", "dense_limit", "ns", "wC", "wsp", "wt",
                 "wsptr", "wdptr", "C", "kind", "sp_ptr", "sp", "dn_ptr", "dn", "kindfid",
                 "Clist", "trees")

    PARAMS = ("N", "v", "q", "f", "H", "dense_limit", "ns", "wC", "wsp", "wt", "wsptr", "wdptr")
    SECTIONS = ("C", "kind", "sp_ptr", "sp", "dn_ptr", "dn")

    def params(self):
        return {k: getattr(self, k) for k in self.PARAMS}

    def sections(self):
        return {k: getattr(self, k) for k in self.SECTIONS}

    @classmethod
    def from_parts(cls, bit, params, sections):
        s = cls()
        s.bit = bit
        for k in cls.PARAMS:
            setattr(s, k, params[k])
        for k in cls.SECTIONS:
            setattr(s, k, sections[k])
        nseg = s.q + 1 if s.N else 0
        s.kindfid = RsDirectory(s.kind, 0, nseg, s.ns) if nseg else None
        return s

    def space(self):
        return {k: getattr(self, k).length_bits for k in self.SECTIONS}


def _tree_depth(k: int, f: int) -> int:
    d, span = 1, f
    while span < k:
        span *= f
        d += 1
    return d


def _build_select(bit, counts, positions, p, u, m, H):
    """counts[i] = number of `bit` values in block i; positions sorted."""
    s = _SelectPart()
    s.bit = bit
    s.H = H
    N = int(counts.sum())
    s.N = N
    cum = np.zeros(p + 1, dtype=np.int64)
    np.cumsum(counts, out=cum[1:])
    if p >= 2:
        lgp = math.log2(p)
        s.v = max(1, int(lgp * lgp))
        s.dense_limit = max(1, int(lgp ** 4))
        s.f = max(2, math.ceil(math.sqrt(lgp)))
    else:
        s.v = N + 1
        s.dense_limit = 0
        s.f = 2
    s.q = N // s.v if N else 0
    q = s.q
    if N == 0:
        for k in _SelectPart.SECTIONS:
            setattr(s, k, BitVector.empty())
        s.wC = s.wsp = s.wt = s.wsptr = s.wdptr = s.ns = 0
        s.kindfid = None
        return s
    js = np.arange(1, q + 1, dtype=np.int64) * s.v
    C = np.searchsorted(cum, js, side="left")  # 1-based block of element j*v
    bounds = np.concatenate([[0], C, [p]]).astype(np.int64)
    starts, ends = bounds[:-1], bounds[1:]
    spans = np.minimum(ends * u, m) - starts * u
    if p >= 2:
        sparse = spans > s.dense_limit
    else:
        sparse = np.ones(q + 1, dtype=bool)
    s.wC = width_for(p)
    s.C = pack_fields(C, s.wC)
    kind_bits = BitVector.from_bools(sparse)
    s.kind = encode_region(kind_bits)
    s.ns = int(sparse.sum())
    s.kindfid = RsDirectory(s.kind, 0, q + 1, s.ns)

    # sparse lists: element offsets relative to the segment start
    elo, ehi = cum[starts], cum[ends]
    seg_n = ehi - elo
    sp_idx = np.flatnonzero(sparse)
    if len(sp_idx):
        sizes = seg_n[sp_idx]
        first = np.zeros(len(sizes), dtype=np.int64)
        np.cumsum(sizes[:-1], out=first[1:])
        total = int(sizes.sum())
        take = np.arange(total, dtype=np.int64) + np.repeat(elo[sp_idx] - first, sizes)
        rel = positions[take] - np.repeat(starts[sp_idx] * u, sizes)
        s.wsp = width_for(int(rel.max())) if len(rel) else 0
        s.sp = pack_fields(rel, s.wsp)
        ptr = np.zeros(len(sp_idx), dtype=np.int64)
        np.cumsum(sizes[:-1], out=ptr[1:])
        s.wsptr = width_for(int(sizes.sum()))
        s.sp_ptr = pack_fields(ptr, s.wsptr)
    else:
        s.wsp = s.wsptr = 0
        s.sp = s.sp_ptr = BitVector.empty()

    # dense trees: only levels at height >= IMPLICIT_LEVELS are stored
    dn_idx = np.flatnonzero(~sparse)
    f = s.f
    s.wt = width_for(int(seg_n.max())) if len(seg_n) else 0
    chunks, ptrs, total = [], [], 0
    for i in dn_idx:
        ptrs.append(total)
        k = int(ends[i] - starts[i])
        if k <= 1:
            continue
        D = _tree_depth(k, f)
        if D - 1 < H:
            continue
        seg_cum = cum[starts[i]:ends[i] + 1] - cum[starts[i]]
        for lev in range(D - 1, H - 1, -1):
            span = f ** lev
            edges = np.minimum(np.arange(0, k + span, span), k)
            edges = np.unique(edges)
            chunks.append(seg_cum[edges[1:]] - seg_cum[edges[:-1]])
            total += (len(edges) - 1) * s.wt
    s.dn = pack_fields(np.concatenate(chunks), s.wt) if chunks else BitVector.empty()
    s.wdptr = width_for(total)
    s.dn_ptr = pack_fields(np.array(ptrs, dtype=np.int64), s.wdptr)
    return s


class RrrFid:
    """Block-compressed fully indexable dictionary."""

    KIND = "rrr"

    def __init__(self):
        pass

    # ---------------------------------------------------------------- build
    @classmethod
    def build(cls, elements, m: int, u: int | None = None, implicit_levels: int = IMPLICIT_LEVELS):
        arr = check_sorted(elements, m)
        bools = np.zeros(m, dtype=bool)
        bools[arr] = True
        return cls.from_bools(bools, u, implicit_levels)

    @classmethod
    def from_bools(cls, bools, u: int | None = None, implicit_levels: int = IMPLICIT_LEVELS):
        bools = np.asarray(bools, dtype=bool)
        m = len(bools)
        if u is None:
            u = default_block_width(m)
        if not 1 <= u <= 32:
            raise InputError("block width must lie in [1, 32]")
        self = cls()
        self.m, self.u = m, u
        self.p = p = -(-m // u)
        self.K, self.SS = SAMPLE, SUPER
        self.cw = width_for(u)
        padded = np.zeros(p * u, dtype=bool)
        padded[:m] = bools
        vals = np.zeros(p, dtype=np.int64)
        blocks = padded.reshape(p, u) if p else padded.reshape(0, u)
        for j in range(u):
            vals = (vals << 1) | blocks[:, j]
        cls_, off = encode_blocks_np(vals, u)
        wtab = np.array(width_table(u), dtype=np.int64)
        widths = wtab[cls_]
        self.n = int(cls_.sum())
        self.class_stream = pack_fields(cls_, self.cw)
        self.offset_stream = pack_varfields(off, widths)
        cumA = np.zeros(p + 1, dtype=np.int64)
        np.cumsum(cls_, out=cumA[1:])
        cumB = np.zeros(p + 1, dtype=np.int64)
        np.cumsum(widths, out=cumB[1:])
        K, SS = self.K, self.SS
        sup_i = np.arange(0, p, SS) if p else np.zeros(0, dtype=np.int64)
        rel_i = np.arange(0, p, K) if p else np.zeros(0, dtype=np.int64)
        self.wAs = width_for(self.n)
        self.wBs = width_for(int(cumB[-1]))
        self.wR = width_for(SS * max(u, int(wtab.max())))
        self.a_super = pack_fields(cumA[sup_i], self.wAs)
        self.b_super = pack_fields(cumB[sup_i], self.wBs)
        base_i = (rel_i // SS) * SS
        self.a_rel = pack_fields(cumA[rel_i] - cumA[base_i], self.wR)
        self.b_rel = pack_fields(cumB[rel_i] - cumB[base_i], self.wR)
        blen = np.full(p, u, dtype=np.int64)
        if p:
            blen[-1] = m - (p - 1) * u
        self.sel1 = _build_select(1, cls_, np.flatnonzero(bools), p, u, m, implicit_levels)
        self.sel0 = _build_select(0, blen - cls_, np.flatnonzero(~bools), p, u, m, implicit_levels)
        self._prepare()
        return self

    def _prepare(self):
        u = self.u
        self._dec = decode_table(u) if u <= MAX_TABLE_U else None
        self._wt = width_table(u)
        self._ct, self._cb = chunk_table(u)
        self._g = self._cb // self.cw
        self._fast_scan = 64 % self._cb == 0
        self._span = (64 // self._cb) * self._cb
        self._scan_steps = ((64 // self.cw, self._g) if self._fast_scan
                            else (self._span // self.cw, self._g))
        self._last_len = self.m - (self.p - 1) * u if self.p else 0
        self._cs = self.class_stream.words
        # sampled directories, decoded once (they stay packed in the file)
        K, SS = self.K, self.SS
        A, B = [], []
        for s in range(-(-self.p // K)):
            S = s * K // SS
            A.append(self.a_super.get_bits(S * self.wAs, self.wAs)
                     + self.a_rel.get_bits(s * self.wR, self.wR))
            B.append(self.b_super.get_bits(S * self.wBs, self.wBs)
                     + self.b_rel.get_bits(s * self.wR, self.wR))
        A.append(self.n)
        B.append(self.offset_stream.length_bits)
        self._A, self._B = A, B
        for part in (self.sel1, self.sel0):
            part_C = [part.C.get_bits(k * part.wC, part.wC) for k in range(part.q)]
            part_C.append(self.p)
            part.Clist = part_C
            part.trees = {}

    # --------------------------------------------------------- serialization
    PARAMS = ("m", "n", "u", "K", "SS", "wAs", "wBs", "wR")
    SECTIONS = ("class_stream", "offset_stream", "a_super", "a_rel", "b_super", "b_rel")

    def params(self):
        out = {k: getattr(self, k) for k in self.PARAMS}
        for name, part in (("sel1", self.sel1), ("sel0", self.sel0)):
            for k, v in part.params().items():
                out[f"{name}.{k}"] = v
        return out

    def sections(self):
        out = {k: getattr(self, k) for k in self.SECTIONS}
        for name, part in (("sel1", self.sel1), ("sel0", self.sel0)):
            for k, v in part.sections().items():
                out[f"{name}.{k}"] = v
        return out

    @classmethod
    def from_parts(cls, params, sections):
        self = cls()
        for k in cls.PARAMS:
            setattr(self, k, params[k])
        for k in cls.SECTIONS:
            setattr(self, k, sections[k])
        self.p = -(-self.m // self.u)
        self.cw = width_for(self.u)
        for name, bit in (("sel1", 1), ("sel0", 0)):
            pp = {k.split(".", 1)[1]: v for k, v in params.items() if k.startswith(name + ".")}
            ss = {k.split(".", 1)[1]: v for k, v in sections.items() if k.startswith(name + ".")}
            setattr(self, name, _SelectPart.from_parts(bit, pp, ss))
        self._prepare()
        return self

    def space(self) -> dict:
        out = {"class_stream": self.class_stream.length_bits,
               "offset_stream": self.offset_stream.length_bits,
               "directories": sum(getattr(self, k).length_bits
                                  for k in ("a_super", "a_rel", "b_super", "b_rel"))}
        for name in ("sel1", "sel0"):
            for k, v in getattr(self, name).space().items():
                out[f"{name}.{k}"] = v
        return out

    @property
    def total_bits(self) -> int:
        return sum(self.space().values())

    # ------------------------------------------------------------ internals
    def _class(self, i: int) -> int:
        cw = self.cw
        return self.class_stream.get_bits(i * cw, cw)

    def _acc(self, lo: int, hi: int) -> int:
        """Combined chunk-table sum over blocks [lo, hi): ones in the low
        16 bits, offset widths above."""
        if hi <= lo:
            return 0
        cw, ct = self.cw, self._ct
        pos, end = lo * cw, hi * cw
        acc = 0
        if self._fast_scan:
            words = self._cs
            while pos < end:
                s = pos & 63
                take = 64 - s
                if take > end - pos:
                    take = end - pos
                x = (words[pos >> 6] >> s) & ((1 << take) - 1)
                while x:
                    acc += ct[x & 0xFFFF]
                    x >>= 16
                pos += take
            return acc
        # chunks do not tile a word: read several whole chunks per access
        cb, step = self._cb, self._span
        cmask = (1 << cb) - 1
        get = self.class_stream.get_bits
        while pos < end:
            take = step if step < end - pos else end - pos
            x = get(pos, take)
            while x:
                acc += ct[x & cmask]
                x >>= cb
            pos += take
        return acc

    def _prefix(self, i: int):
        """(ones, offset bits) in blocks [0, i)."""
        K = self.K
        s = i // K
        lo = s * K
        if i - lo <= K // 2 or lo + K > self.p:
            acc = self._acc(lo, i)
            return self._A[s] + (acc & 0xFFFF), self._B[s] + (acc >> 16)
        acc = self._acc(i, lo + K)
        return self._A[s + 1] - (acc & 0xFFFF), self._B[s + 1] - (acc >> 16)

    def _block_len(self, i: int) -> int:
        return self._last_len if i == self.p - 1 else self.u

    def _word(self, i: int, c: int, boff: int) -> int:
        w = self._wt[c]
        off = self.offset_stream.get_bits(boff, w) if w else 0
        if self._dec is not None:
            return self._dec[c][off]
        return decode_word(c, off, self.u)

    # ---------------------------------------------------------------- rank
    def get(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"position {x} out of range [0, {self.m})")
        i = x // self.u
        c = self._class(i)
        if c == 0:
            return 0
        _, b = self._prefix(i)
        return (self._word(i, c, b) >> (x - i * self.u)) & 1

    def rank1(self, x: int) -> int:
        if not 0 <= x <= self.m:
            raise InputError(f"rank position {x} out of range [0, {self.m}]")
        if x == self.m:
            return self.n
        u = self.u
        i = x // u
        r = x - i * u
        a, b = self._prefix(i)
        if r == 0:
            return a
        c = self._class(i)
        if c == 0:
            return a
        return a + (self._word(i, c, b) & ((1 << r) - 1)).bit_count()

    def rank0(self, x: int) -> int:
        return x - self.rank1(x)

    def rank_bit(self, b: int, x: int) -> int:
        return self.rank1(x) if b else self.rank0(x)

    def set_rank(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        u = self.u
        i = x // u
        c = self._class(i)
        if c == 0:
            return -1
        a, b = self._prefix(i)
        word = self._word(i, c, b)
        r = x - i * u
        if not word >> r & 1:
            return -1
        return a + (word & ((1 << r) - 1)).bit_count()

    # -------------------------------------------------------------- select
    def _in_block(self, bit: int, i: int, c: int, r: int, boff: int) -> int:
        word = self._word(i, c, boff) if c else 0
        if not bit:
            word = ~word & ((1 << self._block_len(i)) - 1)
        return i * self.u + select_in_word(word, r)

    def _select(self, bit: int, j: int) -> int:
        sp = self.sel1 if bit else self.sel0
        if not 1 <= j <= sp.N:
            raise InputError(f"select rank {j} out of range [1, {sp.N}]")
        J = j // sp.v
        if J:
            k1 = sp.Clist[J - 1]
            a, boff = self._prefix(k1)
            before = a if bit else min(k1 * self.u, self.m) - a
            if j <= before:
                # the element lies in the last block of segment J
                blk = k1 - 1
                c = self._class(blk)
                cnt = c if bit else self._block_len(blk) - c
                return self._in_block(bit, blk, c, j - (before - cnt), boff - self._wt[c])
            start = k1
        else:
            start, before, boff = 0, 0, 0
        end = sp.Clist[J]
        r = j - before
        kind = sp.kindfid
        if kind.get(J):
            idx = kind.rank1(J)
            ptr = sp.sp_ptr.get_bits(idx * sp.wsptr, sp.wsptr)
            return start * self.u + sp.sp.get_bits((ptr + r - 1) * sp.wsp, sp.wsp)
        return self._dense_select(sp, bit, J, start, end, r, boff)

    def _tree_levels(self, sp, seg, k, D):
        """Stored node counts of one dense segment, read once and kept as
        lists (heights D-1 .. H, each node covering f^height blocks)."""
        f, H, wt = sp.f, sp.H, sp.wt
        idx = seg - sp.kindfid.rank1(seg)
        off = sp.dn_ptr.get_bits(idx * sp.wdptr, sp.wdptr)
        levels = {}
        for lev in range(D - 1, H - 1, -1):
            cnt = -(-k // f ** lev)
            levels[lev] = [sp.dn.get_bits(off + t * wt, wt) for t in range(cnt)]
            off += cnt * wt
        sp.trees[seg] = levels
        return levels

    def _dense_select(self, sp, bit, seg, start, end, r, boff):
        k = end - start
        f, H = sp.f, sp.H
        lo, hi = start, end
        if k > 1:
            D = _tree_depth(k, f)
            if D - 1 >= H:
                levels = sp.trees.get(seg)
                if levels is None:
                    levels = self._tree_levels(sp, seg, k, D)
                node = 0
                for h in range(D, H, -1):
                    counts = levels[h - 1]
                    first = node * f
                    for t in range(f):
                        if first + t >= len(counts):
                            raise AssertionError("dense tree descent overran the segment")
                        cnt = counts[first + t]
                        if r <= cnt:
                            node = first + t
                            break
                        r -= cnt
                span = f ** H
                lo = start + node * span
                hi = min(end, lo + span)
                if lo != start:
                    boff = self._prefix(lo)[1]
        # implicit levels: scan chunk sums, then single blocks
        u, wt, m = self.u, self._wt, self.m
        b = lo
        for g in self._scan_steps:
            while hi - b > g:
                acc = self._acc(b, b + g)
                ones = acc & 0xFFFF
                if bit:
                    cnt = ones
                else:
                    cnt = min((b + g) * u, m) - b * u - ones
                if r <= cnt:
                    break
                r -= cnt
                boff += acc >> 16
                b += g
        while True:
            c = self._class(b)
            cnt = c if bit else self._block_len(b) - c
            if r <= cnt:
                return self._in_block(bit, b, c, r, boff)
            r -= cnt
            boff += wt[c]
            b += 1
            if b >= hi:
                raise AssertionError("select scan ran past the segment")

    def select1(self, j: int) -> int:
        return self._select(1, j)

    def next1(self, x: int) -> int:
        """Smallest set position >= x, or m when there is none."""
        if not 0 <= x <= self.m:
            raise InputError(f"position {x} out of range [0, {self.m}]")
        u, wt = self.u, self._wt
        b = x // u
        if b >= self.p:
            return self.m
        boff = self._prefix(b)[1]
        skip = x - b * u
        while b < self.p:
            c = self._class(b)
            if c:
                word = self._word(b, c, boff) >> skip
                if word:
                    return b * u + skip + (word & -word).bit_length() - 1
            boff += wt[c]
            skip = 0
            b += 1
        return self.m

    def select0(self, j: int) -> int:
        return self._select(0, j)

    def select_bit(self, b: int, j: int) -> int:
        return self._select(1 if b else 0, j)

    # ------------------------------------------------------------- reports
    def class_values(self) -> list[int]:
        return [self._class(i) for i in range(self.p)]

    def decode_all(self) -> np.ndarray:
        out = np.zeros(self.m, dtype=bool)
        for i in range(self.p):
            c = self._class(i)
            if c:
                _, b = self._prefix(i)
                w = self._word(i, c, b)
                for j in range(self._block_len(i)):
                    if w >> j & 1:
                        out[i * self.u + j] = True
        return out


def build_rrr(elements, m: int, u: int | None = None, implicit_levels: int = IMPLICIT_LEVELS) -> RrrFid:
    return RrrFid.build(elements, m, u, implicit_levels)
