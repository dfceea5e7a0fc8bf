"""Indexable dictionaries: leaf dictionaries, two-level MSB bucketing, a
collection of dictionaries addressed through external prefix sums, and the
top-level bucketed dictionary (plus its select-only sibling).

Every structure below the top level lives inside a region of one shared bit
vector and is located purely by arithmetic on prefix sums, so none of them
carries a header of its own.
"""
from __future__ import annotations

import math

import numpy as np

from .bitcore import BitVector, BitWriter, ceil_lg, concat, floor_lg, pack_fields
from .errors import HashConstructionError, InputError
from .hashkit import (ATT_BITS, MAX_ATTEMPTS, Mphf, SharedFunctionStore, h_width,
                      mphf_region)
from .prefixsum import SearchablePrefixSum
from .rankselect import RsDirectory, check_sorted
from .rrrfid import RrrFid

DEFAULT_D = 16
TOP_U = 31  # widest block whose class still fits 5 bits; see notes
MAX_KEY_BITS = 62
_NEG = -(1 << 30)
_SEED_RETRIES = 8


def _seed_bv(seed: int) -> BitVector:
    return BitVector([seed & ((1 << 64) - 1)], 64)


def _check_universe(m: int):
    if m < 0 or ceil_lg(m) > MAX_KEY_BITS:
        raise InputError(f"universe size must lie in [0, 2^{MAX_KEY_BITS}]")


# ------------------------------------------------------------ plain fields

def search_fields(bv: BitVector, base: int, count: int, width: int, x: int) -> int:
    """Index of x among `count` sorted fields, or -1."""
    lo, hi = 0, count
    while lo < hi:
        mid = (lo + hi) >> 1
        if bv.get_bits(base + mid * width, width) < x:
            lo = mid + 1
        else:
            hi = mid
    if lo < count and bv.get_bits(base + lo * width, width) == x:
        return lo
    return -1


def _psum_bounds(fid: RsDirectory, i: int):
    """(Sum(i), Sum(i+1)) over a unary region with one terminator per slot."""
    if i == 0:
        return 0, fid.select1(1)
    p = fid.select1(i)
    return p - i + 1, fid.next1(p + 1) - i


def _bucket_of(fid: RsDirectory, j: int) -> int:
    """Bucket holding the j-th element (Pred over the unary region)."""
    return fid.select0(j) - j + 1


# ----------------------------------------------------------------- leaves

def leaf_is_packed(l: int, nstar: int) -> bool:
    return l <= math.isqrt(floor_lg(max(nstar, 1)))


def encode_leaf(keys, L: int, nstar: int, store: SharedFunctionStore):
    """(region, attempt) for a leaf over sorted L-bit keys."""
    keys = [int(k) for k in keys]
    l = len(keys)
    b = h_width(l, L)
    lg = ceil_lg(l)
    packed = leaf_is_packed(l, nstar)
    for att in range(MAX_ATTEMPTS):
        p = store.pair(L, b, lg, att)
        hs = [p.h(k) for k in keys]
        if len(set(hs)) != l:
            continue
        w = BitWriter()
        w.append(att, ATT_BITS)
        if packed:
            w.append_fields(hs, b)
            w.append_fields([p.q(k) for k in keys], L - b)
        else:
            seed = store.mphf_seed(att)
            try:
                reg = mphf_region(hs, seed)
            except HashConstructionError:
                continue
            f = Mphf(reg, 0, l, seed)
            slots = [0] * l
            for i, hv in enumerate(hs):
                slots[f(hv)] = i
            w.append_bv(reg)
            w.append_fields(slots, lg)
            w.append_fields(keys, L)
        return w.finish(), att
    raise HashConstructionError(f"leaf of {l} keys: attempts exhausted")


class LeafDict:
    """Leaf dictionary over l keys of L bits, read from a region.

    Packed mode: [attempt][h fields][q fields], searched word-parallel.
    Hashed mode: [attempt][mphf][R: slot -> rank][X: sorted keys]."""

    def __init__(self, bv: BitVector, base: int, l: int, L: int, nstar: int,
                 store: SharedFunctionStore):
        self.bv, self.l, self.L = bv, l, L
        self.packed = leaf_is_packed(l, nstar)
        self.att = bv.get_bits(base, ATT_BITS)
        self.b = b = h_width(l, L)
        self.pair = store.pair(L, b, ceil_lg(l), self.att)
        off = base + ATT_BITS
        if self.packed:
            self.h_off = off
            self.q_off = off + l * b
            self.size_bits = ATT_BITS + l * L
            full = (1 << (l * b)) - 1
            ones = full // ((1 << b) - 1) if b else 0
            self._K = ones
            self._high = ones << (b - 1) if b else 0
            self._low = ones * ((1 << (b - 1)) - 1) if b else 0
            self._full = full
        else:
            self.f = Mphf(bv, off, l, store.mphf_seed(self.att))
            self.r_off = off + self.f.size_bits
            self.x_off = self.r_off + l * ceil_lg(l)
            self.size_bits = self.x_off + l * L - base

    @classmethod
    def build(cls, keys, L: int, nstar: int | None = None, seed: int = 0):
        keys = sorted(int(k) for k in keys)
        if len(set(keys)) != len(keys):
            raise InputError("leaf keys must be distinct")
        if any(not 0 <= k < (1 << L) for k in keys):
            raise InputError("leaf key wider than L bits")
        store = SharedFunctionStore(seed)
        nstar = len(keys) if nstar is None else nstar
        if not keys:
            return EmptyLeaf()
        region, _ = encode_leaf(keys, L, nstar, store)
        return cls(region, 0, len(keys), L, nstar, store)

    def _packed_index(self, hx: int) -> int:
        if self.b == 0:
            return 0 if self.l else -1
        hfield = self.bv.get_bits(self.h_off, self.l * self.b)
        t = hfield ^ (hx * self._K)
        s = (t & ~self._high & self._full) + self._low
        zero = self._high & ~(s | t)
        if not zero:
            return -1
        return ((zero & -zero).bit_length() - 1) // self.b

    def rank(self, x: int) -> int:
        p = self.pair
        hx = p.h(x)
        if self.packed:
            i = self._packed_index(hx)
            if i < 0:
                return -1
            qw = self.L - self.b
            return i if self.bv.get_bits(self.q_off + i * qw, qw) == p.q(x) else -1
        slot = self.f(hx)
        if slot is None:
            return -1
        lg = ceil_lg(self.l)
        i = self.bv.get_bits(self.r_off + slot * lg, lg)
        return i if self.bv.get_bits(self.x_off + i * self.L, self.L) == x else -1

    def select(self, i: int) -> int:
        if not 1 <= i <= self.l:
            raise InputError(f"select rank {i} out of range [1, {self.l}]")
        if self.packed:
            qw = self.L - self.b
            hv = self.bv.get_bits(self.h_off + (i - 1) * self.b, self.b)
            qv = self.bv.get_bits(self.q_off + (i - 1) * qw, qw)
            return self.pair.reconstruct(hv, qv)
        return self.bv.get_bits(self.x_off + (i - 1) * self.L, self.L)


class EmptyLeaf:
    l = 0
    size_bits = 0

    def rank(self, x):
        return -1

    def select(self, i):
        raise InputError("select on an empty leaf")


# -------------------------------------------------------- two-level bucketing
#
# Plans are nested tuples built before c is known:
#   ("x", keys, width)                       explicit sorted fields
#   ("b", n, t, region, [(i, n_i, child)])   first level
#   ("s", n_i, L, region, [(j, size, part)]) second level, part is "x" or
#   ("leaf", region, size, attempt)

def _split(keys: np.ndarray, shift: int, nb: int):
    top = keys >> shift
    sizes = np.bincount(top, minlength=nb) if len(keys) else np.zeros(nb, dtype=np.int64)
    ends = np.cumsum(sizes)
    return sizes, ends


def _plan_second(keys: np.ndarray, t: int, d: int, nstar: int, store):
    ni = len(keys)
    if ni <= d:
        return ("x", keys, t), _NEG
    li = ceil_lg(ni)
    L = t - li
    sizes, ends = _split(keys, L, 1 << li)
    region = SearchablePrefixSum.region_for(sizes)
    assert region.length_bits <= 4 * ni, "second-level prefix sums exceed 4 n_i"
    low = keys & ((1 << L) - 1)
    parts, need = [], _NEG
    for j in np.flatnonzero(sizes).tolist():
        a, b = int(ends[j] - sizes[j]), int(ends[j])
        sub = low[a:b]
        if b - a <= d:
            parts.append((j, b - a, ("x", sub, L)))
        else:
            leaf, att = encode_leaf(sub.tolist(), L, nstar, store)
            parts.append((j, b - a, ("leaf", leaf, b - a, att)))
            need = max(need, -(-leaf.length_bits // (b - a)) - t)
    return ("s", ni, L, region, parts), need


def plan_bucketed(keys, K: int, d: int, nstar: int, store):
    """Plan for a sorted key array of K-bit keys; (plan, smallest usable c)."""
    keys = np.asarray(keys, dtype=np.int64)
    n = len(keys)
    if n <= d:
        return ("x", keys, K), _NEG
    ln = ceil_lg(n)
    t = K - ln
    sizes, ends = _split(keys, t, 1 << ln)
    region = SearchablePrefixSum.region_for(sizes)
    assert region.length_bits <= 4 * n, "first-level prefix sums exceed 4 n"
    low = keys & ((1 << t) - 1)
    children, need = [], _NEG
    for i in np.flatnonzero(sizes).tolist():
        a, b = int(ends[i] - sizes[i]), int(ends[i])
        child, nd = _plan_second(low[a:b], t, d, nstar, store)
        children.append((i, b - a, child))
        need = max(need, nd)
    return ("b", n, t, region, children), need


def _emit_unary(w: BitWriter, region: BitVector, count: int, slots: int, width: int,
                entries, c_slot: int, emit_child, verify: bool):
    """Shared writer for both levels: prefix region padded to 4*count, then
    each child padded to size*c_slot at 4*count + rho*c_slot."""
    start = w.length
    w.append_bv(region)
    w.pad_to(start + 4 * count)
    fid = RsDirectory(region, 0, count + slots, slots) if verify else None
    rho = 0
    for idx, size, child in entries:
        if verify:
            assert _psum_bounds(fid, idx) == (rho, rho + size), "prefix sums disagree"
        s0 = start + 4 * count + rho * c_slot
        assert w.length == s0, "child offset not computable from prefix sums"
        emit_child(child, rho)
        w.pad_to(s0 + size * c_slot)
        rho += size
    w.pad_to(start + 4 * count + count * c_slot)


def emit_bucketed(w: BitWriter, plan, c: int, store, numbase: int = 0, verify: bool = True):
    if plan[0] == "x":
        _, keys, width = plan
        w.append_bv(pack_fields(keys, width))
        return
    _, n, t, region, children = plan

    def second(child, rho1):
        if child[0] == "x":
            w.append_bv(pack_fields(child[1], child[2]))
            return
        _, ni, L, reg2, parts = child

        def leafpart(part, rho2):
            if part[0] == "x":
                w.append_bv(pack_fields(part[1], part[2]))
            else:
                store.register(numbase + rho1 + rho2, part[3])
                w.append_bv(part[1])

        _emit_unary(w, reg2, ni, 1 << (t - L), L, parts, t + c, leafpart, verify)

    _emit_unary(w, region, n, 1 << (ceil_lg(n)), t, children, t + 4 + c, second, verify)


def bucketed_bits(n: int, K: int, d: int, c: int) -> int:
    if n <= d:
        return n * K
    return n * (K - ceil_lg(n) + 8 + c)


class BucketedView:
    """Rank/select over a two-level bucketed region."""

    def __init__(self, bv: BitVector, base: int, n: int, K: int, d: int, c: int,
                 nstar: int, store: SharedFunctionStore):
        self.bv, self.base, self.n, self.K = bv, base, n, K
        self.d, self.c, self.nstar, self.store = d, c, nstar, store
        if n > d:
            ln = ceil_lg(n)
            self.t = K - ln
            self.top = RsDirectory(bv, base, n + (1 << ln), 1 << ln)

    # second level, keys of t bits
    def _second(self, sbase: int, ni: int):
        li = ceil_lg(ni)
        return RsDirectory(self.bv, sbase, ni + (1 << li), 1 << li), self.t - li

    def _part(self, sbase, ni, fid, j, lo, size, L):
        tbase = sbase + 4 * ni + lo * (self.t + self.c)
        if size <= self.d:
            return None, tbase
        return LeafDict(self.bv, tbase, size, L, self.nstar, self.store), tbase

    def _rank_second(self, sbase: int, ni: int, key: int) -> int:
        t = self.t
        if ni <= self.d:
            return search_fields(self.bv, sbase, ni, t, key)
        fid, L = self._second(sbase, ni)
        j = key >> L
        lo, hi = _psum_bounds(fid, j)
        if hi == lo:
            return -1
        leaf, tbase = self._part(sbase, ni, fid, j, lo, hi - lo, L)
        k2 = key & ((1 << L) - 1)
        r = search_fields(self.bv, tbase, hi - lo, L, k2) if leaf is None else leaf.rank(k2)
        return -1 if r < 0 else lo + r

    def _select_second(self, sbase: int, ni: int, i: int) -> int:
        t = self.t
        if ni <= self.d:
            return self.bv.get_bits(sbase + (i - 1) * t, t)
        fid, L = self._second(sbase, ni)
        j = _bucket_of(fid, i)
        lo, hi = _psum_bounds(fid, j)
        leaf, tbase = self._part(sbase, ni, fid, j, lo, hi - lo, L)
        if leaf is None:
            low = self.bv.get_bits(tbase + (i - lo - 1) * L, L)
        else:
            low = leaf.select(i - lo)
        return (j << L) | low

    def rank(self, x: int) -> int:
        if self.n <= self.d:
            return search_fields(self.bv, self.base, self.n, self.K, x)
        t = self.t
        i = x >> t
        lo, hi = _psum_bounds(self.top, i)
        if hi == lo:
            return -1
        sbase = self.base + 4 * self.n + lo * (t + 4 + self.c)
        r = self._rank_second(sbase, hi - lo, x & ((1 << t) - 1))
        return -1 if r < 0 else lo + r

    def select(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InputError(f"select rank {i} out of range [1, {self.n}]")
        if self.n <= self.d:
            return self.bv.get_bits(self.base + (i - 1) * self.K, self.K)
        t = self.t
        b = _bucket_of(self.top, i)
        lo, hi = _psum_bounds(self.top, b)
        sbase = self.base + 4 * self.n + lo * (t + 4 + self.c)
        return (b << t) | self._select_second(sbase, hi - lo, i - lo)


def _build_with_retries(fn, seed: int):
    last = None
    for k in range(_SEED_RETRIES):
        try:
            return fn(seed + k)
        except HashConstructionError as e:
            last = e
    raise last


class BucketedDict:
    """Standalone two-level MSB-bucketed dictionary over [m]."""

    KIND = "bucketed"

    def __init__(self, n: int, m: int, d: int, c: int, seed: int, payload: BitVector):
        self.n, self.m, self.d, self.c, self.seed = n, m, d, c, seed
        self.K = ceil_lg(m)
        self.payload = payload
        self.store = SharedFunctionStore(seed)
        self.view = BucketedView(payload, 0, n, self.K, d, c, n, self.store)

    @classmethod
    def build(cls, elements, m: int, d: int = DEFAULT_D, seed: int = 0):
        _check_universe(m)
        arr = check_sorted(elements, m)
        K = ceil_lg(m)

        def attempt(s):
            store = SharedFunctionStore(s)
            plan, need = plan_bucketed(arr, K, d, len(arr), store)
            c = max(0, need)
            w = BitWriter()
            emit_bucketed(w, plan, c, store)
            bv = w.finish()
            assert bv.length_bits == bucketed_bits(len(arr), K, d, c)
            out = cls(len(arr), m, d, c, s, bv)
            out.store.leaves = store.leaves
            return out

        return _build_with_retries(attempt, seed)

    @property
    def t(self) -> int:
        return self.K - ceil_lg(self.n)

    def closed_form(self) -> int:
        return bucketed_bits(self.n, self.K, self.d, self.c)

    def rank(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        return self.view.rank(x)

    def select(self, i: int) -> int:
        return self.view.select(i)

    def top_sizes(self) -> list[int]:
        if self.n <= self.d:
            return []
        fid = self.view.top
        return [b - a for a, b in (_psum_bounds(fid, i) for i in range(fid.n))]

    def params(self):
        return {"n": self.n, "m": self.m, "d": self.d, "c": self.c}

    def sections(self):
        return {"payload": self.payload, "store": _seed_bv(self.seed)}

    @classmethod
    def from_parts(cls, params, sections):
        return cls(params["n"], params["m"], params["d"], params["c"],
                   sections["store"].get_bits(0, 64), sections["payload"])

    def space(self) -> dict:
        return {"payload": self.payload.length_bits, "store": 64}


def build_bucketed(elements, m: int, d: int = DEFAULT_D, seed: int = 0) -> BucketedDict:
    return BucketedDict.build(elements, m, d, seed)


# ------------------------------------------------------------- collections

class DictCollection:
    """Many dictionaries over k'-bit keys sharing one region.

    Set i occupies [rho_i k', (rho_i + n_i) k') where rho_i comes from the
    caller's prefix-sum oracle. Small sets are sorted fields; a set is
    bucketed iff n_i > d and ceil(lg n_i) >= 8 + c, which makes its
    n_i (t_i + 8 + c) bits fit the slot."""

    def __init__(self, bv: BitVector, base: int, kw: int, d: int, c: int, nstar: int,
                 store: SharedFunctionStore):
        self.bv, self.base, self.kw = bv, base, kw
        self.d, self.c, self.nstar, self.store = d, c, nstar, store

    def is_bucketed(self, ni: int) -> bool:
        return ni > self.d and ceil_lg(ni) >= 8 + self.c

    def _view(self, rho: int, ni: int) -> BucketedView:
        return BucketedView(self.bv, self.base + rho * self.kw, ni, self.kw, self.d,
                            self.c, self.nstar, self.store)

    def rank(self, rho: int, ni: int, x: int) -> int:
        if ni == 0:
            return -1
        if self.is_bucketed(ni):
            return self._view(rho, ni).rank(x)
        return search_fields(self.bv, self.base + rho * self.kw, ni, self.kw, x)

    def select(self, rho: int, ni: int, j: int) -> int:
        if not 1 <= j <= ni:
            raise InputError(f"select rank {j} out of range [1, {ni}]")
        if self.is_bucketed(ni):
            return self._view(rho, ni).select(j)
        return self.bv.get_bits(self.base + (rho + j - 1) * self.kw, self.kw)


def build_collection(sizes, keys, kw: int, d: int, nstar: int, store,
                     numbase: int = 0):
    """Region for consecutive sets (sizes) whose keys are concatenated in
    `keys`. Returns (region, c, number of bucketed sets)."""
    sizes = np.asarray(sizes, dtype=np.int64)
    keys = np.asarray(keys, dtype=np.int64)
    ends = np.cumsum(sizes) if len(sizes) else np.zeros(0, dtype=np.int64)
    cand = np.flatnonzero(sizes > d).tolist()
    plans, need = {}, _NEG
    for i in cand:
        a, b = int(ends[i] - sizes[i]), int(ends[i])
        if ceil_lg(b - a) < 8:
            continue  # can never satisfy ceil(lg n_i) >= 8 + c
        plan, nd = plan_bucketed(keys[a:b], kw, d, nstar, store)
        plans[i] = (a, b, plan)
        need = max(need, nd)
    c = max(0, need)
    chosen = [i for i in sorted(plans) if ceil_lg(int(sizes[i])) >= 8 + c]
    parts, prev = [], 0
    for i in chosen:
        a, b, plan = plans[i]
        parts.append(pack_fields(keys[prev:a], kw))
        w = BitWriter()
        emit_bucketed(w, plan, c, store, numbase + a)
        w.pad_to((b - a) * kw)
        parts.append(w.finish())
        prev = b
    parts.append(pack_fields(keys[prev:], kw))
    region = concat(parts)
    assert region.length_bits == len(keys) * kw
    return region, c, len(chosen)


class CollectionWithOracle:
    """A DictCollection paired with a prefix-sum structure over set sizes."""

    KIND = "collection"

    def __init__(self, sizes_ps: SearchablePrefixSum, coll: DictCollection, m: int, seed: int):
        self.ps, self.coll, self.m, self.seed = sizes_ps, coll, m, seed
        self.s = sizes_ps.n

    @classmethod
    def build(cls, sets, m: int, d: int = DEFAULT_D, seed: int = 0):
        _check_universe(m)
        arrs = [check_sorted(sorted(int(v) for v in s), m) for s in sets]
        sizes = [len(a) for a in arrs]
        keys = np.concatenate(arrs) if arrs else np.zeros(0, dtype=np.int64)
        kw = ceil_lg(m)
        n = len(keys)

        def attempt(sd):
            store = SharedFunctionStore(sd)
            region, c, _ = build_collection(sizes, keys, kw, d, n, store)
            return cls(SearchablePrefixSum.build(sizes, "plain"),
                       DictCollection(region, 0, kw, d, c, n, store), m, sd)

        return _build_with_retries(attempt, seed)

    def _bounds(self, i: int):
        if not 0 <= i < self.s:
            raise InputError(f"set index {i} out of range [0, {self.s})")
        lo = self.ps.sum(i)
        return lo, self.ps.sum(i + 1) - lo

    def size(self, i: int) -> int:
        return self._bounds(i)[1]

    def rank(self, i: int, x: int) -> int:
        rho, ni = self._bounds(i)
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        return self.coll.rank(rho, ni, x)

    def select(self, i: int, j: int) -> int:
        rho, ni = self._bounds(i)
        return self.coll.select(rho, ni, j)


def collection_rank(c: CollectionWithOracle, i: int, x: int) -> int:
    return c.rank(i, x)


def collection_select(c: CollectionWithOracle, i: int, j: int) -> int:
    return c.select(i, j)


# ------------------------------------------------------ top-level dictionary

def choose_shift(n: int, m: int) -> int:
    """Largest l >= 1 with floor(m / 2^l) >= max(n sqrt(lg n), 1)."""
    target = max(n * math.sqrt(math.log2(n)) if n > 1 else 0.0, 1.0)
    l = 1
    while (m >> (l + 1)) >= target:
        l += 1
    return l


def is_dense(n: int, m: int) -> bool:
    return m < max(4 * n * math.sqrt(math.log2(n)) if n > 1 else 0.0, 2)


class MsbBucketDict:
    """Keys grouped by x >> l; bucket sizes in a prefix-sum structure and the
    buckets' low bits in a DictCollection (or, select-only, a plain list)."""

    KIND = "msb"
    TOP_BACKING = "rrr"
    SELECT_ONLY = False

    def __init__(self):
        self.dense = None

    # -- construction
    @classmethod
    def _shift(cls, n: int, m: int) -> int:
        return choose_shift(n, m)

    @classmethod
    def build(cls, elements, m: int, mode: str = "auto", shift: int | None = None,
              d: int = DEFAULT_D, seed: int = 0, u: int | None = None,
              top_u: int | None = None):
        _check_universe(m)
        arr = check_sorted(elements, m)
        n = len(arr)
        if mode not in ("auto", "dense", "sparse"):
            raise InputError(f"unknown mode {mode!r}")
        self = cls()
        self.n, self.m, self.d, self.seed = n, m, d, seed
        if mode == "dense" or (mode == "auto" and cls._auto_dense(n, m)):
            self.dense = RrrFid.build(arr, m, u)
            return self
        l = cls._shift(n, m) if shift is None else shift
        if l < 0 or l > MAX_KEY_BITS:
            raise InputError("bad shift")
        nb = ((m - 1) >> l) + 1 if m else 1
        counts = np.bincount(arr >> l, minlength=nb) if n else np.zeros(nb, dtype=np.int64)
        low = arr & ((1 << l) - 1)
        self.l, self.nb = l, nb
        if top_u is None and cls.TOP_BACKING == "rrr":
            top_u = min(TOP_U, max(1, len(counts) + n))
        self.top = SearchablePrefixSum.build(counts, cls.TOP_BACKING, top_u)
        if cls.SELECT_ONLY:
            self.c, self.nbucketed = 0, 0
            self.store = SharedFunctionStore(seed)
            self.region = pack_fields(low, l)
        else:
            def attempt(sd):
                store = SharedFunctionStore(sd)
                return store, build_collection(counts, low, l, d, n, store)

            for k in range(_SEED_RETRIES):
                try:
                    self.store, (self.region, self.c, self.nbucketed) = attempt(seed + k)
                    self.seed = seed + k
                    break
                except HashConstructionError:
                    if k == _SEED_RETRIES - 1:
                        raise
        self._finish()
        return self

    @classmethod
    def _auto_dense(cls, n: int, m: int) -> bool:
        return is_dense(n, m)

    def _finish(self):
        if self.dense is None:
            self.coll = DictCollection(self.region, 0, self.l, self.d, self.c, self.n,
                                       self.store)
            self._mask = (1 << self.l) - 1

    # -- queries
    def rank(self, x: int) -> int:
        if not 0 <= x < self.m:
            raise InputError(f"value {x} out of range [0, {self.m})")
        if self.SELECT_ONLY:
            raise InputError("rank is not supported by a select-only set")
        if self.dense is not None:
            return self.dense.set_rank(x)
        lo, hi = self.top.bounds(x >> self.l)
        ni = hi - lo
        if ni == 0:
            return -1
        r = self.coll.rank(lo, ni, x & self._mask)
        return -1 if r < 0 else lo + r

    def select(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise InputError(f"select rank {j} out of range [1, {self.n}]")
        if self.dense is not None:
            return self.dense.select1(j)
        b = self.top.pred(j)
        if self.nbucketed:
            lo, hi = self.top.bounds(b)
            low = self.coll.select(lo, hi - lo, j - lo)
        else:
            low = self.region.get_bits((j - 1) * self.l, self.l)
        return (b << self.l) | low

    def bucket_count(self, b: int) -> int:
        return self.top.value(b + 1)

    def bucket_start(self, b: int) -> int:
        """Number of keys in buckets before b."""
        return self.top.sum(b)

    # -- serialization
    def params(self):
        p = {"n": self.n, "m": self.m, "d": self.d, "dense": int(self.dense is not None)}
        if self.dense is not None:
            p.update({f"fid.{k}": v for k, v in self.dense.params().items()})
            return p
        p.update({"l": self.l, "nb": self.nb, "c": self.c, "nbucketed": self.nbucketed})
        p.update({f"top.{k}": v for k, v in self.top.params().items()})
        return p

    def sections(self):
        if self.dense is not None:
            return {f"fid.{k}": v for k, v in self.dense.sections().items()}
        out = {f"top.{k}": v for k, v in self.top.sections().items()}
        out["buckets"] = self.region
        out["store"] = _seed_bv(self.seed)
        return out

    @classmethod
    def from_parts(cls, params, sections):
        self = cls()
        self.n, self.m, self.d = params["n"], params["m"], params["d"]

        def sub(dct, pre):
            return {k[len(pre):]: v for k, v in dct.items() if k.startswith(pre)}

        if params["dense"]:
            self.dense = RrrFid.from_parts(sub(params, "fid."), sub(sections, "fid."))
            self.seed = 0
            return self
        self.l, self.nb, self.c = params["l"], params["nb"], params["c"]
        self.nbucketed = params["nbucketed"]
        self.top = SearchablePrefixSum.from_parts(sub(params, "top."), sub(sections, "top."))
        self.region = sections["buckets"]
        self.seed = sections["store"].get_bits(0, 64)
        self.store = SharedFunctionStore(self.seed)
        self._finish()
        return self

    def space(self) -> dict:
        if self.dense is not None:
            return {f"fid.{k}": v for k, v in self.dense.space().items()}
        out = {f"top.{k}": v for k, v in self.top.space().items()}
        out["buckets"] = self.region.length_bits
        out["store"] = 64
        return out

    def total_bits(self) -> int:
        return sum(self.space().values())


class MainDict(MsbBucketDict):
    """B(n,m) + o(n) dictionary: RRR-backed top level, dense inputs go to RRR."""

    KIND = "id"


class TwoLevelDict(MsbBucketDict):
    """Shift ceil(lg m) - floor(lg n), plain top level; never dense."""

    KIND = "twolevel"
    TOP_BACKING = "plain"

    @classmethod
    def _shift(cls, n, m):
        return max(0, ceil_lg(m) - (floor_lg(n) if n else 0))

    @classmethod
    def _auto_dense(cls, n, m):
        return False


class SelectOnlySet(MsbBucketDict):
    """Same top level as MainDict; buckets kept as one sorted list of low bits."""

    KIND = "selectonly"
    SELECT_ONLY = True


def build_main(elements, m: int, **kw) -> MainDict:
    return MainDict.build(elements, m, **kw)


def build_two_level(elements, m: int, **kw) -> TwoLevelDict:
    return TwoLevelDict.build(elements, m, **kw)


def build_select_only(elements, m: int, **kw) -> SelectOnlySet:
    return SelectOnlySet.build(elements, m, **kw)


def dict_rank(d, x: int) -> int:
    return d.rank(x)


def dict_select(d, i: int) -> int:
    return d.select(i)


def so_select(d: SelectOnlySet, i: int) -> int:
    return d.select(i)
