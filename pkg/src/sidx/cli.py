"""sidx command line: build, query, stats, selftest, bench."""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import fileformat as ff
from .bitcore import info_bound, ktree_bound
from .errors import CorruptFileError, InputError
from .idict import MainDict, SelectOnlySet
from .ktree import CardinalTree
from .multidict import PairDict
from .multiset import build_multiset
from .oracle import NaiveMultiDict, NaiveMultiset, NaivePrefixSum, NaiveSet, NaiveTree
from .prefixsum import SearchablePrefixSum
from .rankselect import RsDirectory
from .rrrfid import RrrFid

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_CORRUPT, EXIT_MISMATCH = 0, 1, 2, 3, 4

BUILD_KINDS = ["plain", "rrr", "id", "selectonly", "psum", "multiset", "multidict", "ktree"]
BENCH_KINDS = ["plain", "rrr", "id", "selectonly"]


class UsageError(Exception):
    pass


# ------------------------------------------------------------ text input

def _lines(path):
    """(line number, stripped text) for non-blank, non-comment lines."""
    try:
        with open(path) as f:
            raw = f.read().splitlines()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    for no, line in enumerate(raw, 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield no, line


def _int(tok, no):
    try:
        return int(tok)
    except ValueError:
        raise InputError(f"line {no}: {tok!r} is not an integer") from None


def read_ints(path):
    out = []
    for no, line in _lines(path):
        toks = line.split()
        if len(toks) != 1:
            raise InputError(f"line {no}: expected one integer per line")
        out.append((no, _int(toks[0], no)))
    return out


def read_pairs(path):
    out = []
    for no, line in _lines(path):
        toks = line.split()
        if len(toks) != 2:
            raise InputError(f"line {no}: expected two integers per line")
        out.append((no, _int(toks[0], no), _int(toks[1], no)))
    return out


def _check_order(rows, strict):
    for (_, a), (no, b) in zip(rows, rows[1:]):
        if b < a or (strict and b == a):
            word = "increasing" if strict else "non-decreasing"
            raise InputError(f"line {no}: values must be strictly {word}"
                             if strict else f"line {no}: values must be {word}")


def _check_range(rows, m):
    for no, v in rows:
        if not 0 <= v < m:
            raise InputError(f"line {no}: value {v} outside [0, {m})")


def _universe(args, values):
    if args.universe is not None:
        if args.universe < 0:
            raise InputError("--universe must be non-negative")
        return args.universe
    return max(values) + 1 if values else 1


def build_from_file(kind, path, universe=None, block_width=None, seed=0, branch="auto"):
    args = argparse.Namespace(universe=universe)
    if kind in ("plain", "rrr", "id", "selectonly", "multiset"):
        rows = read_ints(path)
        vals = [v for _, v in rows]
        m = _universe(args, vals)
        _check_range(rows, m)
        _check_order(rows, strict=kind != "multiset")
        arr = np.array(vals, dtype=np.int64)
        if kind == "plain":
            return RsDirectory.build(arr, m)
        if kind == "rrr":
            return RrrFid.build(arr, m, block_width)
        if kind == "id":
            return MainDict.build(arr, m, seed=seed, u=block_width)
        if kind == "selectonly":
            return SelectOnlySet.build(arr, m)
        return build_multiset(arr, m, branch, seed)
    if kind == "psum":
        rows = read_ints(path)
        for no, v in rows:
            if v < 0:
                raise InputError(f"line {no}: prefix-sum values must be non-negative")
        return SearchablePrefixSum.build([v for _, v in rows], "auto", block_width)
    if kind == "multidict":
        rows = read_pairs(path)
        for no, a, b in rows:
            if a < 0 or b < 0:
                raise InputError(f"line {no}: negative vertex or value")
        top = max((max(a, b) for _, a, b in rows), default=0) + 1
        m = universe if universe is not None else top
        for no, a, b in rows:
            if a >= m or b >= m:
                raise InputError(f"line {no}: pair ({a}, {b}) outside [0, {m})")
        pairs = sorted({(a, b) for _, a, b in rows})
        firsts = np.array([a for a, _ in pairs], dtype=np.int64)
        seconds = np.array([b for _, b in pairs], dtype=np.int64)
        return PairDict.from_pairs(firsts, seconds, m, m, seed=seed)
    if kind == "ktree":
        rows = list(_lines(path))
        if not rows:
            raise InputError("empty tree file")
        no, head = rows[0]
        toks = head.split()
        if len(toks) != 2:
            raise InputError(f"line {no}: expected 'n k'")
        n, k = _int(toks[0], no), _int(toks[1], no)
        edges = []
        for no, line in rows[1:]:
            toks = line.split()
            if len(toks) != 2:
                raise InputError(f"line {no}: expected 'parent label'")
            edges.append((_int(toks[0], no), _int(toks[1], no)))
        return CardinalTree.build(n, k, edges, seed=seed)
    raise UsageError(f"unknown kind {kind!r}")


# ------------------------------------------------------------ queries

def _fid_ops(o):
    return {"rank": o.set_rank, "rank1": o.rank1, "rank0": o.rank0, "select": o.select1,
            "select1": o.select1, "select0": o.select0, "get": o.get}


def query_ops(obj) -> dict:
    name = ff.kind_name(obj)
    if name in ("plain", "rrr"):
        return _fid_ops(obj)
    if name in ("id", "twolevel", "bucketed"):
        return {"rank": obj.rank, "select": obj.select}
    if name == "selectonly":
        return {"select": obj.select}
    if name == "psum":
        return {"sum": obj.sum, "pred": obj.pred, "value": obj.value}
    if name == "dmultiset":
        return {"rankm": obj.rankm, "rankm_plus": obj.rankm_plus, "selectm": obj.selectm}
    if name in ("smultiset",):
        return {"rankm": obj.rankm, "selectm": obj.selectm}
    if name == "somultiset":
        return {"selectm": obj.selectm}
    if name == "multidict":
        return {"size": obj.size, "rank": obj.rank, "select": obj.select,
                "boundary": obj.boundary_rank,
                "adjacent": lambda u, v: obj.rank(u, v) >= 0,
                "out_degree": obj.size, "neighbor": obj.select}
    if name == "ktree":
        return {"child_by_label": obj.child_by_label, "parent": obj.parent,
                "degree": obj.degree, "ith_child": obj.ith_child,
                "ordinal_of_child": obj.ordinal_of_child}
    return {}


def format_result(r) -> str:
    if r is None:
        return "absent"
    if isinstance(r, bool):
        return "true" if r else "false"
    return str(int(r))


def run_query(obj, op, args):
    ops = query_ops(obj)
    if op not in ops:
        raise UsageError(f"unknown operation {op!r} for {ff.kind_name(obj)}; "
                         f"choose from {', '.join(sorted(ops))}")
    try:
        vals = [int(a) for a in args]
    except ValueError:
        raise UsageError("query arguments must be integers") from None
    try:
        return ops[op](*vals)
    except TypeError:
        raise UsageError(f"wrong number of arguments for {op}") from None


# ------------------------------------------------------------ stats

def lower_bound(obj) -> int:
    name = ff.kind_name(obj)
    if name == "ktree":
        return ktree_bound(obj.n, obj.k)
    if name == "psum":
        # sequences of n non-negative integers with the given total
        return info_bound(obj.n - 1, obj.total + obj.n - 1) if obj.n else 0
    if name in ("dmultiset", "smultiset", "somultiset"):
        return info_bound(obj.n, obj.m + obj.n - 1) if obj.m else 0
    if name == "multidict":
        return info_bound(obj.n, obj.m * obj.s)
    return info_bound(obj.n, obj.m)


def stats(obj) -> dict:
    name = ff.kind_name(obj)
    breakdown = {k: int(v) for k, v in obj.space().items()}
    total = sum(breakdown.values())
    payload = ff.payload_bits(obj)
    assert total == payload, (total, payload)
    lb = lower_bound(obj)
    out = {"kind": name, "n": int(obj.n)}
    if name == "ktree":
        out["k"] = obj.k
    elif name == "psum":
        out["total"] = obj.total
    else:
        out["m"] = int(obj.m)
    if name == "multidict":
        out["s"] = obj.s
    out.update({"total_bits": total, "breakdown": breakdown, "lower_bound": lb,
                "overhead_bits": total - lb,
                "overhead_per_element": (total - lb) / obj.n if obj.n else None})
    return out


def _print_stats(st, out):
    for k, v in st.items():
        if k == "breakdown":
            out.write("breakdown:\n")
            for part, bits in v.items():
                out.write(f"  {part}: {bits}\n")
        elif isinstance(v, float):
            out.write(f"{k}: {v:.4f}\n")
        else:
            out.write(f"{k}: {v}\n")


# ------------------------------------------------------------ selftest

def _sample(rng, m, count):
    """Query points: everything when small, else random plus the ends."""
    if m <= count:
        return list(range(m))
    pts = rng.integers(0, m, count).tolist()
    return pts + [0, m - 1]


def check_structure(obj, rng=None, count=4096) -> tuple[int, int]:
    """Compare a structure against the oracle built from its own contents.

    Contents are recovered through a different route where one exists
    (bit-vector decode for FIDs); returns (queries, mismatches)."""
    rng = rng or np.random.default_rng(0)
    name = ff.kind_name(obj)
    q = bad = 0

    def cmp(a, b):
        nonlocal q, bad
        q += 1
        bad += a != b

    def cmp_call(f, g, *a):
        # both sides must agree, including on rejecting the arguments
        try:
            x = f(*a)
        except InputError:
            x = "error"
        try:
            y = g(*a)
        except InputError:
            y = "error"
        cmp(x, y)

    if name in ("plain", "rrr"):
        bits = obj.decode_all() if name == "rrr" else obj.bv.to_bools()[:obj.m]
        ref = NaiveSet(np.flatnonzero(bits), obj.m)
        cmp(ref.n, obj.n)
        xs = _sample(rng, obj.m, count)
        for x in xs:
            cmp_call(obj.set_rank, ref.rank, x)
            cmp_call(obj.rank1, lambda i: ref.rank_bit(1, i), x)
            cmp_call(obj.rank0, lambda i: ref.rank_bit(0, i), x + 1)
        for j in _sample(rng, obj.n + 1, count):
            cmp_call(obj.select1, ref.select, j)
        for j in _sample(rng, obj.m - obj.n + 1, count):
            cmp_call(obj.select0, lambda t: ref.select_bit(0, t), j)
    elif name in ("id", "twolevel", "bucketed", "selectonly"):
        elems = [obj.select(j) for j in range(1, obj.n + 1)]
        cmp(elems, sorted(set(elems)))
        ref = NaiveSet(elems, obj.m)
        if name != "selectonly":
            for x in _sample(rng, obj.m, count) + elems[:count]:
                cmp_call(obj.rank, ref.rank, x)
        for j in (0, obj.n + 1):
            cmp_call(obj.select, ref.select, j)
    elif name == "psum":
        vals = [obj.value(i) for i in range(1, obj.n + 1)]
        ref = NaivePrefixSum(vals)
        for i in _sample(rng, obj.n + 1, count):
            cmp_call(obj.sum, ref.sum, i)
        for x in _sample(rng, obj.total + 2, count):
            cmp_call(obj.pred, ref.pred, x)
    elif name in ("dmultiset", "smultiset", "somultiset"):
        vals = [obj.selectm(i) for i in range(1, obj.n + 1)]
        ref = NaiveMultiset(vals, obj.m)
        if name != "somultiset":
            for x in _sample(rng, obj.m, count):
                cmp_call(obj.rankm, ref.rankm, x)
                if name == "dmultiset":
                    cmp_call(obj.rankm_plus, ref.rankm_plus, x)
        for i in (0, obj.n + 1):
            cmp_call(obj.selectm, ref.selectm, i)
    elif name == "multidict":
        sets = [[obj.select(i, j) for j in range(1, obj.size(i) + 1)] for i in range(obj.s)]
        ref = NaiveMultiDict(sets, obj.m)
        cmp(sum(map(len, sets)), obj.n)
        for i in _sample(rng, obj.s, 64):
            cmp_call(obj.size, ref.size, i)
            for x in _sample(rng, obj.m, 64):
                cmp_call(obj.rank, ref.rank, i, x)
            cmp_call(obj.select, ref.select, i, len(sets[i]) + 1)
    elif name == "ktree":
        edges = obj.edges()
        cmp(len(edges), obj.n - 1)
        ref = NaiveTree(obj.n, obj.k, edges)
        for x in _sample(rng, obj.n, 256):
            cmp_call(obj.degree, ref.degree, x)
            for j in _sample(rng, obj.k, 16):
                cmp_call(obj.child_by_label, ref.child_by_label, x, j)
                cmp_call(obj.ordinal_of_child, ref.ordinal_of_child, x, j)
            for i in range(ref.degree(x) + 2):
                cmp_call(obj.ith_child, ref.ith_child, x, i)
        for i in _sample(rng, obj.n + 1, count):
            cmp_call(obj.parent, ref.parent, i)
    else:
        raise UsageError(f"no selftest for {name}")
    return q, int(bad)


def random_set_suite(count, m, seed, kinds=tuple(BENCH_KINDS)):
    """Random sets over [m] in every set kind, checked against the oracle."""
    rng = np.random.default_rng(seed)
    queries = bad = 0
    for t in range(count):
        kind = kinds[t % len(kinds)]
        n = int(rng.integers(0, m + 1))
        elems = np.sort(rng.choice(m, n, replace=False)) if n else np.zeros(0, np.int64)
        ref = NaiveSet(elems, m)
        if kind == "plain":
            obj = RsDirectory.build(elems, m)
        elif kind == "rrr":
            obj = RrrFid.build(elems, m)
        elif kind == "id":
            obj = MainDict.build(elems, m, seed=int(rng.integers(1 << 32)))
        else:
            obj = SelectOnlySet.build(elems, m)
        xs = _sample(rng, m, 512)
        if kind in ("plain", "rrr"):
            got = [obj.set_rank(x) for x in xs] + [obj.rank1(x) for x in xs]
            exp = [ref.rank(x) for x in xs] + [ref.rank_bit(1, x) for x in xs]
            js = _sample(rng, m - n, 256)
            got += [obj.select0(j + 1) for j in js]
            exp += [ref.select_bit(0, j + 1) for j in js]
        elif kind == "id":
            got = [obj.rank(x) for x in xs]
            exp = [ref.rank(x) for x in xs]
        else:
            got, exp = [], []
        idx = _sample(rng, n, 256)
        sel = obj.select1 if kind in ("plain", "rrr") else obj.select
        got += [sel(i + 1) for i in idx]
        exp += [ref.select(i + 1) for i in idx]
        queries += len(got)
        bad += sum(a != b for a, b in zip(got, exp))
    return queries, bad


# ------------------------------------------------------------ bench

def parse_grid(spec: str) -> list[int]:
    """Exponents: "20..26", "20..26:2", "16,20,24" or a mix; sizes are 2^e."""
    out = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if ".." in part:
                rng, _, step = part.partition(":")
                lo, hi = (int(v) for v in rng.split(".."))
                out.extend(range(lo, hi + 1, int(step) if step else 1))
            else:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"bad grid {spec!r}; use e.g. 20..26 or 16,20,24") from None
    if not out or min(out) < 1 or max(out) > 32:
        raise UsageError("grid exponents must lie in [1, 32]")
    return [1 << e for e in out]


def _bench_build(kind, m, n, rng):
    bools = np.zeros(m, dtype=bool)
    bools[rng.permutation(m)[:n]] = True
    if kind == "rrr":
        return RrrFid.from_bools(bools)
    if kind == "plain":
        return RsDirectory.from_bits(ff.BitVector.from_bools(bools))
    elems = np.flatnonzero(bools)
    if kind == "id":
        return MainDict.build(elems, m)
    return SelectOnlySet.build(elems, m)


def bench_one(kind, m, density=0.5, queries=10**6, seed=0, warmup=10**4):
    rng = np.random.default_rng(seed)
    n = max(1, int(m * density))
    t0 = time.perf_counter()
    obj = _bench_build(kind, m, n, rng)
    build_s = time.perf_counter() - t0
    if kind in ("plain", "rrr"):
        op, f, hi = "rank1", obj.rank1, m
    elif kind == "id":
        op, f, hi = "rank", obj.rank, m
    else:
        op, f, hi = "select", obj.select, n
    args = rng.integers(0 if op != "select" else 1, hi + (op == "select"), queries).tolist()
    for x in args[:warmup]:
        f(x)
    lat = np.empty(queries, dtype=np.int64)
    clock = time.perf_counter_ns
    for i, x in enumerate(args):
        a = clock()
        f(x)
        lat[i] = clock() - a
    total = sum(obj.space().values())
    return {"kind": kind, "m": m, "n": n, "op": op, "total_bits": total,
            "bits_per_position": total / m, "build_seconds": round(build_s, 3),
            "queries": queries, "median_ns": float(np.median(lat)),
            "p99_ns": float(np.percentile(lat, 99)), "mean_ns": float(lat.mean())}


def cmd_bench(kind, grid, density=0.5, queries=10**6, seed=0):
    return [bench_one(kind, m, density, queries, seed) for m in parse_grid(grid)]


# ------------------------------------------------------------ commands

def cmd_build(a, out):
    obj = build_from_file(a.kind, a.input, a.universe, a.block_width, a.seed, a.branch)
    ff.save(obj, a.out, {"seed": a.seed})
    st = stats(obj)
    out.write(f"wrote {a.out}: {st['kind']}, n={st['n']}, {st['total_bits']} bits "
              f"(lower bound {st['lower_bound']})\n")
    return EXIT_OK


def cmd_query(a, out):
    obj = ff.load(a.file)
    out.write(format_result(run_query(obj, a.op, a.args)) + "\n")
    return EXIT_OK


def cmd_stats(a, out):
    st = stats(ff.load(a.file))
    if a.json:
        out.write(json.dumps(st, indent=2) + "\n")
    else:
        _print_stats(st, out)
    return EXIT_OK


def cmd_selftest(a, out):
    if a.file is not None:
        if a.random is not None:
            raise UsageError("give either a file or --random, not both")
        q, bad = check_structure(ff.load(a.file), np.random.default_rng(a.seed))
        label = a.file
    else:
        if a.random is None:
            raise UsageError("selftest needs a file or --random N")
        if a.random < 0 or a.universe is None or a.universe < 1:
            raise UsageError("--random needs N >= 0 and --universe M >= 1")
        q, bad = random_set_suite(a.random, a.universe, a.seed)
        label = f"{a.random} random sets over [{a.universe}]"
    status = "PASS" if bad == 0 else "FAIL"
    out.write(f"{status} {label}: {q} queries, {bad} mismatches\n")
    return EXIT_OK if bad == 0 else EXIT_MISMATCH


def cmd_bench_cli(a, out):
    rows = cmd_bench(a.kind, a.grid, a.density, a.queries, a.seed)
    if a.json:
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        for r in rows:
            out.write(f"m=2^{r['m'].bit_length() - 1} bits={r['total_bits']} "
                      f"median={r['median_ns']:.0f}ns p99={r['p99_ns']:.0f}ns\n")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser():
    p = _Parser(prog="sidx", description="Succinct set, multiset and tree indexes.")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)
    b = sub.add_parser("build", help="build a structure from a text file")
    b.add_argument("--kind", required=True, choices=BUILD_KINDS)
    b.add_argument("--input", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--universe", type=int)
    b.add_argument("--block-width", type=int, dest="block_width")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--branch", choices=["auto", "dense", "sparse"], default="auto",
                   help="multiset representation")
    q = sub.add_parser("query", help="answer one query")
    q.add_argument("file")
    q.add_argument("op")
    q.add_argument("args", nargs="*")
    s = sub.add_parser("stats", help="space accounting")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    t = sub.add_parser("selftest", help="check against the reference implementation")
    t.add_argument("file", nargs="?")
    t.add_argument("--random", type=int)
    t.add_argument("--universe", type=int)
    t.add_argument("--seed", type=int, default=0)
    e = sub.add_parser("bench", help="query latency and size over a grid")
    e.add_argument("--kind", required=True, choices=BENCH_KINDS)
    e.add_argument("--grid", required=True)
    e.add_argument("--json", action="store_true")
    e.add_argument("--density", type=float, default=0.5)
    e.add_argument("--queries", type=int, default=10**6)
    e.add_argument("--seed", type=int, default=0)
    return p


COMMANDS = {"build": cmd_build, "query": cmd_query, "stats": cmd_stats,
            "selftest": cmd_selftest, "bench": cmd_bench_cli}


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = make_parser()
    try:
        a = parser.parse_args(argv)
        if a.cmd is None:
            raise UsageError("missing command")
        return COMMANDS[a.cmd](a, out)
    except UsageError as e:
        err.write(f"usage error: {e}\n")
        parser.print_usage(err)
        return EXIT_USAGE
    except CorruptFileError as e:
        err.write(f"corrupt file: {e}\n")
        return EXIT_CORRUPT
    except InputError as e:
        err.write(f"invalid input: {e}\n")
        return EXIT_INPUT
    except OSError as e:
        err.write(f"invalid input: {e}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
