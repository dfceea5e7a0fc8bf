"""Binary container for built structures.

Layout, all integers little-endian:

    b"SIDX" | u16 version | u16 kind tag
    u32 param count,   then per param:   u16 name length, name, u64 value
    u32 section count, then per section: u16 name length, name, u64 bit length,
                                         ceil(bits / 8) bytes (LSB-first)
    8-byte blake2b digest of every preceding byte

Params and sections are written in sorted name order so a loaded structure
re-serializes to the same bytes.
"""
from __future__ import annotations

import hashlib
import struct

from .bitcore import BitVector
from .errors import CorruptFileError
from .idict import BucketedDict, MainDict, SelectOnlySet, TwoLevelDict
from .ktree import CardinalTree
from .multidict import PairDict
from .multiset import DenseMultiset, SelectOnlyMultiset, SparseMultiset
from .prefixsum import SearchablePrefixSum
from .rankselect import RsDirectory
from .rrrfid import RrrFid

MAGIC = b"SIDX"
VERSION = 1
DIGEST = 8

# tag -> (name, class); tags are part of the format, never renumber
KINDS = {
    1: ("plain", RsDirectory),
    2: ("rrr", RrrFid),
    3: ("id", MainDict),
    4: ("selectonly", SelectOnlySet),
    5: ("psum", SearchablePrefixSum),
    6: ("dmultiset", DenseMultiset),
    7: ("smultiset", SparseMultiset),
    8: ("multidict", PairDict),
    9: ("ktree", CardinalTree),
    10: ("twolevel", TwoLevelDict),
    11: ("bucketed", BucketedDict),
    12: ("somultiset", SelectOnlyMultiset),
}
_TAG_OF = {cls: tag for tag, (_, cls) in KINDS.items()}


def kind_name(obj) -> str:
    return KINDS[_TAG_OF[type(obj)]][0]


def checksum(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=DIGEST).digest()


def _name(s: str) -> bytes:
    b = s.encode()
    return struct.pack("<H", len(b)) + b


def dumps(obj, extra: dict | None = None) -> bytes:
    """Serialize a structure; `extra` adds header fields (e.g. the build seed)."""
    tag = _TAG_OF.get(type(obj))
    if tag is None:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    params = dict(obj.params())
    for k, v in (extra or {}).items():
        params[f"hdr.{k}"] = v
    sections = obj.sections()
    out = bytearray(MAGIC)
    out += struct.pack("<HH", VERSION, tag)
    out += struct.pack("<I", len(params))
    for k in sorted(params):
        out += _name(k) + struct.pack("<Q", int(params[k]))
    out += struct.pack("<I", len(sections))
    for k in sorted(sections):
        bv = sections[k]
        out += _name(k) + struct.pack("<Q", len(bv)) + bv.to_bytes()
    out += checksum(bytes(out))
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data, self.pos = data, 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise CorruptFileError("truncated file")
        b = self.data[self.pos:self.pos + n]
        self.pos += n
        return b

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def name(self) -> str:
        (ln,) = self.unpack("<H")
        try:
            return self.take(ln).decode()
        except UnicodeDecodeError:
            raise CorruptFileError("bad field name") from None


def parse(data: bytes):
    """Check and split a file into (tag, params, sections, header extras)."""
    if len(data) < len(MAGIC) + 4 + DIGEST:
        raise CorruptFileError("file too short")
    body, digest = data[:-DIGEST], data[-DIGEST:]
    if checksum(body) != digest:
        raise CorruptFileError("checksum mismatch")
    r = _Reader(body)
    if r.take(4) != MAGIC:
        raise CorruptFileError("not a structure file")
    version, tag = r.unpack("<HH")
    if version != VERSION:
        raise CorruptFileError(f"unsupported format version {version}")
    if tag not in KINDS:
        raise CorruptFileError(f"unknown kind tag {tag}")
    params, extra = {}, {}
    for _ in range(r.unpack("<I")[0]):
        k = r.name()
        (v,) = r.unpack("<Q")
        if k.startswith("hdr."):
            extra[k[4:]] = v
        else:
            params[k] = v
    sections = {}
    for _ in range(r.unpack("<I")[0]):
        k = r.name()
        (bits,) = r.unpack("<Q")
        raw = r.take((bits + 7) // 8)
        try:
            sections[k] = BitVector.from_bytes(raw, bits)
        except ValueError as e:
            raise CorruptFileError(f"section {k}: {e}") from None
    if r.pos != len(body):
        raise CorruptFileError("trailing bytes after last section")
    return tag, params, sections, extra


def loads(data: bytes, with_extra: bool = False):
    tag, params, sections, extra = parse(data)
    try:
        obj = KINDS[tag][1].from_parts(params, sections)
    except CorruptFileError:
        raise
    except (KeyError, ValueError, IndexError, AssertionError) as e:
        raise CorruptFileError(f"inconsistent structure: {e}") from None
    return (obj, extra) if with_extra else obj


def save(obj, path, extra: dict | None = None) -> bytes:
    data = dumps(obj, extra)
    with open(path, "wb") as f:
        f.write(data)
    return data


def load(path, with_extra: bool = False):
    with open(path, "rb") as f:
        return loads(f.read(), with_extra)


def payload_bits(obj) -> int:
    return sum(len(bv) for bv in obj.sections().values())
