import struct

import numpy as np
import pytest

from sidx import fileformat as ff
from sidx.errors import CorruptFileError
from sidx.idict import MainDict
from sidx.multidict import PairDict
from sidx.rankselect import RsDirectory
from sidx.rrrfid import RrrFid

from fileformat_cases import one_of_each
from generators import random_set


def test_every_tag_is_covered():
    kinds = {ff.kind_name(o) for o in one_of_each()}
    assert kinds == {name for name, _ in ff.KINDS.values()}


@pytest.mark.parametrize("idx", range(14))
def test_round_trip_is_byte_identical(idx, tmp_path):
    obj = one_of_each()[idx]
    path = tmp_path / "x.sidx"
    data = ff.save(obj, path, extra={"seed": 7})
    back, extra = ff.load(path, with_extra=True)
    assert extra == {"seed": 7}
    assert type(back) is type(obj)
    assert ff.dumps(back, extra={"seed": 7}) == data
    assert ff.payload_bits(back) == ff.payload_bits(obj)


def test_loaded_structure_answers_queries():
    rng = np.random.default_rng(1)
    S = random_set(rng, 500, 1 << 30)
    d = MainDict.build(S, 1 << 30)
    back = ff.loads(ff.dumps(d))
    assert [back.select(i) for i in range(1, 501)] == S.tolist()
    assert all(back.rank(int(x)) == i for i, x in enumerate(S))


def test_header_layout():
    data = ff.dumps(RsDirectory.build([1, 2], 4))
    assert data[:4] == b"SIDX"
    assert struct.unpack("<HH", data[4:8]) == (ff.VERSION, 1)
    assert data[-ff.DIGEST:] == ff.checksum(data[:-ff.DIGEST])


def test_every_single_byte_corruption_detected():
    data = ff.dumps(PairDict.build([[1, 5], [], [2]], 8))
    for pos in range(len(data)):
        for flip in (0x01, 0x80, 0xFF):
            bad = bytearray(data)
            bad[pos] ^= flip
            with pytest.raises(CorruptFileError):
                ff.loads(bytes(bad))


def test_truncation_and_trailing_bytes():
    data = ff.dumps(RrrFid.build([3], 10))
    for cut in (0, 5, len(data) // 2, len(data) - 1):
        with pytest.raises(CorruptFileError):
            ff.loads(data[:cut])
    with pytest.raises(CorruptFileError):
        ff.loads(data + b"\0")


def _reseal(body: bytes) -> bytes:
    return body + ff.checksum(body)


def test_bad_header_fields_with_valid_checksum():
    body = bytearray(ff.dumps(RsDirectory.build([1], 4))[:-ff.DIGEST])
    for patch, msg in (((0, b"XIDX"), "not a structure"), ((4, b"\x09\x00"), "version"),
                       ((6, b"\x63\x00"), "kind tag")):
        b = bytearray(body)
        pos, raw = patch
        b[pos:pos + len(raw)] = raw
        with pytest.raises(CorruptFileError, match=msg):
            ff.loads(_reseal(bytes(b)))


def test_inconsistent_payload_with_valid_checksum():
    # a well-formed container whose params do not describe the sections
    body = bytearray(ff.MAGIC + struct.pack("<HHI", ff.VERSION, 2, 0) + struct.pack("<I", 0))
    with pytest.raises(CorruptFileError):
        ff.loads(_reseal(bytes(body)))


def test_unknown_type_rejected():
    with pytest.raises(TypeError):
        ff.dumps(object())
