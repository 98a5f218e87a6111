import struct
import zlib

import numpy as np
import pytest

from afclip import GridSpec, load_cache, load_off, preprocess, save_cache, save_off, validate_convex
from afclip.errors import CacheError, ChecksumMismatchError, ParseError, UnsupportedFormatError, VersionMismatchError
from afclip.mesh_io import MAGIC, cache_bytes, parse_cache

from conftest import CUBE_QUADS, CUBE_V, TET_F, TET_V

TET_OFF = """OFF
# regular tetrahedron
4 4 0
1 1 1
1 -1 -1
-1 1 -1
-1 -1 1
3 0 1 2
3 0 3 1
3 0 2 3
3 1 3 2
"""


def write(tmp_path, text, name="m.off"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_load_tetrahedron(tmp_path):
    v, f = load_off(write(tmp_path, TET_OFF))
    assert v.shape == (4, 3) and f.shape == (4, 3)
    assert np.array_equal(v, TET_V) and np.array_equal(f, TET_F)


def test_quad_fan(tmp_path):
    text = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n"
    _, f = load_off(write(tmp_path, text))
    assert f.tolist() == [[0, 1, 2], [0, 2, 3]]


def test_colours_ignored(tmp_path):
    text = "COFF\n4 4 0\n" + "\n".join(" ".join(map(str, p)) + " 255 0 0 255" for p in TET_V) + "\n"
    text += "\n".join("3 " + " ".join(map(str, f)) + " 0.5 0.5 0.5" for f in TET_F) + "\n"
    v, f = load_off(write(tmp_path, text))
    assert np.array_equal(v, TET_V) and np.array_equal(f, TET_F)


def test_truncated_file_reports_position(tmp_path):
    text = "\n".join(TET_OFF.splitlines()[:7]) + "\n"
    with pytest.raises(ParseError) as exc:
        load_off(write(tmp_path, text))
    assert exc.value.line is not None and "line" in str(exc.value)


def test_bad_token_position(tmp_path):
    text = TET_OFF.replace("1 -1 -1", "1 x -1")
    with pytest.raises(ParseError) as exc:
        load_off(write(tmp_path, text))
    assert (exc.value.line, exc.value.column) == (5, 3)


def test_bad_index_and_header(tmp_path):
    with pytest.raises(ParseError):
        load_off(write(tmp_path, TET_OFF.replace("3 1 3 2", "3 1 3 9")))
    with pytest.raises(UnsupportedFormatError):
        load_off(write(tmp_path, "PLY\n"))


def test_save_off_roundtrip(tmp_path):
    p = tmp_path / "cube.off"
    save_off(p, CUBE_V, CUBE_QUADS)
    v, f = load_off(p)
    assert np.array_equal(v, CUBE_V) and len(f) == 12
    assert validate_convex(v, f).n_facets == 12


def test_cache_roundtrip_tetrahedron(tmp_path, tetra):
    prep = preprocess(tetra, GridSpec(8, 8))
    p = tmp_path / "t.afl"
    save_cache(prep, p)
    back = load_cache(p)
    assert back == prep
    assert p.read_bytes() == cache_bytes(back)
    assert p.read_bytes()[:4] == MAGIC


def test_cache_layout_header(cube):
    prep = preprocess(cube, [GridSpec(4, 5), GridSpec(6, 7), GridSpec(2, 3),
                             GridSpec(1, 1), GridSpec(9, 8), GridSpec(3, 3)])
    data = cache_bytes(prep)
    magic, version, n = struct.unpack_from("<4sHI", data)
    assert (magic, version, n) == (b"AFL1", 1, 12)
    dims = struct.unpack_from("<12I", data, 10)
    assert dims == (5, 4, 7, 6, 3, 2, 1, 1, 8, 9, 3, 3)
    assert struct.unpack("<I", data[-4:])[0] == zlib.crc32(data[:-4])
    # first table word follows the frames
    first = np.frombuffer(data, "<u8", 1, 10 + 48 + 72)[0]
    assert first == prep.table[0, 0]


def test_corrupted_byte(cube):
    data = bytearray(cache_bytes(preprocess(cube, GridSpec(4, 4))))
    data[200] ^= 0x10
    with pytest.raises(ChecksumMismatchError):
        parse_cache(bytes(data))


def test_version_mismatch(cube):
    data = cache_bytes(preprocess(cube, GridSpec(4, 4)), version=2)
    with pytest.raises(VersionMismatchError):
        parse_cache(data)


def test_not_a_cache_and_trailing_bytes(cube):
    with pytest.raises(CacheError):
        parse_cache(b"OFF\n...")
    body = cache_bytes(preprocess(cube, GridSpec(4, 4)))[:-4] + b"\0" * 8
    with pytest.raises(CacheError):
        parse_cache(body + struct.pack("<I", zlib.crc32(body)))


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_cache(tmp_path / "nope.afl")
