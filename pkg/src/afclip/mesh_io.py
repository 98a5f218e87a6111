"""OFF mesh input/output and the binary ``AFL1`` cache of preprocessed grids.

Cache layout (all little-endian)::

    magic "AFL1" | version u16 | N u32
    6 x (n_offset u32, n_slope u32)            tables AFL_1 .. AFL_6
    3 x (center_u f64, center_v f64, a f64)    frames for projections X, Y, Z
    6 tables, row-major (ii outer, jj inner), ceil(N/64) u64 words per cell
    V u32 | vertices V*3 f64 | faces N*3 u32 | normals N*3 f64 | offsets N f64
    CRC32 u32 of every preceding byte
"""
from __future__ import annotations

import os
import re
import struct
import zlib

import numpy as np

from .afl import GRID_ORDER, PreprocessedPolyhedron, SemidualGrid, _split_table, n_words
from .errors import (
    CacheError,
    ChecksumMismatchError,
    ParseError,
    UnsupportedFormatError,
    VersionMismatchError,
)
from .geom import ConvexPolyhedron
from .semidual import BoundingFrame, GridSpec

MAGIC = b"AFL1"
VERSION = 1

_HEAD = struct.Struct("<4sHI")
_DIMS = struct.Struct("<12I")
_FRAMES = struct.Struct("<9d")


def _tokens(text: str):
    """Yield ``(token, line, column)``, skipping ``#`` comments."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        for m in re.finditer(r"\S+", line):
            yield m.group(), lineno, m.start() + 1


def load_off(path):
    """Read an ASCII OFF file.

    Returns ``(vertices, faces)`` as ``(V, 3)`` float and ``(F', 3)`` int
    arrays. Polygons with more than three corners are split into a fan around
    their first vertex. Colour columns (``COFF`` and per-face colours) are
    ignored.
    """
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        text = fh.read()
    toks = _tokens(text)
    last_line = text.count("\n") + 1

    def take(what):
        try:
            return next(toks)
        except StopIteration:
            raise ParseError(f"unexpected end of file while reading {what}", last_line, 1) from None

    def number(what, conv):
        tok, ln, col = take(what)
        try:
            return conv(tok), ln, col
        except ValueError:
            raise ParseError(f"expected {what}, got {tok!r}", ln, col) from None

    head, ln, col = take("header")
    if head.upper() not in ("OFF", "COFF"):
        raise UnsupportedFormatError(f"unsupported mesh header {head!r}; only ASCII OFF is read")
    n_v, _, _ = number("vertex count", int)
    n_f, _, _ = number("face count", int)
    number("edge count", int)
    if n_v < 0 or n_f < 0:
        raise ParseError("negative element count", ln, col)

    # vertex and face rows may carry trailing colour values, so read by line
    lines: dict[int, list[tuple[str, int]]] = {}
    order = []
    for tok, ln, col in toks:
        if ln not in lines:
            lines[ln] = []
            order.append(ln)
        lines[ln].append((tok, col))
    rows = iter(order)

    verts = np.empty((n_v, 3))
    for i in range(n_v):
        ln = next(rows, None)
        if ln is None:
            raise ParseError(f"unexpected end of file: read {i} of {n_v} vertices", last_line, 1)
        row = lines[ln]
        if len(row) < 3:
            raise ParseError("vertex needs three coordinates", ln, row[-1][1])
        for k in range(3):
            try:
                verts[i, k] = float(row[k][0])
            except ValueError:
                raise ParseError(f"bad coordinate {row[k][0]!r}", ln, row[k][1]) from None

    tris = []
    for i in range(n_f):
        ln = next(rows, None)
        if ln is None:
            raise ParseError(f"unexpected end of file: read {i} of {n_f} faces", last_line, 1)
        row = lines[ln]
        try:
            k = int(row[0][0])
        except ValueError:
            raise ParseError(f"bad face size {row[0][0]!r}", ln, row[0][1]) from None
        if k < 3:
            raise ParseError(f"face with {k} corners", ln, row[0][1])
        if len(row) < k + 1:
            raise ParseError(f"face lists {len(row) - 1} of {k} indices", ln, row[-1][1])
        idx = []
        for tok, col in row[1:k + 1]:
            try:
                j = int(tok)
            except ValueError:
                raise ParseError(f"bad vertex index {tok!r}", ln, col) from None
            if not 0 <= j < n_v:
                raise ParseError(f"vertex index {j} out of range", ln, col)
            idx.append(j)
        tris.extend((idx[0], idx[m], idx[m + 1]) for m in range(1, k - 1))
    return verts, np.array(tris, dtype=np.int64).reshape(-1, 3)


def save_off(path, vertices, faces):
    vertices = np.asarray(vertices, dtype=np.float64)
    faces = np.asarray(faces)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(vertices)} {len(faces)} 0\n")
        for x, y, z in vertices:
            fh.write(f"{float(x)!r} {float(y)!r} {float(z)!r}\n")
        for f in faces:
            fh.write(f"{len(f)} " + " ".join(str(int(i)) for i in f) + "\n")


def cache_bytes(prep: PreprocessedPolyhedron, version: int = VERSION) -> bytes:
    poly = prep.polyhedron
    n = poly.n_facets
    dims = []
    for g in prep.grids:
        dims += [g.spec.n_offset, g.spec.n_slope]
    frames = []
    for ax in range(3):
        f = prep.frame(ax)
        frames += [f.center[0], f.center[1], f.a]
    parts = [
        _HEAD.pack(MAGIC, version, n),
        _DIMS.pack(*dims),
        _FRAMES.pack(*frames),
        np.ascontiguousarray(prep.table, dtype="<u8").tobytes(),
        struct.pack("<I", len(poly.vertices)),
        np.ascontiguousarray(poly.vertices, dtype="<f8").tobytes(),
        np.ascontiguousarray(poly.faces, dtype="<u4").tobytes(),
        np.ascontiguousarray(poly.normals, dtype="<f8").tobytes(),
        np.ascontiguousarray(poly.offsets, dtype="<f8").tobytes(),
    ]
    body = b"".join(parts)
    return body + struct.pack("<I", zlib.crc32(body))


def save_cache(prep: PreprocessedPolyhedron, path):
    data = cache_bytes(prep)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def parse_cache(data: bytes) -> PreprocessedPolyhedron:
    if len(data) < _HEAD.size + 4 or data[:4] != MAGIC:
        raise CacheError("not an AFL1 cache file")
    magic, version, n = _HEAD.unpack_from(data, 0)
    if version != VERSION:
        raise VersionMismatchError(f"cache version {version}, reader supports {VERSION}")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) != crc:
        raise ChecksumMismatchError("cache checksum mismatch")

    try:
        pos = _HEAD.size
        dims = _DIMS.unpack_from(body, pos)
        pos += _DIMS.size
        frames = _FRAMES.unpack_from(body, pos)
        pos += _FRAMES.size
        specs = [GridSpec(n_slope=dims[2 * k + 1], n_offset=dims[2 * k]) for k in range(6)]
        w = n_words(n)
        cells = sum(s.n_offset * s.n_slope for s in specs)

        def read(dtype, count, shape):
            nonlocal pos
            arr = np.frombuffer(body, dtype=dtype, count=count, offset=pos)
            pos += arr.nbytes
            return arr.reshape(shape).copy()

        table = read("<u8", cells * w, (cells, w)).astype(np.uint64)
        (n_v,) = struct.unpack_from("<I", body, pos)
        pos += 4
        verts = read("<f8", n_v * 3, (n_v, 3)).astype(np.float64)
        faces = read("<u4", n * 3, (n, 3)).astype(np.int64)
        normals = read("<f8", n * 3, (n, 3)).astype(np.float64)
        offsets = read("<f8", n, (n,)).astype(np.float64)
    except (struct.error, ValueError) as exc:
        raise CacheError(f"truncated or malformed cache: {exc}") from None
    if pos != len(body):
        raise CacheError(f"{len(body) - pos} unexpected trailing bytes in cache")

    for arr in (verts, faces, normals, offsets):
        arr.setflags(write=False)
    poly = ConvexPolyhedron(verts, faces, normals, offsets)
    views = _split_table(table, specs)
    grids = tuple(
        SemidualGrid(kind, ax, BoundingFrame((frames[3 * ax], frames[3 * ax + 1]), frames[3 * ax + 2]),
                     specs[k], views[k], n)
        for k, (ax, kind) in enumerate(GRID_ORDER))
    return PreprocessedPolyhedron(poly, grids, table)


def load_cache(path) -> PreprocessedPolyhedron:
    with open(path, "rb") as fh:
        return parse_cache(fh.read())
