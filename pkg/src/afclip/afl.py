"""Active Facet List (AFL) grids stored as packed bitsets.

For each of the three projection axes and each of the two semidual forms a
grid over ``slope x offset`` records, per cell, which facets are stabbed by
at least one line of that cell's zone. Six grids in total, numbered
``j = 2*i - 1`` (KQ) and ``j = 2*i`` (MP) for projection ``i = 1, 2, 3``
(along X, Y, Z). At query time two cells are fetched and AND-ed.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import LengthMismatchError
from .geom import ConvexPolyhedron
from .projection import Axis, project_points
from .semidual import (
    DEFAULT_CAP,
    BoundingFrame,
    Form,
    GridSpec,
    SemidualForm,
    bounding_frame,
    cell_index,
    offset_edges,
    slope_edges,
    suggest_grid,
)

# Cells are widened by this fraction of their size when facets are binned, so
# that rounding in the query-side dual coordinates cannot drop a facet.
CELL_MARGIN = 1e-9


def n_words(n_bits: int) -> int:
    return (n_bits + 63) // 64


def pack_rows(mask: np.ndarray) -> np.ndarray:
    """Boolean ``(..., N)`` to packed ``(..., ceil(N/64))`` uint64, bit i = column i."""
    mask = np.asarray(mask, dtype=bool)
    n = mask.shape[-1]
    w = n_words(n)
    if w * 64 != n:
        pad = np.zeros(mask.shape[:-1] + (w * 64 - n,), dtype=bool)
        mask = np.concatenate([mask, pad], axis=-1)
    packed = np.packbits(mask, axis=-1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False)


def unpack_rows(words: np.ndarray, n: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype="<u8")
    bits = np.unpackbits(words.view(np.uint8), axis=-1, bitorder="little")
    return bits[..., :n].astype(bool)


@dataclass(frozen=True, eq=False)
class FacetBitset:
    """Set of facet ids as packed 64-bit words (bit i set iff facet i present)."""

    words: np.ndarray
    n: int

    @classmethod
    def from_indices(cls, ids, n: int) -> "FacetBitset":
        mask = np.zeros(n, dtype=bool)
        mask[np.asarray(list(ids), dtype=np.intp)] = True
        return cls(pack_rows(mask), n)

    @classmethod
    def full(cls, n: int) -> "FacetBitset":
        return cls(pack_rows(np.ones(n, dtype=bool)), n)

    def __and__(self, other: "FacetBitset") -> "FacetBitset":
        return intersect(self, other)

    def __iter__(self):
        return iter_ones(self)

    def __len__(self):
        return int(np.bitwise_count(self.words).sum())

    def __contains__(self, i):
        i = int(i)
        return 0 <= i < self.n and bool((int(self.words[i >> 6]) >> (i & 63)) & 1)

    def __eq__(self, other):
        return isinstance(other, FacetBitset) and self.n == other.n and np.array_equal(self.words, other.words)

    def __repr__(self):
        return f"FacetBitset({list(self)}, n={self.n})"

    def issubset(self, other: "FacetBitset") -> bool:
        return not np.any(self.words & ~other.words)


def intersect(b1: FacetBitset, b2: FacetBitset) -> FacetBitset:
    """Word-wise AND of two bitsets of equal length."""
    if b1.n != b2.n:
        raise LengthMismatchError(f"bitset lengths differ: {b1.n} != {b2.n}")
    return FacetBitset(b1.words & b2.words, b1.n)


def iter_ones(b: FacetBitset):
    """Set bit positions in ascending order."""
    nz = np.flatnonzero(b.words)
    if len(nz) == 0:
        return iter(())
    bits = unpack_rows(b.words[nz][:, None], 64)
    rows, cols = np.nonzero(bits)
    return iter((nz[rows] * 64 + cols).tolist())


@dataclass(frozen=True, eq=False)
class SemidualGrid:
    """One ``n_offset x n_slope`` table of facet bitsets."""

    kind: Form
    proj_axis: Axis
    frame: BoundingFrame
    spec: GridSpec
    cells: np.ndarray  # (n_offset, n_slope, words) uint64
    n_facets: int

    def cell(self, ii: int, jj: int) -> FacetBitset:
        return FacetBitset(self.cells[ii, jj], self.n_facets)

    def lookup(self, form: SemidualForm):
        """Bitset of the cell holding ``form``, or None when it is out of range."""
        idx = cell_index(form, self.frame, self.spec)
        return None if idx is None else self.cell(*idx)

    def bits_per_cell(self) -> np.ndarray:
        return np.bitwise_count(self.cells).sum(axis=-1)

    def mean_bits_per_cell(self) -> float:
        return float(self.bits_per_cell().mean())

    def same_as(self, other: "SemidualGrid") -> bool:
        return (self.kind == other.kind and self.proj_axis == other.proj_axis
                and self.frame == other.frame and self.spec == other.spec
                and self.n_facets == other.n_facets and np.array_equal(self.cells, other.cells))


def grid_number(proj_axis, kind) -> int:
    """1-based table number: ``2*i - 1`` for KQ, ``2*i`` for MP, ``i`` = axis + 1."""
    return 2 * int(proj_axis) + int(kind) + 1


GRID_ORDER = tuple((ax, kind) for ax in Axis for kind in Form)


def projection_frame(poly: ConvexPolyhedron, proj_axis) -> tuple[BoundingFrame, np.ndarray]:
    """Bounding frame of the projected polyhedron and its projected vertices."""
    pts = project_points(poly.vertices, proj_axis)
    return bounding_frame(pts[np.unique(poly.faces)]), pts


def build_grid(poly: ConvexPolyhedron, proj_axis, kind, spec: GridSpec, *,
               margin: float = CELL_MARGIN, out: np.ndarray | None = None) -> SemidualGrid:
    """Bin every facet into every cell whose zone stabs its projection.

    Equivalent to evaluating :func:`~afclip.semidual.zone_interferes` for all
    (cell, facet) pairs, done one slope column at a time: for a fixed slope
    range the corner test reduces to comparing the cell's offset range with
    the smallest and largest ``v - slope*u`` over the facet's vertices.
    """
    proj_axis, kind = Axis(proj_axis), Form(kind)
    frame, pts = projection_frame(poly, proj_axis)
    centered = pts - np.asarray(frame.center)
    tri = centered[poly.faces]
    if kind == Form.KQ:
        u, v = tri[..., 0], tri[..., 1]
    else:
        u, v = tri[..., 1], tri[..., 0]
    n = poly.n_facets
    shape = (spec.n_offset, spec.n_slope, n_words(n))
    cells = np.zeros(shape, dtype=np.uint64) if out is None else out
    if cells.shape != shape:
        raise ValueError(f"output buffer has shape {cells.shape}, expected {shape}")

    se = slope_edges(spec.n_slope)
    oe = offset_edges(frame.a, spec.n_offset)
    pad_s = margin * 2.0 / spec.n_slope
    pad_o = margin * 4.0 * frame.a / spec.n_offset
    o1 = (oe[:-1] - pad_o)[:, None]
    o2 = (oe[1:] + pad_o)[:, None]
    for jj in range(spec.n_slope):
        g1 = v - (se[jj] - pad_s) * u
        g2 = v - (se[jj + 1] + pad_s) * u
        lo = np.minimum(g1.min(axis=1), g2.min(axis=1))
        hi = np.maximum(g1.max(axis=1), g2.max(axis=1))
        cells[:, jj] = pack_rows((lo <= o2) & (hi >= o1))
    return SemidualGrid(kind, proj_axis, frame, spec, cells, n)


def unique_edges(faces: np.ndarray) -> np.ndarray:
    edges = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    edges.sort(axis=1)
    return np.unique(edges, axis=0)


def auto_specs(poly: ConvexPolyhedron, cap: int = DEFAULT_CAP) -> list[GridSpec]:
    """:func:`~afclip.semidual.suggest_grid` for all six tables, in table order."""
    edges = unique_edges(poly.faces)
    used = np.unique(poly.faces)
    specs = []
    for ax, kind in GRID_ORDER:
        pts = project_points(poly.vertices, ax)
        # remap edge endpoints onto the used-vertex subset
        remap = np.full(len(poly.vertices), -1, dtype=np.intp)
        remap[used] = np.arange(len(used))
        specs.append(suggest_grid(pts[used], remap[edges], kind, cap=cap))
    return specs


@dataclass(frozen=True, eq=False)
class PreprocessedPolyhedron:
    """A polyhedron together with its six AFL grids.

    All grid cells live in one contiguous ``table`` of shape
    ``(total_cells, words)``; each grid's ``cells`` is a view into it.
    """

    polyhedron: ConvexPolyhedron
    grids: tuple[SemidualGrid, ...]
    table: np.ndarray = field(repr=False)

    @classmethod
    def from_grids(cls, poly: ConvexPolyhedron, grids: Sequence[SemidualGrid]) -> "PreprocessedPolyhedron":
        w = n_words(poly.n_facets)
        table = np.concatenate([g.cells.reshape(-1, w) for g in grids]) if grids else np.zeros((0, w), np.uint64)
        views = _split_table(table, [g.spec for g in grids])
        grids = tuple(SemidualGrid(g.kind, g.proj_axis, g.frame, g.spec, view, g.n_facets)
                      for g, view in zip(grids, views))
        return cls(poly, grids, table)

    def __post_init__(self):
        if len(self.grids) != 6:
            raise ValueError("expected six grids")
        for (ax, kind), g in zip(GRID_ORDER, self.grids):
            if g.proj_axis != ax or g.kind != kind:
                raise ValueError(f"grid {grid_number(g.proj_axis, g.kind)} out of order")
            if g.n_facets != self.polyhedron.n_facets:
                raise ValueError("grid built for a different polyhedron")

    def grid(self, j: int) -> SemidualGrid:
        """Table ``AFL_j``, ``j`` in 1..6."""
        return self.grids[j - 1]

    def frame(self, proj_axis) -> BoundingFrame:
        return self.grids[2 * int(proj_axis)].frame

    @property
    def n_facets(self) -> int:
        return self.polyhedron.n_facets

    @cached_property
    def cell_counts(self) -> np.ndarray:
        """Number of facets in every row of :attr:`table`."""
        return np.bitwise_count(self.table).sum(axis=1, dtype=np.int64)

    @property
    def cell_base(self) -> np.ndarray:
        sizes = [g.spec.n_offset * g.spec.n_slope for g in self.grids]
        return np.concatenate([[0], np.cumsum(sizes)[:-1]]).astype(np.intp)

    def __eq__(self, other):
        if not isinstance(other, PreprocessedPolyhedron):
            return NotImplemented
        p, q = self.polyhedron, other.polyhedron
        same_poly = all(np.array_equal(x, y) for x, y in (
            (p.vertices, q.vertices), (p.faces, q.faces), (p.normals, q.normals), (p.offsets, q.offsets)))
        return same_poly and all(g.same_as(h) for g, h in zip(self.grids, other.grids))

    __hash__ = None


def _split_table(table, specs):
    views, base = [], 0
    for spec in specs:
        size = spec.n_offset * spec.n_slope
        views.append(table[base:base + size].reshape(spec.n_offset, spec.n_slope, -1))
        base += size
    return views


def preprocess(poly: ConvexPolyhedron, spec: GridSpec | Sequence[GridSpec] | None = None, *,
               cap: int = DEFAULT_CAP, margin: float = CELL_MARGIN,
               parallel: bool = False) -> PreprocessedPolyhedron:
    """Build all six AFL grids.

    ``spec`` may be one :class:`GridSpec` for every table, six of them in
    table order, or None to size each table with
    :func:`~afclip.semidual.suggest_grid` (bounded by ``cap``).
    """
    if spec is None:
        specs = auto_specs(poly, cap)
    elif isinstance(spec, GridSpec):
        specs = [spec] * 6
    else:
        specs = list(spec)
        if len(specs) != 6:
            raise ValueError("need one GridSpec or six")
    w = n_words(poly.n_facets)
    table = np.zeros((sum(s.n_offset * s.n_slope for s in specs), w), dtype=np.uint64)
    views = _split_table(table, specs)

    def build(k):
        ax, kind = GRID_ORDER[k]
        return build_grid(poly, ax, kind, specs[k], margin=margin, out=views[k])

    if parallel:
        with ThreadPoolExecutor() as pool:
            grids = tuple(pool.map(build, range(6)))
    else:
        grids = tuple(build(k) for k in range(6))
    return PreprocessedPolyhedron(poly, grids, table)
