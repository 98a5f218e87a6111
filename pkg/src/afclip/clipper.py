"""Expected-constant-time line clipping against a preprocessed polyhedron.

A query picks two axis-parallel planes through the line, looks up the AFL
cell of each projected plane-line, ANDs the two facet bitsets and runs the
exact line/facet test on the few facets that survive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import clip_rows
from .afl import PreprocessedPolyhedron, grid_number, intersect, iter_ones
from .errors import ZeroDirectionError
from .geom import ConvexPolyhedron, Line3
from .projection import plane_lines_batch, project_plane_to_line2d, select_planes
from .result import ClipBatch, ClipResult, Mode, classify
from .semidual import cell_index_batch, to_semidual, to_semidual_batch


@dataclass(frozen=True)
class QueryStats:
    omega1: int  # facets in the first AFL cell
    omega2: int
    omega: int  # facets left after the AND
    detail_tests: int


def _aggregate(line_ids, facets, t, n_lines):
    """Smallest and largest hit parameter (and its facet) per line."""
    t_in = np.full(n_lines, np.nan)
    t_out = np.full(n_lines, np.nan)
    entry = np.full(n_lines, -1, dtype=np.int64)
    exit_ = np.full(n_lines, -1, dtype=np.int64)
    ok = ~np.isnan(t)
    line_ids, facets, t = line_ids[ok], facets[ok], t[ok]
    if len(t):
        # ties resolve to the lowest facet id
        order = np.lexsort((facets, t, line_ids))
        first = np.ones(len(order), bool)
        first[1:] = line_ids[order][1:] != line_ids[order][:-1]
        sel = order[first]
        t_in[line_ids[sel]] = t[sel]
        entry[line_ids[sel]] = facets[sel]
        order = np.lexsort((facets, -t, line_ids))
        sel = order[first]
        t_out[line_ids[sel]] = t[sel]
        exit_[line_ids[sel]] = facets[sel]
    return t_in, t_out, entry, exit_, entry >= 0


def detail_e3_test(poly: ConvexPolyhedron, line: Line3, candidates, mode=Mode.LINE) -> ClipResult:
    """Exact line/facet intersection on ``candidates`` only.

    The hits span the clipped interval; hits that coincide within tolerance
    make a single point.
    """
    ids = np.fromiter(candidates, dtype=np.int64)
    t = poly.hit_parameters(line.anchor, line.dir, ids)
    agg = _aggregate(np.zeros(len(ids), np.int64), ids, t, 1)
    return classify(*agg[:4], mode, agg[4]).result(0, line.anchor, line.dir)


def clip_line(prep: PreprocessedPolyhedron, line: Line3, mode=Mode.LINE) -> tuple[ClipResult, QueryStats]:
    """Clip ``line`` against ``prep.polyhedron`` using the AFL grids."""
    choice = select_planes(line)
    omegas = []
    for sel in choice.selections:
        form = to_semidual(project_plane_to_line2d(sel.plane, sel.proj_axis), prep.frame(sel.proj_axis))
        cell = prep.grid(grid_number(sel.proj_axis, form.kind)).lookup(form)
        if cell is None:
            # the plane misses the projected polyhedron altogether
            n1 = len(omegas[0]) if omegas else 0
            return ClipResult.empty(), QueryStats(n1, 0, 0, 0)
        omegas.append(cell)
    omega = intersect(*omegas)
    cands = list(iter_ones(omega))
    res = detail_e3_test(prep.polyhedron, line, cands, mode)
    return res, QueryStats(len(omegas[0]), len(omegas[1]), len(cands), len(cands))


@dataclass(frozen=True)
class BatchStats:
    omega1: np.ndarray
    omega2: np.ndarray
    omega: np.ndarray


_CHUNK = 4096


def lookup_rows(prep: PreprocessedPolyhedron, anchors, dirs) -> np.ndarray:
    """Rows of ``prep.table`` holding the two AFL cells of each line.

    Returns ``(L, 2)`` indices, -1 where the plane-line misses its projected
    polyhedron. For a line with both rows present ``table[r0] & table[r1]``
    is its candidate set; otherwise the set is empty.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=np.float64))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    g = prep.grids
    centers = np.array([prep.frame(ax).center for ax in range(3)])
    half = np.array([prep.frame(ax).a for ax in range(3)])
    n_slope = np.array([gr.spec.n_slope for gr in g], dtype=np.intp)
    n_offset = np.array([gr.spec.n_offset for gr in g], dtype=np.intp)
    base = prep.cell_base
    proj, a, b, c = plane_lines_batch(anchors, dirs)
    n = len(anchors)
    rows = np.empty((n, 2), dtype=np.intp)
    for k in range(2):
        ax = proj[:, k]
        form, slope, off = to_semidual_batch(a[:, k], b[:, k], c[:, k], centers[ax, 0], centers[ax, 1])
        gid = 2 * ax + form
        ii, jj = cell_index_batch(slope, off, half[ax], n_slope[gid], n_offset[gid])
        rows[:, k] = np.where(ii >= 0, base[gid] + ii * n_slope[gid] + jj, -1)
    return rows


def clip_lines(prep: PreprocessedPolyhedron, anchors, dirs, mode=Mode.LINE) -> tuple[ClipBatch, BatchStats]:
    """Batched :func:`clip_line` for ``(L, 3)`` anchors and directions."""
    anchors = np.ascontiguousarray(np.atleast_2d(np.asarray(anchors, dtype=np.float64)))
    dirs = np.ascontiguousarray(np.atleast_2d(np.asarray(dirs, dtype=np.float64)))
    if np.any(~np.any(dirs != 0, axis=1)):
        raise ZeroDirectionError("line directions must be non-zero")
    L = len(anchors)
    kernel = np.ascontiguousarray(prep.polyhedron.kernel)
    counts = prep.cell_counts
    t_in = np.empty(L)
    t_out = np.empty(L)
    entry = np.empty(L, dtype=np.int64)
    exit_ = np.empty(L, dtype=np.int64)
    omega = np.empty(L, dtype=np.int64)
    c1 = np.zeros(L, dtype=np.int64)
    c2 = np.zeros(L, dtype=np.int64)
    for lo in range(0, L, _CHUNK):
        sl = slice(lo, lo + _CHUNK)
        rows = lookup_rows(prep, anchors[sl], dirs[sl])
        # like the single-line query, the second cell is not read once the first misses
        c1[sl] = np.where(rows[:, 0] >= 0, counts[rows[:, 0]], 0)
        c2[sl] = np.where(rows.min(axis=1) >= 0, counts[rows[:, 1]], 0)
        clip_rows(prep.table, rows, kernel, anchors[sl], dirs[sl],
                  t_in[sl], t_out[sl], entry[sl], exit_[sl], omega[sl])
    return classify(t_in, t_out, entry, exit_, mode, entry >= 0), BatchStats(c1, c2, omega)
