"""Cyrus-Beck clipping: the line is intersected with every facet half-space.

This is the O(N) baseline and the reference semantics for the other clippers.
"""
from __future__ import annotations

import numpy as np

from .geom import EPS_CONVEX, EPS_PARALLEL, ConvexPolyhedron, Line3
from .result import ClipBatch, ClipResult, Mode, classify

# rows * facets per chunk in the batched variant
_CHUNK_ELEMS = 1 << 21


def _cb_core(poly: ConvexPolyhedron, anchors: np.ndarray, dirs: np.ndarray):
    denom = dirs @ poly.normals.T
    num = anchors @ poly.normals.T + poly.offsets
    snorm = np.sqrt(np.einsum("ij,ij->i", dirs, dirs))[:, None]
    parallel = np.abs(denom) <= EPS_PARALLEL * snorm
    outside = np.any(parallel & (num > EPS_CONVEX * poly.radius), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -num / denom
    t_enter = np.where(~parallel & (denom < 0), t, -np.inf)
    t_leave = np.where(~parallel & (denom > 0), t, np.inf)
    entry = np.argmax(t_enter, axis=1)
    exit_ = np.argmin(t_leave, axis=1)
    rows = np.arange(len(anchors))
    t_in = t_enter[rows, entry]
    t_out = t_leave[rows, exit_]
    valid = ~outside & np.isfinite(t_in) & np.isfinite(t_out)
    return t_in, t_out, entry, exit_, valid


def clip_lines_cb(poly: ConvexPolyhedron, anchors, dirs, mode=Mode.LINE) -> ClipBatch:
    """Batched :func:`clip_line_cb` for ``(L, 3)`` anchor and direction arrays."""
    anchors = np.atleast_2d(np.asarray(anchors, dtype=np.float64))
    dirs = np.atleast_2d(np.asarray(dirs, dtype=np.float64))
    step = max(1, _CHUNK_ELEMS // poly.n_facets)
    parts = [_cb_core(poly, anchors[i:i + step], dirs[i:i + step]) for i in range(0, len(anchors), step)]
    t_in, t_out, entry, exit_, valid = (np.concatenate(col) for col in zip(*parts))
    return classify(t_in, t_out, entry, exit_, mode, valid)


def clip_line_cb(poly: ConvexPolyhedron, line: Line3, mode=Mode.LINE) -> ClipResult:
    """Clip ``line`` against ``poly`` by intersecting all facet half-spaces.

    Facets whose normal faces against the direction tighten the entry
    parameter, the others tighten the exit parameter; a line parallel to a
    facet and outside its plane is rejected outright.
    """
    batch = _cb_core(poly, line.anchor[None, :], line.dir[None, :])
    return classify(*batch[:4], mode, batch[4]).result(0, line.anchor, line.dir)
