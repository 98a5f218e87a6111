"""Brute-force references for tests.

These deliberately avoid the code paths they check: facet scans instead of
half-space intervals, point sampling instead of corner algebra, explicit
segment intersection instead of sign tests.
"""
from __future__ import annotations

import numpy as np

from .geom import ConvexPolyhedron, Line3
from .result import ClipResult, Mode, classify


def clip_line_bruteforce(poly: ConvexPolyhedron, line: Line3, mode=Mode.LINE) -> ClipResult:
    """Intersect ``line`` with every facet and span the hits."""
    t = poly.hit_parameters(line.anchor, line.dir)
    hit = np.flatnonzero(~np.isnan(t))
    if len(hit) == 0:
        return ClipResult.empty()
    i_in = hit[np.argmin(t[hit])]
    i_out = hit[np.argmax(t[hit])]
    return classify([t[i_in]], [t[i_out]], [i_in], [i_out], mode).result(0, line.anchor, line.dir)


def _segment_meets_line(p, q, x0, d, eps=1e-12):
    """Does the infinite line ``x0 + r*d`` meet segment ``pq``? (2-D)"""
    e = q - p
    den = d[0] * e[1] - d[1] * e[0]
    w = p - x0
    scale = np.hypot(*d) * np.hypot(*e)
    if abs(den) <= eps * scale:
        # parallel: only collinear segments meet
        return abs(w[0] * d[1] - w[1] * d[0]) <= eps * np.hypot(*d) * max(1.0, np.hypot(*w))
    s = (w[0] * d[1] - w[1] * d[0]) / den
    return -eps <= s <= 1.0 + eps


def line_stabs_triangle_2d(tri, slope: float, offset: float, kind) -> bool:
    """Does the dual point ``(slope, offset)`` give a line meeting ``tri``?

    ``kind`` 0 is ``v = slope*u + offset``, 1 is ``u = slope*v + offset``.
    Checks each triangle edge as a segment.
    """
    tri = np.asarray(tri, dtype=np.float64)
    if int(kind) == 0:
        x0, d = np.array([0.0, offset]), np.array([1.0, slope])
    else:
        x0, d = np.array([offset, 0.0]), np.array([slope, 1.0])
    return any(_segment_meets_line(tri[i], tri[(i + 1) % 3], x0, d) for i in range(3))


def zone_interference_sampled(tri2d, cell, kind, grid_density: int = 64) -> bool:
    """Sample ``grid_density**2`` lines over ``cell`` (corners included)."""
    s1, s2, o1, o2 = cell
    tri = np.asarray(tri2d, dtype=np.float64)
    u, v = (tri[:, 0], tri[:, 1]) if int(kind) == 0 else (tri[:, 1], tri[:, 0])
    s = np.linspace(s1, s2, grid_density)[:, None, None]
    o = np.linspace(o1, o2, grid_density)[None, :, None]
    f = v - s * u - o
    stab = ~(np.all(f > 0, axis=-1) | np.all(f < 0, axis=-1))
    return bool(stab.any())
