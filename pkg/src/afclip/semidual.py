"""Bounded ("semidual") representation of 2-D lines.

A line with ``|a| <= |b|`` is written ``v = k*u + q`` (form KQ), any other line
as ``u = m*v + p`` (form MP), so the slope is always in ``[-1, 1]``. Offsets are
taken relative to the center of a bounding square of half-size ``a``; a line
of slope at most 1 that meets the square has ``|offset| <= 2a``. The bounded
dual rectangle ``[-1, 1] x [-2a, 2a]`` is bucketed into a uniform grid whose
cells correspond to butterfly-shaped zones of lines in the primal plane.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProjectionError
from .projection import Line2D


class Form(enum.IntEnum):
    KQ = 0  # v = k*u + q
    MP = 1  # u = m*v + p


@dataclass(frozen=True)
class SemidualForm:
    kind: Form
    slope: float
    offset: float


@dataclass(frozen=True)
class BoundingFrame:
    center: tuple[float, float]
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("frame half-extent must be positive")


@dataclass(frozen=True)
class GridSpec:
    n_slope: int
    n_offset: int

    def __post_init__(self):
        if self.n_slope < 1 or self.n_offset < 1:
            raise ValueError("grid dimensions must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """``"KxQ"``: slope subdivisions x offset subdivisions."""
        k, q = text.lower().split("x")
        return cls(int(k), int(q))

    def __str__(self):
        return f"{self.n_slope}x{self.n_offset}"


DEFAULT_CAP = 1024
DEFAULT_N = 16


def bounding_frame(projected_vertices) -> BoundingFrame:
    """Smallest axis-aligned square (center, half-size) around 2-D points."""
    pts = np.asarray(projected_vertices, dtype=np.float64).reshape(-1, 2)
    if len(pts) < 3:
        raise ValueError("need at least 3 projected vertices")
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    center = 0.5 * (lo + hi)
    half = 0.5 * float(np.max(hi - lo))
    if half <= 1e-12 * max(1.0, float(np.max(np.abs(center)))):
        raise DegenerateProjectionError("projected vertices collapse to a single point")
    return BoundingFrame((float(center[0]), float(center[1])), half * (1.0 + 1e-12))


def to_semidual(line: Line2D, frame: BoundingFrame) -> SemidualForm:
    """Slope/offset form of ``line`` in frame-centered coordinates."""
    a, b, c = line.a, line.b, line.c
    cu, cv = frame.center
    if abs(a) <= abs(b):
        k = -a / b
        q = -c / b
        return SemidualForm(Form.KQ, k, q + k * cu - cv)
    m = -b / a
    p = -c / a
    return SemidualForm(Form.MP, m, p + m * cv - cu)


def to_semidual_batch(a, b, c, cu, cv):
    """Array version of :func:`to_semidual`; returns ``(form, slope, offset)``."""
    kq = np.abs(a) <= np.abs(b)
    num = np.where(kq, a, b)
    den = np.where(kq, b, a)
    slope = -num / den
    off = -c / den
    off = np.where(kq, off + slope * cu - cv, off + slope * cv - cu)
    return np.where(kq, Form.KQ, Form.MP).astype(np.int8), slope, off


def cell_index(form: SemidualForm, frame: BoundingFrame, spec: GridSpec):
    """Grid cell ``(ii, jj)`` (offset row, slope column) holding ``form``.

    Returns None when ``|offset| > 2a``: such a line misses the frame square.
    """
    a2 = 2.0 * frame.a
    if not abs(form.offset) <= a2:
        return None
    ii = math.floor((form.offset + a2) * spec.n_offset / (2.0 * a2))
    jj = math.floor((form.slope + 1.0) * spec.n_slope / 2.0)
    return (min(max(ii, 0), spec.n_offset - 1), min(max(jj, 0), spec.n_slope - 1))


def cell_index_batch(slope, offset, a, n_slope, n_offset):
    """Array version of :func:`cell_index`; misses get ``ii = jj = -1``."""
    a2 = 2.0 * a
    hit = np.abs(offset) <= a2
    with np.errstate(invalid="ignore"):
        ii = np.floor((offset + a2) * n_offset / (2.0 * a2))
        jj = np.floor((slope + 1.0) * n_slope / 2.0)
    ii = np.clip(np.nan_to_num(ii), 0, n_offset - 1).astype(np.intp)
    jj = np.clip(np.nan_to_num(jj), 0, n_slope - 1).astype(np.intp)
    return np.where(hit, ii, -1), np.where(hit, jj, -1)


def slope_edges(n_slope: int) -> np.ndarray:
    return -1.0 + 2.0 * np.arange(n_slope + 1) / n_slope


def offset_edges(a: float, n_offset: int) -> np.ndarray:
    return -2.0 * a + 4.0 * a * np.arange(n_offset + 1) / n_offset


def cell_bounds(ii: int, jj: int, frame: BoundingFrame, spec: GridSpec):
    """``(s1, s2, o1, o2)`` slope and offset range of cell ``(ii, jj)``."""
    se = slope_edges(spec.n_slope)
    oe = offset_edges(frame.a, spec.n_offset)
    return float(se[jj]), float(se[jj + 1]), float(oe[ii]), float(oe[ii + 1])


def _uv(tri, kind):
    tri = np.asarray(tri, dtype=np.float64)
    if Form(kind) == Form.KQ:
        return tri[..., 0], tri[..., 1]
    return tri[..., 1], tri[..., 0]


def zone_interferes(tri, cell, kind) -> bool:
    """Does some line of the dual rectangle ``cell`` stab triangle ``tri``?

    ``tri`` holds three frame-centered 2-D vertices, ``cell`` is
    ``(s1, s2, o1, o2)``. With ``f_i = v_i - slope*u_i - offset`` (u and v
    swapped for MP) a line misses iff all ``f_i`` share a strict sign. Both
    miss regions are convex in dual space, so the rectangle misses iff all four
    corners fall in the same one. Touching counts as interfering.
    """
    s1, s2, o1, o2 = cell
    u, v = _uv(tri, kind)
    above = True  # every line passes below all vertices
    below = True
    for s in (s1, s2):
        for o in (o1, o2):
            f = v - s * u - o
            above = above and bool(np.all(f > 0))
            below = below and bool(np.all(f < 0))
    return not (above or below)


def _min_gap(values) -> float | None:
    vals = np.unique(np.asarray(values, dtype=np.float64))
    if len(vals) < 2:
        return None
    return float(np.min(np.diff(vals)))


def suggest_grid(projected_vertices, edges, kind, cap: int = DEFAULT_CAP) -> GridSpec:
    """Grid dimensions from the smallest coordinate and edge-slope gaps.

    The offset axis needs more than ``2a / gap`` cells to separate the
    closest distinct vertex coordinates, and the slope axis more than
    ``2 / gap`` to separate the closest distinct edge slopes (edges steeper
    than 1 in this form are excluded).
    """
    pts = np.asarray(projected_vertices, dtype=np.float64).reshape(-1, 2)
    bounding_frame(pts)  # rejects collapsed projections
    # unpadded half-extent, so exact ratios are not pushed over an integer
    a = 0.5 * float(np.max(np.ptp(pts, axis=0)))
    u, v = _uv(pts, kind)
    e = np.asarray(edges, dtype=np.intp).reshape(-1, 2)
    du = u[e[:, 1]] - u[e[:, 0]]
    dv = v[e[:, 1]] - v[e[:, 0]]
    ok = (du != 0) & (np.abs(dv) <= np.abs(du))
    slopes = dv[ok] / du[ok]

    def size(gap, span):
        if gap is None:
            return min(DEFAULT_N, cap)
        raw = span / gap
        return cap if raw >= cap else min(math.ceil(raw) + 1, cap)

    return GridSpec(n_slope=size(_min_gap(slopes), 2.0),
                    n_offset=size(_min_gap(v), 2.0 * a))
