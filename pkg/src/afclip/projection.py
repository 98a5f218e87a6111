"""Choice of the two axis-parallel planes through a 3-D line and their
orthographic projection to 2-D lines.

Projection along axis ``X`` keeps the coordinates ``(y, z)``, along ``Y`` keeps
``(z, x)``, along ``Z`` keeps ``(x, y)``. Preprocessing and queries share this
frame convention.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NotAxisParallelError, ZeroDirectionError
from .geom import BASIS, Line3, Plane, cross


class Axis(enum.IntEnum):
    X = 0
    Y = 1
    Z = 2


# retained (u, v) coordinate indices for each projection axis
COORDS = {Axis.X: (1, 2), Axis.Y: (2, 0), Axis.Z: (0, 1)}

# the two projection axes used for each dominant axis, in selection order
_PAIRS = {
    Axis.X: (Axis.Y, Axis.Z),
    Axis.Y: (Axis.Z, Axis.X),
    Axis.Z: (Axis.X, Axis.Y),
}

_PAIRS_ARR = np.array([[_PAIRS[a][0], _PAIRS[a][1]] for a in Axis], dtype=np.intp)
_COORDS_ARR = np.array([COORDS[a] for a in Axis], dtype=np.intp)


@dataclass(frozen=True)
class Line2D:
    """``a*u + b*v + c = 0`` in a retained coordinate pair ``(u, v)``."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a == 0.0 and self.b == 0.0:
            raise ValueError("degenerate 2-D line: a = b = 0")


@dataclass(frozen=True)
class PlaneSelection:
    proj_axis: Axis
    plane: Plane
    coords: tuple[int, int]


@dataclass(frozen=True)
class PlaneChoice:
    dominant_axis: Axis
    selections: tuple[PlaneSelection, PlaneSelection]


def dominant_axis(s) -> Axis:
    # argmax returns the first maximum: ties resolve X, then Y, then Z
    return Axis(int(np.argmax(np.abs(np.asarray(s, dtype=np.float64)))))


def select_planes(line: Line3) -> PlaneChoice:
    """Two planes through ``line``, each parallel to one coordinate axis.

    The plane ``s x e_j`` for the dominant axis ``j`` of the direction ``s`` is
    skipped since it degenerates as ``s`` approaches that axis.
    """
    s = np.asarray(line.dir, dtype=np.float64)
    if not np.any(s):
        raise ZeroDirectionError("line direction must be non-zero")
    dom = dominant_axis(s)
    sel = []
    for ax in _PAIRS[dom]:
        n = cross(s, BASIS[ax])
        d = -float(n @ line.anchor)
        sel.append(PlaneSelection(ax, Plane(n, d), COORDS[ax]))
    return PlaneChoice(dom, tuple(sel))


def project_plane_to_line2d(plane: Plane, proj_axis) -> Line2D:
    """Drop the ``proj_axis`` coordinate of an axis-parallel plane."""
    ax = Axis(proj_axis)
    n = plane.n
    if abs(n[ax]) > 1e-12 * float(np.linalg.norm(n)):
        raise NotAxisParallelError(f"plane normal {n} is not perpendicular to axis {ax.name}")
    iu, iv = COORDS[ax]
    return Line2D(float(n[iu]), float(n[iv]), float(plane.d))


def project_points(points, proj_axis) -> np.ndarray:
    """``(..., 3)`` points to ``(..., 2)`` in the canonical frame of ``proj_axis``."""
    return np.asarray(points, dtype=np.float64)[..., list(COORDS[Axis(proj_axis)])]


def plane_lines_batch(anchors: np.ndarray, dirs: np.ndarray):
    """Vectorised :func:`select_planes` + :func:`project_plane_to_line2d`.

    Returns ``(proj_axes, a, b, c)``, each of shape ``(L, 2)``: for every line
    the two projection axes and the 2-D line coefficients in their frames.
    """
    dom = np.argmax(np.abs(dirs), axis=1)
    proj = _PAIRS_ARR[dom]
    rows = np.arange(len(dirs))[:, None]
    # for s x e_j the component along j is 0 and the other two are read off
    # directly; written out for both retained coordinates of each frame
    iu = _COORDS_ARR[proj, 0]
    iv = _COORDS_ARR[proj, 1]
    n_full = np.zeros((len(dirs), 2, 3))
    for k in range(2):
        e = np.zeros((len(dirs), 3))
        e[np.arange(len(dirs)), proj[:, k]] = 1.0
        n_full[:, k] = np.cross(dirs, e)
    a = n_full[rows, np.arange(2)[None, :], iu]
    b = n_full[rows, np.arange(2)[None, :], iv]
    c = -np.einsum("lki,li->lk", n_full, anchors)
    return proj, a, b, c
