"""Floating-point geometric primitives: planes, lines, triangular facets and
validated convex polyhedra.

Vectors are plain ``numpy`` arrays of shape ``(3,)`` (float64). The polyhedron
keeps its facet data as stacked arrays so that both single-line and batched
queries can reuse the same per-facet precomputation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DegenerateFacetError,
    NonConvexError,
    OpenSurfaceError,
    ZeroDirectionError,
)

# Tolerances (relative where a scale is available).
EPS_PARALLEL = 1e-12  # |n.s| <= EPS_PARALLEL * |n| * |s|  -> parallel
EPS_BARY = 1e-10  # barycentric coordinates >= -EPS_BARY count as inside
EPS_CONVEX = 1e-9  # times bounding radius
EPS_AREA = 1e-12  # times squared longest edge

E_X = np.array([1.0, 0.0, 0.0])
E_Y = np.array([0.0, 1.0, 0.0])
E_Z = np.array([0.0, 0.0, 1.0])
BASIS = (E_X, E_Y, E_Z)


def as_vec3(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.float64).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector {v!r}")
    return v


def cross(u, v) -> np.ndarray:
    """Right-handed cross product ``u x v``."""
    u0, u1, u2 = (float(c) for c in np.asarray(u, dtype=np.float64).reshape(3))
    v0, v1, v2 = (float(c) for c in np.asarray(v, dtype=np.float64).reshape(3))
    return np.array([u1 * v2 - u2 * v1, u2 * v0 - u0 * v2, u0 * v1 - u1 * v0])


@dataclass(frozen=True)
class Plane:
    """Plane ``n.x + d = 0``; the sign of :meth:`eval` is the separation function."""

    n: np.ndarray
    d: float

    def __post_init__(self):
        n = as_vec3(self.n)
        if not np.any(n):
            raise ValueError("plane normal must be non-zero")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", float(self.d))

    def eval(self, x) -> float:
        return plane_eval(self, x)


def plane_eval(pl: Plane, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(pl.n[0] * x[0] + pl.n[1] * x[1] + pl.n[2] * x[2] + pl.d)


@dataclass(frozen=True)
class Line3:
    """Parametric line ``anchor + t * dir``."""

    anchor: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        a = as_vec3(self.anchor)
        s = as_vec3(self.dir)
        if not np.any(s):
            raise ZeroDirectionError("line direction must be non-zero")
        object.__setattr__(self, "anchor", a)
        object.__setattr__(self, "dir", s)

    @classmethod
    def through(cls, p, q) -> "Line3":
        p = as_vec3(p)
        return cls(p, as_vec3(q) - p)

    def point(self, t: float) -> np.ndarray:
        return self.anchor + t * self.dir


@dataclass(frozen=True)
class Facet:
    v0: int
    v1: int
    v2: int
    n: np.ndarray
    d: float

    @property
    def indices(self) -> tuple[int, int, int]:
        return (self.v0, self.v1, self.v2)

    @property
    def plane(self) -> Plane:
        return Plane(self.n, self.d)


def barycentric_basis(a, b, c):
    """Dual vectors ``w1, w2`` with ``lam1 = (p - a).w1``, ``lam2 = (p - a).w2``
    for any ``p`` in the plane of triangle ``abc``. Works on stacked arrays."""
    e1 = b - a
    e2 = c - a
    nr = np.cross(e1, e2)
    nn = np.einsum("...i,...i->...", nr, nr)[..., None]
    w1 = np.cross(e2, nr) / nn
    w2 = np.cross(nr, e1) / nn
    return w1, w2


def facet_kernel(a, b, c, normal, offset):
    """Per-facet ``(K, k0)`` with rows ``K = [n, w1, w2]`` and
    ``k0 = [d, -a.w1, -a.w2]``, so ``K @ x + k0`` gives the plane value and
    the two barycentric coordinates of a point ``x`` in the plane."""
    w1, w2 = barycentric_basis(a, b, c)
    K = np.stack([normal, w1, w2], axis=-2)
    k0 = np.stack([np.asarray(offset, dtype=np.float64) + 0.0,
                   -np.einsum("...i,...i->...", a, w1),
                   -np.einsum("...i,...i->...", a, w2)], axis=-1)
    return K, k0


def hit_parameters(K, k0, anchors, dirs):
    """Line/triangle hit parameters for stacked (line, facet) pairs.

    ``K, k0`` come from :func:`facet_kernel` (unit normals); all arguments
    broadcast along leading axes. Returns ``t`` with NaN where the line is
    parallel to the facet plane or misses the triangle.
    """
    x = np.einsum("...ij,...j->...i", K, anchors) + k0
    y = np.einsum("...ij,...j->...i", K, dirs)
    ns = y[..., 0]
    snorm = np.sqrt(np.einsum("...i,...i->...", dirs, dirs))
    ok = np.abs(ns) > EPS_PARALLEL * snorm
    with np.errstate(divide="ignore", invalid="ignore"):
        t = -x[..., 0] / ns
        l1 = x[..., 1] + t * y[..., 1]
        l2 = x[..., 2] + t * y[..., 2]
        l0 = 1.0 - l1 - l2
    ok &= (l0 >= -EPS_BARY) & (l1 >= -EPS_BARY) & (l2 >= -EPS_BARY)
    return np.where(ok, t, np.nan)


def line_triangle_intersect(line: Line3, facet: Facet, vertices) -> float | None:
    """Parameter ``t`` where ``line`` pierces ``facet``, or None.

    Lines parallel to the facet plane never hit. Points on the triangle
    boundary (within ``EPS_BARY`` in barycentric terms) are hits.
    """
    vertices = np.asarray(vertices, dtype=np.float64)
    a, b, c = vertices[facet.v0], vertices[facet.v1], vertices[facet.v2]
    n = np.asarray(facet.n, dtype=np.float64)
    nn = np.linalg.norm(n)
    K, k0 = facet_kernel(a, b, c, n / nn, facet.d / nn)
    t = hit_parameters(K, k0, line.anchor, line.dir)
    return None if np.isnan(t) else float(t)


@dataclass(frozen=True, eq=False)
class ConvexPolyhedron:
    """Closed convex triangle mesh with outward unit facet normals.

    Build instances through :func:`validate_convex`; the constructor does not
    re-check the invariants.
    """

    vertices: np.ndarray  # (V, 3) float64
    faces: np.ndarray  # (N, 3) int64, counter-clockwise seen from outside
    normals: np.ndarray  # (N, 3) unit outward normals
    offsets: np.ndarray  # (N,) plane offsets, n.x + d = 0

    @property
    def n_facets(self) -> int:
        return len(self.faces)

    N = n_facets

    @property
    def facets(self) -> list[Facet]:
        return [self.facet(i) for i in range(self.n_facets)]

    def facet(self, i: int) -> Facet:
        f = self.faces[i]
        return Facet(int(f[0]), int(f[1]), int(f[2]), self.normals[i].copy(), float(self.offsets[i]))

    @cached_property
    def centroid(self) -> np.ndarray:
        return self.vertices[np.unique(self.faces)].mean(axis=0)

    @cached_property
    def radius(self) -> float:
        """Largest vertex distance from :attr:`centroid`."""
        return float(np.max(np.linalg.norm(self.vertices - self.centroid, axis=1)))

    @cached_property
    def kernel(self) -> np.ndarray:
        """``(N, 4, 3)`` stack of :func:`facet_kernel` rows; last row is ``k0``."""
        tri = self.vertices[self.faces]
        K, k0 = facet_kernel(tri[:, 0], tri[:, 1], tri[:, 2], self.normals, self.offsets)
        return np.concatenate([K, k0[:, None, :]], axis=1)

    def hit_parameters(self, anchors, dirs, facet_ids=None) -> np.ndarray:
        """Vectorised :func:`line_triangle_intersect` over (line, facet) pairs.

        With ``facet_ids`` None the line(s) are tested against every facet.
        """
        ker = self.kernel if facet_ids is None else np.take(self.kernel, facet_ids, axis=0)
        return hit_parameters(ker[..., :3, :], ker[..., 3, :], anchors, dirs)


def _edge_counts(faces: np.ndarray):
    edges = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    edges.sort(axis=1)
    uniq, counts = np.unique(edges, axis=0, return_counts=True)
    return uniq, counts


def validate_convex(vertices, facets) -> ConvexPolyhedron:
    """Check a triangle mesh for closedness and convexity and orient it outward.

    Facets whose winding points inward are flipped. Raises
    :class:`DegenerateFacetError`, :class:`OpenSurfaceError` or
    :class:`NonConvexError` on invalid input.
    """
    verts = np.array(vertices, dtype=np.float64)
    faces = np.array(facets, dtype=np.int64)
    if verts.ndim != 2 or verts.shape[1] != 3 or len(verts) < 4:
        raise ValueError("need at least 4 vertices of shape (V, 3)")
    if faces.ndim != 2 or faces.shape[1] != 3 or len(faces) < 4:
        raise ValueError("need at least 4 triangular facets of shape (N, 3)")
    if not np.all(np.isfinite(verts)):
        raise ValueError("vertex coordinates must be finite")
    if faces.min() < 0 or faces.max() >= len(verts):
        raise ValueError("facet references a vertex index out of range")

    repeated = (faces[:, 0] == faces[:, 1]) | (faces[:, 1] == faces[:, 2]) | (faces[:, 0] == faces[:, 2])
    if repeated.any():
        raise DegenerateFacetError(f"facet {int(np.argmax(repeated))} repeats a vertex")
    tri = verts[faces]
    e1 = tri[:, 1] - tri[:, 0]
    e2 = tri[:, 2] - tri[:, 0]
    nr = np.cross(e1, e2)
    area = 0.5 * np.linalg.norm(nr, axis=1)
    longest2 = np.max(np.stack([
        np.einsum("ij,ij->i", e1, e1),
        np.einsum("ij,ij->i", e2, e2),
        np.einsum("ij,ij->i", tri[:, 2] - tri[:, 1], tri[:, 2] - tri[:, 1]),
    ]), axis=0)
    flat = area <= EPS_AREA * longest2
    if flat.any():
        raise DegenerateFacetError(f"facet {int(np.argmax(flat))} has (near) zero area")

    edges, counts = _edge_counts(faces)
    if np.any(counts != 2):
        bad = edges[np.argmax(counts != 2)]
        raise OpenSurfaceError(
            f"edge ({bad[0]}, {bad[1]}) is shared by {counts[np.argmax(counts != 2)]} facets, expected 2")
    used = np.unique(faces)
    euler = len(used) - len(edges) + len(faces)
    if euler != 2:
        raise OpenSurfaceError(f"Euler characteristic is {euler}, expected 2 for a closed surface")

    centroid = verts[used].mean(axis=0)
    radius = float(np.max(np.linalg.norm(verts - centroid, axis=1)))
    slack = EPS_CONVEX * radius
    normals = nr / np.linalg.norm(nr, axis=1)[:, None]
    side = np.einsum("ij,ij->i", normals, centroid - tri[:, 0])
    if np.any(np.abs(side) <= slack):
        k = int(np.argmax(np.abs(side) <= slack))
        raise NonConvexError(f"centroid lies on the plane of facet {k}; polyhedron is flat")
    inward = side > 0
    faces[inward] = faces[inward][:, ::-1]
    normals[inward] *= -1.0
    offsets = -np.einsum("ij,ij->i", normals, verts[faces[:, 0]])

    # every vertex on or behind every facet plane
    chunk = max(1, 2_000_000 // len(verts))
    for lo in range(0, len(faces), chunk):
        dist = normals[lo:lo + chunk] @ verts.T + offsets[lo:lo + chunk, None]
        if dist.max() > slack:
            f, v = np.unravel_index(int(np.argmax(dist)), dist.shape)
            raise NonConvexError(
                f"vertex {v} lies {dist[f, v]:.3g} outside the plane of facet {lo + f}")

    for arr in (verts, faces, normals, offsets):
        arr.setflags(write=False)
    return ConvexPolyhedron(verts, faces, normals, offsets)
