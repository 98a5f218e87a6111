"""Operation-count cost model, random test polyhedra and timing runs.

The cost model weighs counts of (assign, compare, add/sub, multiply, divide)
by per-operation timings. Two per-facet Cyrus-Beck constants are provided:
the published 777 and the 678 that follows from the published count tuple
and timing vector.
"""
from __future__ import annotations

import csv
import time
from dataclasses import astuple, dataclass, fields

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .afl import preprocess
from .clipper import clip_lines
from .cyrus_beck import clip_lines_cb
from .errors import DegenerateHullError, GeometryError
from .geom import ConvexPolyhedron, validate_convex
from .semidual import GridSpec

PUBLISHED_TIMINGS = (33.0, 50.0, 16.0, 20.0, 114.0)
CB_OPS = (6.0, 3.0, 6.0, 6.0, 1.0)
O1_OPS = (18.0, 3.0, 8.0, 8.0, 4.0)
PUBLISHED_CB_PER_FACET = 777.0


@dataclass(frozen=True)
class CostModel:
    timings: tuple = PUBLISHED_TIMINGS
    cb_tuple: tuple = CB_OPS
    o1_tuple: tuple = O1_OPS
    cb_per_facet_override: float | None = None

    def __post_init__(self):
        for name in ("timings", "cb_tuple", "o1_tuple"):
            vals = tuple(float(x) for x in getattr(self, name))
            if len(vals) != 5 or min(vals) < 0:
                raise ValueError(f"{name} must be five non-negative numbers")
            object.__setattr__(self, name, vals)

    @classmethod
    def published(cls) -> "CostModel":
        """Published constants: 777 per facet, giving 3042 per query."""
        return cls(cb_per_facet_override=PUBLISHED_CB_PER_FACET)

    @classmethod
    def derived(cls) -> "CostModel":
        """Per-facet cost recomputed from the count tuple (678)."""
        return cls()

    @property
    def cb_dot(self) -> float:
        return float(np.dot(self.cb_tuple, self.timings))

    @property
    def cb_per_facet(self) -> float:
        return self.cb_dot if self.cb_per_facet_override is None else self.cb_per_facet_override


def cost_cb(model: CostModel, n: int) -> float:
    if n < 1:
        raise ValueError("N must be >= 1")
    return model.cb_per_facet * n


def cost_o1(model: CostModel) -> float:
    """Fixed query overhead plus a two-facet detail test."""
    return float(np.dot(model.o1_tuple, model.timings)) + 2.0 * model.cb_per_facet


def efficiency_ratio(model: CostModel, n: int) -> float:
    return cost_cb(model, n) / cost_o1(model)


def n_points_for(n_facets: int) -> int:
    """Sphere sample size whose hull has ``n_facets`` triangles (``2n - 4``)."""
    if n_facets < 4 or n_facets % 2:
        raise ValueError("a triangulated sphere-like hull has an even facet count >= 4")
    return (n_facets + 4) // 2


def gen_random_convex(n_points: int, seed=0) -> ConvexPolyhedron:
    """Hull of ``n_points`` random points on the unit sphere.

    Points in general position all end up on the hull, giving
    ``2 * n_points - 4`` triangles. Degenerate samples are re-drawn with a
    small perturbation up to three times.
    """
    if n_points < 4:
        raise ValueError("need at least 4 points")
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n_points, 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    last = None
    for _ in range(4):
        try:
            hull = ConvexHull(pts)
            if len(hull.vertices) != n_points:
                raise DegenerateHullError(f"only {len(hull.vertices)} of {n_points} points on the hull")
            return validate_convex(pts, hull.simplices)
        except (QhullError, GeometryError) as exc:
            last = exc
            pts = pts + 1e-6 * rng.normal(size=pts.shape)
            pts /= np.linalg.norm(pts, axis=1)[:, None]
    raise DegenerateHullError(f"could not build a hull of {n_points} points: {last}")


def random_lines(n: int, radius: float, seed=0, center=None):
    """Lines through pairs of uniform random points on a sphere.

    Returns ``(anchors, dirs)``; the second point is ``anchor + dir``.
    """
    rng = np.random.default_rng(seed)
    p = rng.normal(size=(2, n, 3))
    p /= np.linalg.norm(p, axis=2)[..., None]
    p *= radius
    if center is not None:
        p += np.asarray(center)
    return p[0], p[1] - p[0]


@dataclass(frozen=True)
class BenchRow:
    n_facets: int
    grid_k: int
    grid_q: int
    omega_mean: float
    omega_median: float
    omega_max: int
    omega1_mean: float
    preprocess_s: float
    query_o1_ns: float
    query_cb_ns: float
    seed: int

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def _median_time(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return float(np.median(times))


def time_queries(prep, anchors, dirs, repeats: int = 5) -> tuple[float, float]:
    """Median batch wall time per query (ns) for the AFL and CB clippers."""
    n = len(anchors)
    t_o1 = _median_time(lambda: clip_lines(prep, anchors, dirs), repeats)
    t_cb = _median_time(lambda: clip_lines_cb(prep.polyhedron, anchors, dirs), repeats)
    return 1e9 * t_o1 / n, 1e9 * t_cb / n


def run_bench(n_list=(4, 128, 1024), grids=((8, 8), (32, 32), (128, 128)), lines: int = 1000,
              seed: int = 0, repeats: int = 5, parallel: bool = False, timing: bool = True,
              progress=None) -> list[BenchRow]:
    """One :class:`BenchRow` per (facet count, grid) pair.

    Grids are ``(n_slope, n_offset)`` pairs or :class:`GridSpec`. Lines run
    through random point pairs on a sphere of twice the hull radius; about a
    quarter of them meet the hull, and the candidate-set columns describe
    only those.
    """
    rows = []
    for n in n_list:
        poly = gen_random_convex(n_points_for(n), seed=seed)
        anchors, dirs = random_lines(lines, 2.0 * poly.radius, seed=seed + 1, center=poly.centroid)
        for grid in grids:
            spec = grid if isinstance(grid, GridSpec) else GridSpec(*grid)
            t0 = time.perf_counter()
            prep = preprocess(poly, spec, parallel=parallel)
            t_pre = time.perf_counter() - t0
            batch, stats = clip_lines(prep, anchors, dirs)
            hits = batch.kind != 0
            if timing:
                q_o1, q_cb = time_queries(prep, anchors, dirs, repeats)
            else:
                q_o1 = q_cb = float("nan")
            # candidate statistics over lines that meet the polyhedron
            om = stats.omega[hits] if hits.any() else np.zeros(1, np.int64)
            rows.append(BenchRow(
                n_facets=poly.n_facets, grid_k=spec.n_slope, grid_q=spec.n_offset,
                omega_mean=float(om.mean()), omega_median=float(np.median(om)), omega_max=int(om.max()),
                omega1_mean=float(stats.omega1[hits].mean()) if hits.any() else 0.0, preprocess_s=t_pre,
                query_o1_ns=q_o1, query_cb_ns=q_cb, seed=seed))
            if progress:
                progress(rows[-1])
    return rows


def write_csv(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BenchRow.header())
        for r in rows:
            w.writerow(astuple(r))


def write_svg(rows, path):
    """Time vs N, time vs grid, and AFL occupancy vs grid, one panel each."""
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 3, figsize=(15, 4.5))
    grids = sorted({(r.grid_k, r.grid_q) for r in rows})
    ns = sorted({r.n_facets for r in rows})
    for g in grids:
        sub = sorted((r for r in rows if (r.grid_k, r.grid_q) == g), key=lambda r: r.n_facets)
        x = [r.n_facets for r in sub]
        axes[0].plot(x, [r.query_o1_ns for r in sub], "o-", label=f"AFL {g[0]}x{g[1]}")
    sub = sorted({r.n_facets: r for r in rows}.values(), key=lambda r: r.n_facets)
    axes[0].plot([r.n_facets for r in sub], [r.query_cb_ns for r in sub], "k--", label="Cyrus-Beck")
    axes[0].set(xscale="log", yscale="log", xlabel="facets N", ylabel="ns / query", title="query time vs N")
    for n in ns:
        sub = sorted((r for r in rows if r.n_facets == n), key=lambda r: r.grid_k * r.grid_q)
        cells = [r.grid_k * r.grid_q for r in sub]
        axes[1].plot(cells, [r.query_o1_ns for r in sub], "o-", label=f"N={n}")
        axes[2].plot(cells, [r.omega1_mean for r in sub], "o-", label=f"N={n}")
    axes[1].set(xscale="log", xlabel="cells per table", ylabel="ns / query", title="query time vs subdivision")
    axes[2].set(xscale="log", yscale="log", xlabel="cells per table", ylabel="mean facets per AFL cell",
                title="AFL occupancy vs subdivision")
    for ax in axes:
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
