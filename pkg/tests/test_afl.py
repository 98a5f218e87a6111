import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from afclip import FacetBitset, GridSpec, build_grid, intersect, iter_ones, preprocess
from afclip.afl import GRID_ORDER, auto_specs, grid_number, pack_rows, projection_frame, unpack_rows
from afclip.errors import LengthMismatchError
from afclip.oracle import line_stabs_triangle_2d, zone_interference_sampled
from afclip.projection import Axis, COORDS
from afclip.semidual import Form, cell_bounds, cell_index_batch, suggest_grid

from conftest import random_poly


def bs(ids, n=100):
    return FacetBitset.from_indices(ids, n)


def test_intersect_examples():
    assert list(intersect(bs({1, 3, 5}), bs({3, 5, 7}))) == [3, 5]
    b = bs({0, 17, 99})
    assert intersect(b, FacetBitset.full(100)) == b
    assert list(b & bs(())) == []
    with pytest.raises(LengthMismatchError):
        intersect(bs({1}, 10), bs({1}, 11))


def test_iter_ones_examples():
    assert list(iter_ones(bs((), 5))) == []
    assert list(iter_ones(bs({0, 63, 64}, 130))) == [0, 63, 64]
    rng = np.random.default_rng(0)
    ids = rng.choice(1000, 100, replace=False)
    b = bs(ids, 1000)
    mask = [i in b for i in range(1000)]
    assert list(iter_ones(b)) == [i for i in range(1000) if mask[i]]
    assert len(b) == 100


@settings(max_examples=1000)
@given(st.integers(1, 300).flatmap(lambda n: st.tuples(
    st.just(n), st.sets(st.integers(0, n - 1)), st.sets(st.integers(0, n - 1)))))
def test_intersect_matches_set_oracle(case):
    n, a, b = case
    got = intersect(bs(a, n), bs(b, n))
    assert list(got) == sorted(a & b)
    # padding bits beyond n stay clear
    assert len(unpack_rows(got.words, len(got.words) * 64)[n:].nonzero()[0]) == 0


def test_pack_roundtrip():
    rng = np.random.default_rng(2)
    m = rng.random((7, 5, 131)) < 0.3
    assert np.array_equal(unpack_rows(pack_rows(m), 131), m)


def test_grid_numbering():
    assert [grid_number(ax, kind) for ax, kind in GRID_ORDER] == [1, 2, 3, 4, 5, 6]
    assert GRID_ORDER[0] == (Axis.X, Form.KQ) and GRID_ORDER[5] == (Axis.Z, Form.MP)


def test_single_cell_grid_holds_every_cube_facet(cube):
    g = build_grid(cube, Axis.Z, Form.KQ, GridSpec(1, 1))
    assert list(g.cell(0, 0)) == list(range(12))
    # sampling the one cell finds a stabbing line for every facet
    frame, pts = projection_frame(cube, Axis.Z)
    tri = pts[cube.faces] - np.asarray(frame.center)
    cell = cell_bounds(0, 0, frame, GridSpec(1, 1))
    assert all(zone_interference_sampled(t, cell, Form.KQ) for t in tri)


def test_refined_tetrahedron_cells_within_single_cell(tetra):
    for ax, kind in GRID_ORDER:
        top = build_grid(tetra, ax, kind, GridSpec(1, 1)).cell(0, 0)
        fine = build_grid(tetra, ax, kind, GridSpec(8, 8))
        for ii in range(8):
            for jj in range(8):
                assert fine.cell(ii, jj).issubset(top)


def test_cells_beyond_the_hull_are_empty(cube):
    g = build_grid(cube, Axis.Z, Form.KQ, GridSpec(4, 64))
    # offsets span [-2a, 2a]; the top rows hold lines passing above the square
    assert len(g.cell(63, 2)) == 0 and len(g.cell(0, 1)) == 0
    assert g.bits_per_cell().max() == 12


def test_grid_matches_exact_predicate():
    poly = random_poly(64, 3)
    spec = GridSpec(6, 9)
    for ax, kind in GRID_ORDER:
        g = build_grid(poly, ax, kind, spec, margin=0.0)
        frame, pts = projection_frame(poly, ax)
        tri = pts[poly.faces] - np.asarray(frame.center)
        from afclip.semidual import zone_interferes

        for ii in range(spec.n_offset):
            for jj in range(spec.n_slope):
                cell = cell_bounds(ii, jj, frame, spec)
                want = [k for k in range(poly.n_facets) if zone_interferes(tri[k], cell, kind)]
                assert list(g.cell(ii, jj)) == want


def test_conservative_cover():
    """Every facet a projected plane-line stabs is in that line's cell."""
    poly = random_poly(128, 4)
    spec = GridSpec(32, 32)
    rng = np.random.default_rng(9)
    for ax, kind in GRID_ORDER:
        g = build_grid(poly, ax, kind, spec)
        frame, pts = projection_frame(poly, ax)
        tri = pts[poly.faces] - np.asarray(frame.center)
        n = 100_000
        slope = rng.uniform(-1, 1, n)
        off = rng.uniform(-1.2, 1.2, n) * frame.a
        ii, jj = cell_index_batch(slope, off, frame.a, spec.n_slope, spec.n_offset)
        u, v = (tri[..., 0], tri[..., 1]) if kind == Form.KQ else (tri[..., 1], tri[..., 0])
        # exact stabbing of every facet by every line, vectorised sign test
        for lo in range(0, n, 2000):
            s, o = slope[lo:lo + 2000, None, None], off[lo:lo + 2000, None, None]
            f = v[None] - s * u[None] - o
            stab = ~(np.all(f > 0, -1) | np.all(f < 0, -1))
            have = unpack_rows(g.cells[ii[lo:lo + 2000], jj[lo:lo + 2000]], poly.n_facets)
            assert not np.any(stab & ~have)
        # spot check against the segment-based oracle
        for t in range(200):
            for k in rng.choice(poly.n_facets, 5):
                if line_stabs_triangle_2d(tri[k], slope[t], off[t], kind):
                    assert k in g.cell(ii[t], jj[t])


def test_preprocess_cube_uniform(cube):
    prep = preprocess(cube, GridSpec(16, 16))
    assert len(prep.grids) == 6
    for j in range(1, 7):
        g = prep.grid(j)
        assert g.cells.shape == (16, 16, 1)
        assert grid_number(g.proj_axis, g.kind) == j
        assert np.shares_memory(g.cells, prep.table)
    assert prep.table.shape == (6 * 256, 1)
    assert np.array_equal(prep.cell_counts, np.bitwise_count(prep.table).ravel())


def test_preprocess_auto(tetra, cube):
    prep = preprocess(tetra)
    assert all(g.spec.n_slope > 0 and g.spec.n_offset > 0 for g in prep.grids)
    specs = auto_specs(cube)
    for (ax, kind), spec in zip(GRID_ORDER, specs):
        pts = cube.vertices[:, list(COORDS[ax])]
        from afclip.afl import unique_edges

        assert spec == suggest_grid(pts, unique_edges(cube.faces), kind)
    assert [g.spec for g in preprocess(cube).grids] == specs


def test_preprocess_parallel_identical():
    poly = random_poly(256, 5)
    assert preprocess(poly, GridSpec(20, 12), parallel=True) == preprocess(poly, GridSpec(20, 12))


def test_preprocess_rejects_wrong_spec_count(cube):
    with pytest.raises(ValueError):
        preprocess(cube, [GridSpec(4, 4)] * 5)


def test_occupancy_falls_with_resolution():
    poly = random_poly(320, 6)
    means = [np.mean([g.mean_bits_per_cell() for g in preprocess(poly, GridSpec(k, k)).grids])
             for k in (8, 16, 32, 64)]
    assert all(b <= a for a, b in zip(means, means[1:]))
    assert means[-1] < 0.1 * poly.n_facets


@settings(max_examples=20, deadline=None)
@given(st.integers(4, 120), st.integers(0, 1000), st.integers(1, 12), st.integers(1, 12))
def test_refinement_monotone(n_points, seed, ns, no):
    from afclip.benchmarks import gen_random_convex

    poly = gen_random_convex(n_points, seed)
    coarse = preprocess(poly, GridSpec(ns, no))
    fine = preprocess(poly, GridSpec(2 * ns, 2 * no))
    for gc, gf in zip(coarse.grids, fine.grids):
        cover = np.repeat(np.repeat(gc.cells, 2, axis=0), 2, axis=1)
        assert not np.any(gf.cells & ~cover)
