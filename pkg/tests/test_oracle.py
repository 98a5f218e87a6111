import numpy as np

from afclip import ClipKind, Line3, clip_line_bruteforce
from afclip.oracle import line_stabs_triangle_2d, zone_interference_sampled
from afclip.semidual import Form, zone_interferes

TRI = [(0, 0), (1, 0), (0, 1)]


def test_bruteforce_cube(cube):
    r = clip_line_bruteforce(cube, Line3([-1, 0.5, 0.5], [1, 0, 0]))
    assert (r.kind, r.t_in, r.t_out) == (ClipKind.SEGMENT, 1.0, 2.0)
    assert clip_line_bruteforce(cube, Line3([5, 5, 5], [1, 0, 0])).kind == ClipKind.EMPTY


def test_bruteforce_tetrahedron_apex(tetra):
    apex = tetra.vertices[0]
    # a direction perpendicular to the apex direction avoids the interior
    d = np.cross(apex, [0.3, -0.2, 1.0])
    r = clip_line_bruteforce(tetra, Line3(apex - d, d))
    assert r.kind == ClipKind.POINT
    assert np.allclose(r.points[0], apex)


def test_sampled_worked_examples():
    assert zone_interference_sampled(TRI, (-0.1, 0.1, 0.2, 0.4), Form.KQ)
    assert not zone_interference_sampled(TRI, (-0.1, 0.1, 2, 3), Form.KQ)


def test_sampled_collapsed_cell():
    assert zone_interference_sampled(TRI, (0, 0, 0.5, 0.5), Form.KQ)
    assert not zone_interference_sampled(TRI, (0, 0, 1.5, 1.5), Form.KQ)


def test_segment_oracle():
    assert line_stabs_triangle_2d(TRI, 0.0, 0.3, 0)
    assert not line_stabs_triangle_2d(TRI, 0.0, 1.3, 0)
    assert line_stabs_triangle_2d(TRI, 0.0, 0.3, 1)
    # collinear with an edge
    assert line_stabs_triangle_2d(TRI, 0.0, 0.0, 0)


def test_sampling_implies_exact():
    rng = np.random.default_rng(4)
    for _ in range(2000):
        tri = rng.uniform(-1, 1, (3, 2))
        s1, s2 = np.sort(rng.uniform(-1, 1, 2))
        o1, o2 = np.sort(rng.uniform(-2, 2, 2))
        kind = int(rng.integers(2))
        if zone_interference_sampled(tri, (s1, s2, o1, o2), kind, grid_density=16):
            assert zone_interferes(tri, (s1, s2, o1, o2), kind)
