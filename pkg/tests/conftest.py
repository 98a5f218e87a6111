import numpy as np
import pytest

from afclip import validate_convex
from afclip.benchmarks import gen_random_convex, n_points_for

CUBE_V = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
                   [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], dtype=float)
CUBE_QUADS = [[0, 3, 2, 1], [4, 5, 6, 7], [0, 1, 5, 4], [1, 2, 6, 5], [2, 3, 7, 6], [3, 0, 4, 7]]
CUBE_F = np.array([[q[0], q[m], q[m + 1]] for q in CUBE_QUADS for m in (1, 2)])

TET_V = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float)
TET_F = np.array([[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]])


@pytest.fixture(scope="session")
def cube():
    return validate_convex(CUBE_V, CUBE_F)


@pytest.fixture(scope="session")
def tetra():
    return validate_convex(TET_V, TET_F)


_polys = {}


def random_poly(n_facets, seed=0):
    key = (n_facets, seed)
    if key not in _polys:
        _polys[key] = gen_random_convex(n_points_for(n_facets), seed=seed)
    return _polys[key]


def facet_index(poly, normal):
    """Ids of facets whose outward normal is ``normal``."""
    return set(np.flatnonzero(np.all(np.isclose(poly.normals, normal), axis=1)).tolist())
