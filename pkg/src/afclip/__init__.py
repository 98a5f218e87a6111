"""Line clipping against convex polyhedra with precomputed dual-space
facet lists (expected constant work per query), plus a Cyrus-Beck baseline
and brute-force references."""
from .afl import (
    FacetBitset,
    PreprocessedPolyhedron,
    SemidualGrid,
    build_grid,
    intersect,
    iter_ones,
    preprocess,
)
from .clipper import QueryStats, clip_line, clip_lines, detail_e3_test
from .cyrus_beck import clip_line_cb, clip_lines_cb
from .errors import (
    AfclipError,
    CacheError,
    ChecksumMismatchError,
    DegenerateFacetError,
    DegenerateHullError,
    DegenerateProjectionError,
    GeometryError,
    LengthMismatchError,
    NonConvexError,
    NotAxisParallelError,
    OpenSurfaceError,
    ParseError,
    UnsupportedFormatError,
    VersionMismatchError,
    ZeroDirectionError,
)
from .geom import (
    ConvexPolyhedron,
    Facet,
    Line3,
    Plane,
    cross,
    line_triangle_intersect,
    plane_eval,
    validate_convex,
)
from .mesh_io import load_cache, load_off, save_cache, save_off
from .oracle import clip_line_bruteforce
from .result import ClipBatch, ClipKind, ClipResult, Mode
from .semidual import BoundingFrame, Form, GridSpec

__version__ = "0.1.0"

__all__ = [
    "AfclipError", "BoundingFrame", "CacheError", "ChecksumMismatchError", "ClipBatch", "ClipKind",
    "ClipResult", "ConvexPolyhedron", "DegenerateFacetError", "DegenerateHullError",
    "DegenerateProjectionError", "Facet", "FacetBitset", "Form", "GeometryError", "GridSpec",
    "LengthMismatchError", "Line3", "Mode", "NonConvexError", "NotAxisParallelError", "OpenSurfaceError",
    "ParseError", "Plane", "PreprocessedPolyhedron", "QueryStats", "SemidualGrid", "UnsupportedFormatError",
    "VersionMismatchError", "ZeroDirectionError", "build_grid", "clip_line", "clip_line_bruteforce",
    "clip_line_cb", "clip_lines", "clip_lines_cb", "cross", "detail_e3_test", "intersect", "iter_ones",
    "line_triangle_intersect", "load_cache", "load_off", "plane_eval", "preprocess", "save_cache",
    "save_off", "validate_convex",
]
