"""Clipping a few lines against the unit cube, and what the query touches."""
import numpy as np

from afclip import GridSpec, Line3, Mode, clip_line, clip_line_bruteforce, preprocess, validate_convex

# unit cube, two triangles per face, outward orientation
V = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
              [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]], float)
quads = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (2, 3, 7, 6), (1, 2, 6, 5), (0, 4, 7, 3)]
F = [tri for a, b, c, d in quads for tri in ((a, b, c), (a, c, d))]

cube = validate_convex(V, F)
prep = preprocess(cube, GridSpec(8, 8))
print(f"{cube.n_facets} facets, six 8x8 tables")

lines = {
    "straight through x": Line3([-1, 0.5, 0.5], [1, 0, 0]),
    "space diagonal": Line3.through([0, 0, 0], [1, 1, 1]),
    "grazing an edge": Line3([0.5, -1, 0], [0, 1, 0]),
    "touching a corner": Line3([1, 1, 1], [1, -1, 0]),
    "clear miss": Line3([2, 2, 2], [0, 0, 1]),
}
for name, line in lines.items():
    res, st = clip_line(prep, line)
    ref = clip_line_bruteforce(cube, line)
    span = "" if not res else f" t=[{res.t_in:.3f}, {res.t_out:.3f}]"
    print(f"{name:20s} {res.kind.name:8s}{span:22s} "
          f"cells {st.omega1:2d} & {st.omega2:2d} -> {st.omega:2d} tested   brute force: {ref.kind.name}")

# segment mode keeps t inside [0, 1]; a segment starting inside the cube has no entry facet
res, _ = clip_line(prep, Line3([0.5, 0.5, 0.5], [2, 0, 0]), Mode.SEGMENT)
print("segment from the centre:", res.kind.name, res.t_in, res.t_out, "entry facet", res.entry_facet,
      "exit facet", res.exit_facet)
