"""Saving preprocessed grids, reading them back, and the operation-count model."""
import os
import tempfile

import numpy as np

from afclip import GridSpec, Line3, clip_line, load_cache, preprocess, save_cache, save_off
from afclip.benchmarks import CostModel, cost_cb, cost_o1, efficiency_ratio, gen_random_convex, n_points_for

poly = gen_random_convex(n_points_for(256), seed=7)
prep = preprocess(poly, GridSpec(32, 32))

with tempfile.TemporaryDirectory() as tmp:
    path = os.path.join(tmp, "hull.afl")
    save_cache(prep, path)
    back = load_cache(path)
    print(f"cache {os.path.getsize(path)} bytes, identical after reload: {back == prep}")
    line = Line3([-3, 0.1, 0.2], [1, 0.05, -0.02])
    print("same clip:", clip_line(prep, line)[0].t_in == clip_line(back, line)[0].t_in)
    # the mesh itself, for the command line tool
    save_off(os.path.join(tmp, "hull.off"), poly.vertices, poly.faces)

for name, model in (("published constants", CostModel.published()), ("recomputed", CostModel.derived())):
    print(f"\n{name}: {model.cb_per_facet:.0f} per facet for Cyrus-Beck, {cost_o1(model):.0f} per grid query")
    for n in (4, 10, 100, 1000, 10000):
        print(f"  N={n:5d}  CB {cost_cb(model, n):9.0f}  ratio {efficiency_ratio(model, n):7.2f}")

# break-even facet count under each model
for model in (CostModel.published(), CostModel.derived()):
    print("break-even N:", int(np.ceil(cost_o1(model) / model.cb_per_facet)))
