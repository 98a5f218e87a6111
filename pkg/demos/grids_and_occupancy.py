"""How finer dual-space grids shrink the facet lists a query has to look at."""
import numpy as np
import matplotlib.pyplot as plt

from afclip import GridSpec, clip_lines, preprocess
from afclip.benchmarks import gen_random_convex, n_points_for, random_lines

poly = gen_random_convex(n_points_for(1024), seed=3)
anchors, dirs = random_lines(20000, 2.0, seed=4)

sizes = [8, 16, 32, 64, 128]
occupancy, cand = [], []
for k in sizes:
    prep = preprocess(poly, GridSpec(k, k))
    occupancy.append(np.mean([g.mean_bits_per_cell() for g in prep.grids]))
    batch, st = clip_lines(prep, anchors, dirs)
    hit = batch.kind != 0
    cand.append(np.median(st.omega[hit]))
    print(f"{k:4d}x{k:<4d} facets/cell {occupancy[-1]:7.1f}   median candidates per hitting line "
          f"{cand[-1]:5.1f}   hits {hit.mean():.0%}")

fig, ax = plt.subplots()
ax.loglog(sizes, occupancy, "o-", label="facets per cell")
ax.loglog(sizes, cand, "s-", label="median candidates after AND")
ax.set_xlabel("subdivisions per axis")
ax.set_title(f"{poly.n_facets} facets")
ax.legend()
fig.savefig("grids_and_occupancy.png", dpi=120)
print("wrote grids_and_occupancy.png")
