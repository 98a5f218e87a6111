"""Grid clipper and Cyrus-Beck side by side: same answers, different scaling."""
import time

from afclip import GridSpec, clip_lines, clip_lines_cb, preprocess
from afclip.result import batches_agree
from afclip.benchmarks import gen_random_convex, n_points_for, random_lines

anchors, dirs = random_lines(10000, 2.0, seed=1)


def best_of(fn, n=5):
    ts = []
    for _ in range(n):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return min(ts)


print("   N   agree   grid us/line   CB us/line")
for n in (16, 128, 1024, 8192):
    poly = gen_random_convex(n_points_for(n), seed=n)
    prep = preprocess(poly, GridSpec(128, 128))
    ours, _ = clip_lines(prep, anchors, dirs)
    cb = clip_lines_cb(poly, anchors, dirs)
    ok = batches_agree(ours, cb).all()
    t_grid = best_of(lambda: clip_lines(prep, anchors, dirs)) / len(anchors) * 1e6
    t_cb = best_of(lambda: clip_lines_cb(poly, anchors, dirs), 3) / len(anchors) * 1e6
    print(f"{n:5d}   {str(ok):5s}   {t_grid:12.3f}   {t_cb:10.3f}")
