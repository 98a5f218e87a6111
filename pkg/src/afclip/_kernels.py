"""Compiled inner loop for batched queries.

For each line the two AFL rows are AND-ed word by word and every surviving
facet goes straight through the exact line/facet test, keeping only the
running minimum and maximum hit parameter. Nothing proportional to the
candidate count is materialised.
"""
import numba as nb
import numpy as np

from .geom import EPS_BARY, EPS_PARALLEL

# de Bruijn sequence for 64-bit trailing-zero counts
_DEBRUIJN = np.uint64(0x03F79D71B4CB0A89)
_DEBRUIJN_POS = np.array([
    0, 1, 48, 2, 57, 49, 28, 3, 61, 58, 50, 42, 38, 29, 17, 4,
    62, 55, 59, 36, 53, 51, 43, 22, 45, 39, 33, 30, 24, 18, 12, 5,
    63, 47, 56, 27, 60, 41, 37, 16, 54, 35, 52, 21, 44, 32, 23, 11,
    46, 26, 40, 15, 34, 20, 31, 10, 25, 14, 19, 9, 13, 8, 7, 6,
], dtype=np.int64)


@nb.njit(cache=True, nogil=True)
def clip_rows(table, rows, kernel, anchors, dirs, t_in, t_out, entry, exit_, omega):
    """Fill per-line extreme hit parameters and candidate counts.

    ``rows`` is ``(L, 2)`` (negative: no candidates), ``kernel`` the
    ``(N, 4, 3)`` facet kernel of the polyhedron. Lines without a hit keep
    ``entry = -1``. Facets are visited in ascending id, so ties resolve to the
    lowest id.
    """
    n_words = table.shape[1]
    one = np.uint64(1)
    shift = np.uint64(58)
    for i in range(rows.shape[0]):
        r1 = rows[i, 0]
        r2 = rows[i, 1]
        omega[i] = 0
        entry[i] = -1
        exit_[i] = -1
        if r1 < 0 or r2 < 0:
            continue
        ax, ay, az = anchors[i, 0], anchors[i, 1], anchors[i, 2]
        sx, sy, sz = dirs[i, 0], dirs[i, 1], dirs[i, 2]
        par = EPS_PARALLEL * np.sqrt(sx * sx + sy * sy + sz * sz)
        lo = np.inf
        hi = -np.inf
        cnt = 0
        for w in range(n_words):
            x = table[r1, w] & table[r2, w]
            while x != 0:
                low = x & (~x + one)
                f = w * 64 + _DEBRUIJN_POS[(low * _DEBRUIJN) >> shift]
                x ^= low
                cnt += 1
                k = kernel[f]
                ns = k[0, 0] * sx + k[0, 1] * sy + k[0, 2] * sz
                if not abs(ns) > par:
                    continue
                t = -(k[0, 0] * ax + k[0, 1] * ay + k[0, 2] * az + k[3, 0]) / ns
                l1 = (k[1, 0] * ax + k[1, 1] * ay + k[1, 2] * az + k[3, 1]) + t * (
                    k[1, 0] * sx + k[1, 1] * sy + k[1, 2] * sz)
                l2 = (k[2, 0] * ax + k[2, 1] * ay + k[2, 2] * az + k[3, 2]) + t * (
                    k[2, 0] * sx + k[2, 1] * sy + k[2, 2] * sz)
                if l1 < -EPS_BARY or l2 < -EPS_BARY or 1.0 - l1 - l2 < -EPS_BARY:
                    continue
                if t < lo:
                    lo = t
                    entry[i] = f
                if t > hi:
                    hi = t
                    exit_[i] = f
        omega[i] = cnt
        t_in[i] = lo
        t_out[i] = hi
