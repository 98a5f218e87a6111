"""Clip results, single and batched, plus the shared interval classification."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

# Two parameters closer than this (scaled by 1 + |t|) describe a single point.
T_TOL = 1e-9


class ClipKind(enum.IntEnum):
    EMPTY = 0
    POINT = 1
    SEGMENT = 2


class Mode(str, enum.Enum):
    LINE = "line"
    SEGMENT = "segment"


def as_mode(mode) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(str(mode).lower())


@dataclass(frozen=True)
class ClipResult:
    """Part of a line inside a polyhedron, as a parameter interval.

    ``entry_facet``/``exit_facet`` are None when the corresponding end comes
    from the ``[0, 1]`` segment bound rather than from a facet.
    """

    kind: ClipKind
    t_in: float | None = None
    t_out: float | None = None
    entry_facet: int | None = None
    exit_facet: int | None = None
    anchor: np.ndarray | None = None
    dir: np.ndarray | None = None

    @classmethod
    def empty(cls) -> "ClipResult":
        return cls(ClipKind.EMPTY)

    @property
    def points(self):
        if self.kind == ClipKind.EMPTY:
            return ()
        return (self.anchor + self.t_in * self.dir, self.anchor + self.t_out * self.dir)

    def __bool__(self):
        return self.kind != ClipKind.EMPTY


@dataclass(frozen=True)
class ClipBatch:
    """Column-wise results for many lines. Facet id -1 means "none"."""

    kind: np.ndarray  # int8 ClipKind codes
    t_in: np.ndarray
    t_out: np.ndarray
    entry_facet: np.ndarray
    exit_facet: np.ndarray

    def __len__(self):
        return len(self.kind)

    def result(self, i: int, anchor=None, dir=None) -> ClipResult:
        kind = ClipKind(int(self.kind[i]))
        if kind == ClipKind.EMPTY:
            return ClipResult.empty()
        ent, ext = int(self.entry_facet[i]), int(self.exit_facet[i])
        return ClipResult(kind, float(self.t_in[i]), float(self.t_out[i]),
                          None if ent < 0 else ent, None if ext < 0 else ext, anchor, dir)


def classify(t_in, t_out, entry, exit_, mode, valid=None) -> ClipBatch:
    """Turn raw parameter intervals into a :class:`ClipBatch`.

    ``valid`` marks rows that produced an interval at all; invalid rows are
    empty. In segment mode the interval is first cut to ``[0, 1]``.
    """
    t_in = np.array(t_in, dtype=np.float64)
    t_out = np.array(t_out, dtype=np.float64)
    entry = np.array(entry, dtype=np.int64)
    exit_ = np.array(exit_, dtype=np.int64)
    valid = np.ones(len(t_in), bool) if valid is None else np.array(valid, bool)
    if as_mode(mode) == Mode.SEGMENT:
        cut = valid & (t_in < 0.0)
        t_in[cut] = 0.0
        entry[cut] = -1
        cut = valid & (t_out > 1.0)
        t_out[cut] = 1.0
        exit_[cut] = -1
    with np.errstate(invalid="ignore"):
        gap = t_out - t_in
        tol = T_TOL * (1.0 + np.abs(t_in))
        point = valid & (np.abs(gap) <= tol)
        segment = valid & (gap > tol)
        mid = 0.5 * (t_in + t_out)
    kind = np.where(segment, ClipKind.SEGMENT, np.where(point, ClipKind.POINT, ClipKind.EMPTY)).astype(np.int8)
    t_in = np.where(point, mid, t_in)
    t_out = np.where(point, mid, t_out)
    empty = kind == ClipKind.EMPTY
    t_in[empty] = np.nan
    t_out[empty] = np.nan
    entry[empty] = -1
    exit_[empty] = -1
    return ClipBatch(kind, t_in, t_out, entry, exit_)


def results_agree(r1: ClipResult, r2: ClipResult, rtol: float = T_TOL) -> bool:
    """Same kind and parameters within ``rtol * (1 + |t|)``.

    A point and a segment no longer than the tolerance also agree.
    """
    k1, k2 = r1.kind, r2.kind
    if k1 == ClipKind.EMPTY or k2 == ClipKind.EMPTY:
        return k1 == k2

    def close(a, b):
        return abs(a - b) <= rtol * (1.0 + max(abs(a), abs(b)))

    if k1 != k2:
        for r in (r1, r2):
            if r.kind == ClipKind.SEGMENT and not close(r.t_in, r.t_out):
                return False
    return close(r1.t_in, r2.t_in) and close(r1.t_out, r2.t_out)


def batches_agree(b1: ClipBatch, b2: ClipBatch, rtol: float = T_TOL) -> np.ndarray:
    """Row-wise vectorised :func:`results_agree`."""
    e1 = b1.kind == ClipKind.EMPTY
    e2 = b2.kind == ClipKind.EMPTY
    scale = 1.0 + np.maximum(np.abs(np.nan_to_num(b1.t_in)), np.abs(np.nan_to_num(b2.t_in)))
    scale_out = 1.0 + np.maximum(np.abs(np.nan_to_num(b1.t_out)), np.abs(np.nan_to_num(b2.t_out)))
    with np.errstate(invalid="ignore"):
        close = (np.abs(b1.t_in - b2.t_in) <= rtol * scale) & (np.abs(b1.t_out - b2.t_out) <= rtol * scale_out)
        short1 = (b1.kind != ClipKind.SEGMENT) | (b1.t_out - b1.t_in <= rtol * (1.0 + np.abs(b1.t_in)))
        short2 = (b2.kind != ClipKind.SEGMENT) | (b2.t_out - b2.t_in <= rtol * (1.0 + np.abs(b2.t_in)))
    same_kind = b1.kind == b2.kind
    both_full = ~e1 & ~e2 & close & (same_kind | (short1 & short2))
    return (e1 & e2) | both_full
