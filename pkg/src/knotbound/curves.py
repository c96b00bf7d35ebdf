"""Closed polygonal curves: distortion, torus-knot samples, and text I/O.

Curve files hold one vertex per line as ``x,y,z``; lines starting with
``#`` are comments and blank lines are ignored.  The curve closes from the
last vertex back to the first.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from knotbound.errors import CurveFormatError, DegenerateCurveError, DomainError

_ROW_BLOCK = 256


@dataclass(frozen=True)
class PolygonalCurve:
    """Closed polyline through ``points`` (an ``(n, 3)`` array)."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise DegenerateCurveError("points must be an (n, 3) array")
        if len(pts) < 3:
            raise DegenerateCurveError(f"a closed curve needs at least 3 vertices, got {len(pts)}")
        if not np.all(np.isfinite(pts)):
            raise DegenerateCurveError("vertex coordinates must be finite")
        seg = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        if np.any(seg == 0):
            i = int(np.flatnonzero(seg == 0)[0])
            raise DegenerateCurveError(f"vertices {i} and {(i + 1) % len(pts)} coincide")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        cum.setflags(write=False)
        object.__setattr__(self, "cum_len", cum)

    def __len__(self):
        return len(self.points)

    @property
    def closed(self) -> bool:
        return True

    @property
    def length(self) -> float:
        return float(self.cum_len[-1])


def _ratios(curve, rows):
    """Distortion ratios for vertex pairs ``(i, j)``, ``i`` in ``rows``, ``j > i``."""
    pts, cum = curve.points, curve.cum_len
    total = cum[-1]
    n = len(pts)
    i = rows[:, None]
    j = np.arange(n)[None, :]
    arc = np.abs(cum[j] - cum[i])
    arc = np.minimum(arc, total - arc)
    diff = pts[None, :, :] - pts[rows][:, None, :]
    chord = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    upper = j > i
    if np.any(upper & (chord == 0)):
        a, b = np.argwhere(upper & (chord == 0))[0]
        raise DegenerateCurveError(f"vertices {rows[a]} and {b} coincide")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(upper, arc / np.where(upper, chord, 1.0), -np.inf)
    return ratio


def pair_ratio(curve, i, j):
    """``min(arc, total - arc) / chord`` for one vertex pair."""
    i, j = sorted((int(i), int(j)))
    return float(_ratios(curve, np.array([i]))[0, j])


def _block_best(curve, start):
    rows = np.arange(start, min(start + _ROW_BLOCK, len(curve)))
    ratio = _ratios(curve, rows)
    # argmax returns the first maximum in row-major order: the smallest (i, j)
    k = int(np.argmax(ratio))
    r, c = divmod(k, ratio.shape[1])
    return float(ratio[r, c]), (int(rows[r]), int(c))


def polygonal_distortion(curve, workers=None):
    """Maximum over vertex pairs of shorter arc length over chord length.

    This lower-bounds the distortion of any smooth curve through the same
    vertices in the same order.  Returns ``(value, (i, j))`` with ``i < j``;
    ties go to the lexicographically smallest pair.  O(n^2).
    """
    if not isinstance(curve, PolygonalCurve):
        curve = PolygonalCurve(np.asarray(curve, dtype=float))
    starts = list(range(0, len(curve) - 1, _ROW_BLOCK))
    if workers == 1 or len(starts) < 2:
        blocks = [_block_best(curve, s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda s: _block_best(curve, s), starts))
    best = blocks[0]
    for cand in blocks[1:]:
        if cand[0] > best[0]:
            best = cand
    return best


def torus_knot(p_wind, q_wind, R_major=2.0, r_minor=1.0, n=1024):
    """``n`` uniform samples of the ``(p, q)`` torus knot.

    The curve winds ``p_wind`` times around the symmetry axis and ``q_wind``
    times around the tube.
    """
    p_wind, q_wind, n = int(p_wind), int(q_wind), int(n)
    if p_wind < 2 or q_wind < 2:
        raise DomainError("torus knot windings must both be at least 2 (otherwise the curve is unknotted)")
    if math.gcd(p_wind, q_wind) != 1:
        raise DomainError("torus knot windings must be coprime")
    if not R_major > r_minor > 0:
        raise DomainError("need R_major > r_minor > 0")
    if n < 64:
        raise DomainError("n must be at least 64")
    phi = 2.0 * math.pi * np.arange(n) / n
    rho = R_major + r_minor * np.cos(q_wind * phi)
    pts = np.column_stack([
        rho * np.cos(p_wind * phi),
        rho * np.sin(p_wind * phi),
        r_minor * np.sin(q_wind * phi),
    ])
    return PolygonalCurve(pts)


def save_curve(curve, path):
    """Write ``curve`` with 17 significant digits (round-trips every float64)."""
    lines = [f"# closed polygonal curve, {len(curve)} vertices"]
    lines += ["%.17g,%.17g,%.17g" % tuple(p) for p in curve.points]
    Path(path).write_text("\n".join(lines) + "\n")


def load_curve(path):
    """Read a curve file; parse errors name the offending line."""
    points = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split(",")
            if len(fields) != 3:
                raise CurveFormatError(f"expected 3 comma-separated fields, got {len(fields)}: {line!r}", lineno)
            try:
                points.append([float(v) for v in fields])
            except ValueError:
                raise CurveFormatError(f"not a number in {line!r}", lineno) from None
    return PolygonalCurve(np.array(points, dtype=float).reshape(-1, 3))
