"""Minimum detour length over the admissible set and threshold certification."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from knotbound.detour import closed_form, structure_check
from knotbound.errors import (
    CertificationError,
    DomainError,
    FeasibilityError,
    NoCrossingError,
    StructureError,
)
from knotbound.geometry import (
    HALF_PI,
    max_distance,
    penetration_f,
    penetration_f_inverse,
)

T_LOW = math.pi + 1.0
T_HIGH = 5.0


@dataclass(frozen=True)
class Tolerances:
    root_tol: float = 1e-12
    grid_n: int = 64
    refine_depth: int = 8
    t_tol: float = 1e-6
    cert_margin: float = 1e-4
    # points of the coarse sign scan in certify_lower_bound
    scan_n: int = 32

    def __post_init__(self):
        for name in ("root_tol", "grid_n", "refine_depth", "t_tol", "cert_margin", "scan_n"):
            if not getattr(self, name) > 0:
                raise DomainError(f"tolerance {name} must be positive")
        if self.grid_n < 2:
            raise DomainError("grid_n must be at least 2")

    def finer(self):
        """Doubled grid and two extra refinement rounds, used for re-verification."""
        return replace(self, grid_n=2 * self.grid_n, refine_depth=self.refine_depth + 2)


@dataclass(frozen=True)
class FeasibleSet:
    """``{(a, b) : a, b >= 1, f(a) + f(b) <= t - 1}``."""

    t: float

    @property
    def empty(self) -> bool:
        return not self.t >= T_LOW

    @property
    def upper(self) -> float:
        """Side of the bounding square ``[1, upper]^2``."""
        return max_distance(self.t)

    def contains(self, a, b, slack=1e-12):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.empty:
            return np.zeros(np.broadcast(a, b).shape, dtype=bool)
        ok = (a >= 1.0) & (b >= 1.0)
        fa = penetration_f(np.where(ok, a, 1.0))
        fb = penetration_f(np.where(ok, b, 1.0))
        return ok & (fa + fb <= self.t - 1.0 + slack)

    def b_max(self, a):
        """Largest admissible ``b`` for a given ``a`` (the constraint boundary)."""
        rest = self.t - 1.0 - penetration_f(a)
        if np.any(np.asarray(rest) < HALF_PI - 1e-12):
            raise FeasibilityError("a lies outside the admissible set")
        return penetration_f_inverse(np.maximum(rest, HALF_PI))

    def sample(self, n_a, n_b):
        """``n_a * n_b`` admissible points: a uniform in ``[1, upper]``, b uniform in ``[1, b_max(a)]``."""
        if self.empty:
            raise FeasibilityError(f"admissible set is empty at t={self.t!r}")
        a = np.linspace(1.0, self.upper, n_a)
        a = np.minimum(a, self.upper)
        top = self.b_max(a)
        frac = np.linspace(0.0, 1.0, n_b)
        b = 1.0 + np.outer(np.asarray(top) - 1.0, frac)
        return np.repeat(a, n_b), b.ravel()

    def random(self, rng, n):
        """``n`` random admissible points (same parametrization as :meth:`sample`)."""
        a = 1.0 + rng.random(n) * (self.upper - 1.0)
        b = 1.0 + rng.random(n) * (np.asarray(self.b_max(a)) - 1.0)
        return a, b


@dataclass(frozen=True)
class Certificate:
    t_star: float
    margin: float
    samples: list
    tolerances: Tolerances
    argmin: tuple
    L_star: float = float("nan")
    t_range: tuple = (T_LOW, T_HIGH)
    verifications: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.margin > 0 and T_LOW <= self.t_star <= T_HIGH


def _check_t(t):
    if not t >= T_LOW - 1e-12:
        raise FeasibilityError(f"admissible set is empty for t={t!r} < pi + 1")
    if not t <= T_HIGH:
        raise DomainError(f"t={t!r} above 5: the detour shape is not established there")


def _best(a, b, vals, incumbent):
    """Lowest value; ties go to the lexicographically smallest ``(a, b)``."""
    if vals.size:
        i = np.lexsort((b, a, vals))[0]
        cand = (float(vals[i]), float(a[i]), float(b[i]))
        if incumbent is None or cand < incumbent:
            return cand
    return incumbent


def _candidates(fs, a_vals, b_lo, b_hi, n_b):
    """Grid points with ``a <= b`` in the box, plus the constraint-boundary point for each a."""
    top = np.asarray(fs.b_max(a_vals), dtype=float).reshape(-1)
    b_vals = np.linspace(b_lo, b_hi, n_b)
    A, B = np.meshgrid(a_vals, b_vals, indexing="ij")
    A, B = A.ravel(), B.ravel()
    keep = (A <= B) & (B <= np.repeat(top, n_b)) & (B >= 1.0)
    edge = (a_vals <= top) & (top >= b_lo) & (top <= b_hi)
    a = np.concatenate([A[keep], a_vals[edge]])
    b = np.concatenate([B[keep], top[edge]])
    return a, b


def min_detour_L(t, tolerances=None):
    """``L(t)``: minimum of the detour length over the admissible set.

    Coarse grid on ``a <= b`` (F is symmetric) plus the constraint boundary,
    then ``refine_depth`` rounds of rescanning a box around the incumbent,
    shrinking the box by 4 each round.  Every evaluated point is admissible,
    so the returned value is an upper bound on the exact minimum.

    Returns ``(value, (a, b))``.
    """
    tol = tolerances or Tolerances()
    _check_t(t)
    t = max(float(t), T_LOW)
    fs = FeasibleSet(t)
    upper = fs.upper
    if upper - 1.0 <= tol.root_tol:
        return float(closed_form(t, 1.0, 1.0)), (1.0, 1.0)

    def evaluate(a_vals, b_lo, b_hi, n_b, incumbent):
        a_vals = a_vals[(a_vals >= 1.0) & (a_vals <= upper)]
        a, b = _candidates(fs, a_vals, b_lo, b_hi, n_b)
        return _best(a, b, np.asarray(closed_form(t, a, b), dtype=float).reshape(-1), incumbent)

    n = tol.grid_n
    best = evaluate(np.linspace(1.0, upper, n), 1.0, upper, n, None)
    half = (upper - 1.0) / (n - 1)
    for _ in range(tol.refine_depth):
        _, a0, b0 = best
        a_vals = np.linspace(a0 - half, a0 + half, 9)
        best = evaluate(a_vals, max(1.0, b0 - half), min(upper, b0 + half), 9, best)
        half /= 4.0

    value, a, b = best
    report = structure_check(t, a, b)
    if not report.ok:
        raise StructureError(f"minimizer ({a:.12g}, {b:.12g}) at t={t:.12g} violates q < gamma < pi - p")
    return value, (a, b)


def _map(fn, items, workers):
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sample_L_curve(t_min=T_LOW, t_max=T_HIGH, steps=33, tolerances=None, workers=None):
    """Rows ``(t, L(t), t - 1)`` on a uniform grid of ``steps`` points."""
    if not (T_LOW - 1e-12 <= t_min < t_max <= T_HIGH):
        raise DomainError("need pi + 1 <= t_min < t_max <= 5")
    if steps < 2:
        raise DomainError("steps must be at least 2")
    ts = [float(x) for x in np.linspace(t_min, t_max, steps)]
    values = _map(lambda x: min_detour_L(x, tolerances)[0], ts, workers)
    return [(x, v, x - 1.0) for x, v in zip(ts, values)]


def certify_lower_bound(t_range=(T_LOW, T_HIGH), tolerances=None, workers=None):
    """Largest t in ``t_range`` with ``L(t) >= t - 1``, with a safety margin.

    The scan looks for the last sign change of ``L(t) - (t - 1) - cert_margin``
    and bisects it down to ``t_tol``; ``t_star`` is the end of the final
    bracket where the slackened inequality still holds.  ``L(t_star)`` is
    then recomputed on a finer grid.  ``margin`` is the smaller of the two
    values of ``L(t_star) - (t_star - 1)`` and must be positive.
    """
    tol = tolerances or Tolerances()
    lo, hi = map(float, t_range)
    if not (T_LOW - 1e-12 <= lo < hi <= T_HIGH):
        raise DomainError("t_range must lie inside [pi + 1, 5]")

    def excess(x):
        value, _ = min_detour_L(x, tol)
        return value - (x - 1.0) - tol.cert_margin

    ts = [float(x) for x in np.linspace(lo, hi, tol.scan_n + 1)]
    values = _map(lambda x: min_detour_L(x, tol)[0], ts, workers)
    samples = [(x, v) for x, v in zip(ts, values)]
    signs = [v - (x - 1.0) - tol.cert_margin >= 0 for x, v in samples]
    if all(signs):
        raise NoCrossingError(
            f"L(t) >= t - 1 + margin on all of [{lo:.12g}, {hi:.12g}]",
            holds_throughout=True, t_sup=hi,
        )
    crossings = [i for i in range(len(signs) - 1) if signs[i] and not signs[i + 1]]
    if not crossings:
        raise NoCrossingError(f"L(t) < t - 1 + margin on all of [{lo:.12g}, {hi:.12g}]")
    i = crossings[-1]
    left, right = ts[i], ts[i + 1]
    while right - left > tol.t_tol:
        mid = 0.5 * (left + right)
        if excess(mid) >= 0:
            left = mid
        else:
            right = mid
    t_star = left

    coarse_value, _ = min_detour_L(t_star, tol)
    fine_value, argmin = min_detour_L(t_star, tol.finer())
    checks = [(tol.grid_n, coarse_value), (tol.finer().grid_n, fine_value)]
    margin = min(coarse_value, fine_value) - (t_star - 1.0)
    if not margin > 0:
        raise CertificationError(
            f"re-verification at t={t_star:.12g} gives L - (t - 1) = {margin:.3g}"
        )
    return Certificate(
        t_star=t_star,
        margin=margin,
        samples=samples,
        tolerances=tol,
        argmin=argmin,
        L_star=min(coarse_value, fine_value),
        t_range=(lo, hi),
        verifications=checks,
    )
