"""Scalar functions and secant-configuration geometry.

Everything lives in the rescaled model: the curve is scaled so that the
shortest boundary-essential arc has length ``t - 1`` and the avoiding ball
around the secant point ``O`` has radius 1.  Angles are radians.

The plane through P, O, Q is given coordinates with O at the origin, the
Q-axis along +x and the P-axis along -x.  Functions accept floats or numpy
arrays; scalar inputs give float outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from knotbound.errors import ConvergenceError, DomainError, FeasibilityError

HALF_PI = 0.5 * math.pi
ROOT_TOL = 1e-12
MAX_ITER = 200
# keeps tangency angles off the cosine pole at pi/2 + psi
ANGLE_CLAMP = 1e-9


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def bisect_increasing(func, target, lo, hi, tol=ROOT_TOL, maxiter=MAX_ITER):
    """Solve ``func(x) = target`` for increasing ``func`` on ``[lo, hi]``.

    Works elementwise on arrays.  The caller guarantees the bracket
    ``func(lo) <= target <= func(hi)``.  Returns the midpoint of the final
    bracket, whose width is at most ``tol``.
    """
    target = np.asarray(target, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), target.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), target.shape).copy()
    for _ in range(maxiter):
        if np.all(hi - lo <= tol):
            return _out(0.5 * (lo + hi))
        mid = 0.5 * (lo + hi)
        below = func(mid) < target
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    if np.all(hi - lo <= tol):
        return _out(0.5 * (lo + hi))
    raise ConvergenceError(
        f"bisection did not reach tolerance {tol:g} in {maxiter} iterations"
    )


# -- avoiding-ball inequalities ---------------------------------------------

def avoiding_ball_radius(arc_length, distortion):
    """Radius ``L / (U - 1)`` of the ball a boundary-essential arc avoids."""
    if distortion <= 1:
        raise DomainError("distortion must exceed 1")
    return arc_length / (distortion - 1)


def arc_point_distance_bound(secant_length, arc_length, distortion):
    """Lower bound ``(l + L) / (1 + U)`` on ``|XO|`` for a point X of the arc."""
    return (secant_length + arc_length) / (1 + distortion)


def shortest_secant_bound(arc_length, distortion):
    """Lower bound ``2L / (U - 1)`` on the shortest essential secant."""
    return 2.0 * avoiding_ball_radius(arc_length, distortion)


def ball_detour_bound():
    """Distortion bound from detouring around the avoiding ball: ``pi + 1``.

    A boundary-essential arc of length L must pass around a ball of radius
    ``L / (U - 1)`` centred on its secant, so ``L >= pi L / (U - 1)``.
    """
    return math.pi + 1.0


@dataclass(frozen=True)
class RescaledModel:
    """Model constants after scaling the avoiding ball to radius 1."""

    t: float

    def __post_init__(self):
        if not self.t > 1:
            raise DomainError(f"distortion parameter must exceed 1, got {self.t!r}")

    @property
    def L_arc(self) -> float:
        return self.t - 1.0

    @property
    def r_ball(self) -> float:
        return avoiding_ball_radius(self.L_arc, self.t)

    @property
    def l_min(self) -> float:
        return shortest_secant_bound(self.L_arc, self.t)


# -- scalar functions -------------------------------------------------------

def penetration_f(s):
    """``sqrt(s^2 - 1) + arcsin(1/s)`` for ``s >= 1``.

    This is the length of the shortest path from a point at distance s from
    O to the far side of the unit ball (tangent segment plus quarter arc).
    Evaluated as ``pi/2 + (w - arctan w)`` with ``w = sqrt(s^2 - 1)``, which
    keeps the flat region near ``s = 1`` accurate.
    """
    s = np.asarray(s, dtype=float)
    if np.any(~(s >= 1.0)):
        raise DomainError("penetration_f requires s >= 1")
    w = np.sqrt((s - 1.0) * (s + 1.0))
    return _out(HALF_PI + (w - np.arctan(w)))


def penetration_f_inverse(y, tol=ROOT_TOL, maxiter=MAX_ITER):
    """Inverse of :func:`penetration_f` by bisection on ``[1, y]``."""
    y = np.asarray(y, dtype=float)
    if np.any(~(y >= HALF_PI)):
        raise DomainError("penetration_f_inverse requires y >= pi/2")
    # f(s) > s on [1, inf), so the root lies below y
    hi = np.maximum(y, 1.0)
    s = bisect_increasing(penetration_f, y, 1.0, hi, tol=tol, maxiter=maxiter)
    # f(1) = pi/2 exactly; the flat start otherwise leaves s a few ulps above 1
    return _out(np.where(y == HALF_PI, 1.0, s))


def max_distance(t):
    """Largest admissible ``|OP|`` at parameter t: ``f^-1(t - 1 - pi/2)``."""
    if not t >= math.pi + 1:
        raise FeasibilityError(f"no admissible configuration for t={t!r} < pi + 1")
    return penetration_f_inverse(max(t - 1.0 - HALF_PI, HALF_PI))


def pitch_angle(t):
    """Spiral pitch ``psi = arcsin(1/t)``; ``cot psi = sqrt(t^2 - 1)``."""
    t = np.asarray(t, dtype=float)
    if np.any(~(t >= 1.0)):
        raise DomainError("pitch_angle requires t >= 1")
    return _out(np.arcsin(1.0 / t))


def apex_scales(t, a, b):
    """Apex scales ``((t + 1 - a) / t, (t + 1 - b) / t)`` of the bodies B_P, B_Q."""
    upper = max_distance(t)
    for name, v in (("|OP|", a), ("|OQ|", b)):
        v = np.asarray(v, dtype=float)
        if np.any(v < 1.0) or np.any(v > upper + ROOT_TOL):
            raise FeasibilityError(
                f"{name} must lie in [1, {upper:.12g}] at t={t:.12g}"
            )
    return _apex(t, a), _apex(t, b)


def _apex(t, d):
    return _out((t + 1.0 - np.asarray(d, dtype=float)) / t)


def g_psi(q_angle, psi):
    """Tangency ratio ``e^{q tan psi} cos psi / cos(psi - q)``.

    For a point on the axis at distance ``d`` whose tangent to the spiral
    ``r = x e^{theta tan psi}`` touches at angle q, ``d = g_psi(q) * x``.
    """
    q = np.asarray(q_angle, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if np.any(~((psi > 0) & (psi < HALF_PI))):
        raise DomainError("g_psi requires psi in (0, pi/2)")
    if np.any(~((q >= 0) & (q < HALF_PI + psi))):
        raise DomainError("g_psi requires q in [0, pi/2 + psi)")
    return _out(np.exp(q * np.tan(psi)) * np.cos(psi) / np.cos(psi - q))


def _g_unchecked(q, psi):
    return np.exp(q * np.tan(psi)) * np.cos(psi) / np.cos(psi - q)


def tangency_angle(t, dist, x, tol=ROOT_TOL, maxiter=MAX_ITER):
    """Angle at O between the axis and the tangency point of the spiral.

    Inverts ``g_psi(q) = dist / x`` on ``[0, pi/2 + psi - 1e-9]``.
    """
    psi = pitch_angle(t)
    ratio = np.asarray(dist, dtype=float) / np.asarray(x, dtype=float)
    if np.any(~(ratio >= 1.0)):
        raise DomainError("tangency_angle requires dist >= x")
    hi = HALF_PI + psi - ANGLE_CLAMP
    if np.any(ratio > _g_unchecked(hi, psi)):
        raise DomainError("tangency point beyond the clamped angle domain")
    q = bisect_increasing(
        lambda v: _g_unchecked(v, psi), ratio, 0.0, hi, tol=tol, maxiter=maxiter
    )
    return _out(np.where(ratio == 1.0, 0.0, q))


def junction_angle(x_p, x_q, psi):
    """Angle ``angle QOV`` where the spirals of B_Q and B_P meet."""
    x_p = np.asarray(x_p, dtype=float)
    x_q = np.asarray(x_q, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if np.any(~((x_p > 0) & (x_q > 0))):
        raise DomainError("apex scales must be positive")
    if np.any(~((psi > 0) & (psi < HALF_PI))):
        raise DomainError("junction_angle requires psi in (0, pi/2)")
    return _out(HALF_PI - 0.5 / np.tan(psi) * np.log(x_q / x_p))


def is_feasible(t, a, b, slack=ROOT_TOL):
    """``a, b >= 1`` and ``f(a) + f(b) <= t - 1``, elementwise."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ok = (a >= 1.0) & (b >= 1.0)
    fa = penetration_f(np.where(ok, a, 1.0))
    fb = penetration_f(np.where(ok, b, 1.0))
    return ok & (fa + fb <= t - 1.0 + slack)


def check_config(t, a, b, strict=True):
    """Validate ``(t, a, b)``; raise on violation.

    ``strict`` demands the admissible set ``f(a) + f(b) <= t - 1`` and
    ``t <= 5``.  Otherwise only the geometric domain is checked: ``t > 1``
    and both apex scales in ``(0, 1]``.
    """
    if strict:
        if not math.pi + 1 - ROOT_TOL <= t <= 5.0:
            raise FeasibilityError(f"t={t!r} outside [pi + 1, 5]")
        if not np.all(is_feasible(t, a, b)):
            raise FeasibilityError(
                f"(|OP|, |OQ|) outside the admissible set f(a) + f(b) <= t - 1 at t={t:.12g}"
            )
        return
    if not t > 1:
        raise DomainError(f"t={t!r} must exceed 1")
    for v in (a, b):
        v = np.asarray(v, dtype=float)
        if np.any(~((v >= 1.0) & (v < t + 1.0))):
            raise DomainError("distances must lie in [1, t + 1)")


@dataclass(frozen=True)
class DetourConfig:
    """A secant configuration together with its spiral geometry."""

    t: float
    a: float
    b: float
    psi: float
    x_p: float
    x_q: float
    p: float
    q: float
    gamma: float

    @classmethod
    def build(cls, t, a, b, strict=True):
        check_config(t, a, b, strict=strict)
        psi = pitch_angle(t)
        x_p, x_q = _apex(t, a), _apex(t, b)
        return cls(
            t=float(t),
            a=float(a),
            b=float(b),
            psi=psi,
            x_p=x_p,
            x_q=x_q,
            p=tangency_angle(t, a, x_p),
            q=tangency_angle(t, b, x_q),
            gamma=junction_angle(x_p, x_q, psi),
        )

    @property
    def ordered(self) -> bool:
        """True iff ``q < gamma < pi - p`` (both straight legs and both spiral arcs nonempty)."""
        return self.q < self.gamma < math.pi - self.p

    def junction_residual(self) -> float:
        k = math.tan(self.psi)
        return abs(
            self.x_q * math.exp(self.gamma * k)
            - self.x_p * math.exp((math.pi - self.gamma) * k)
        )


@dataclass(frozen=True)
class SpiralBody:
    """Planar profile of ``{X : |OX| < A e^{angle(axis, OX) tan psi}}``."""

    apex: float
    pitch: float
    axis_angle: float = 0.0
    max_angle: float = math.pi

    def __post_init__(self):
        if not self.apex > 0:
            raise DomainError("apex scale must be positive")
        if not 0 <= self.pitch < HALF_PI:
            raise DomainError("pitch must lie in [0, pi/2)")
        if not 0 < self.max_angle <= math.pi:
            raise DomainError("max_angle must lie in (0, pi]")

    def radius(self, offset):
        """Boundary radius at angular offset ``offset`` from the axis."""
        offset = np.abs(np.asarray(offset, dtype=float))
        return _out(self.apex * np.exp(offset * math.tan(self.pitch)))

    def offset_of(self, points):
        """Unsigned angle between the axis and OX, in ``[0, pi]``."""
        pts = np.asarray(points, dtype=float)
        ang = np.arctan2(pts[..., 1], pts[..., 0]) - self.axis_angle
        return np.abs((ang + math.pi) % (2 * math.pi) - math.pi)

    def depth(self, points):
        """Signed depth ``boundary_radius - |OX|``; positive inside the body."""
        pts = np.asarray(points, dtype=float)
        return _out(self.radius(self.offset_of(pts)) - np.hypot(pts[..., 0], pts[..., 1]))

    def contains(self, points):
        return np.asarray(self.depth(points)) > 0

    def boundary(self, n=256):
        """``n`` points of the upper boundary, offsets ``0 .. max_angle``."""
        th = np.linspace(0.0, self.max_angle, n)
        r = self.radius(th)
        ang = th + self.axis_angle
        return np.column_stack([r * np.cos(ang), r * np.sin(ang)])

    def family_bound(self, s):
        """Radial lower bound ``A + s sin psi`` defining the avoiding curve family."""
        return self.apex + np.asarray(s, dtype=float) * math.sin(self.pitch)
