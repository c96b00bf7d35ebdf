"""Closed-form length of the shortest detour around ``B_P & B_Q``.

The detour from Q to P consists of a tangent segment ``QQ'``, the arc
``Q'V`` of the spiral bounding B_Q, the arc ``VP'`` of the spiral bounding
B_P, and the tangent segment ``P'P``.  A log-spiral ``r = x e^{theta tan psi}``
with ``sin psi = 1/t`` has arc length ``t * (r1 - r0)`` between radii r0, r1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from knotbound.errors import StructureError
from knotbound.geometry import (
    DetourConfig,
    _apex,
    _out,
    check_config,
    junction_angle,
    pitch_angle,
    tangency_angle,
)


@dataclass(frozen=True)
class DetourBreakdown:
    seg_pp: float
    spiral_pv: float
    spiral_vq: float
    seg_qq: float

    @property
    def total(self) -> float:
        return self.seg_pp + self.spiral_pv + self.spiral_vq + self.seg_qq


@dataclass(frozen=True)
class StructureReport:
    ok: bool
    p: float
    q: float
    gamma: float

    def __bool__(self):
        return bool(np.all(self.ok))


def closed_form(t, a, b):
    """Vectorized F without validation.  Callers guarantee admissibility."""
    psi = pitch_angle(t)
    k = math.tan(psi)
    x_p, x_q = _apex(t, a), _apex(t, b)
    p = tangency_angle(t, a, x_p)
    q = tangency_angle(t, b, x_q)
    head = 2.0 * math.exp(0.5 * math.pi * k) / math.sin(psi) * np.sqrt(x_p * x_q)
    tail = (
        x_q * np.exp(q * k) * np.cos(q) / np.cos(q - psi)
        + x_p * np.exp(p * k) * np.cos(p) / np.cos(p - psi)
    ) / k
    return _out(head - tail)


def detour_length_F(t, a, b, strict=True):
    """Length of the shortest planar curve from P to Q outside ``B_P & B_Q``.

    ``a = |OP|``, ``b = |OQ|``.  With ``strict`` the configuration must be
    admissible (``f(a) + f(b) <= t - 1``, ``t <= 5``); with ``strict=False``
    any ``a, b in [1, t + 1)`` is accepted, but the four-arc structure is
    still required.  Accepts arrays for ``a`` and ``b``.
    """
    check_config(t, a, b, strict=strict)
    a_arr, b_arr = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
    if a_arr.ndim == 0:
        _require_structure(DetourConfig.build(t, a, b, strict=strict))
    else:
        for ai, bi in zip(a_arr.ravel(), b_arr.ravel()):
            _require_structure(DetourConfig.build(t, ai, bi, strict=strict))
    return closed_form(t, a, b)


def _require_structure(cfg):
    if not cfg.ordered:
        raise StructureError(
            f"q < gamma < pi - p fails at t={cfg.t:.12g}, a={cfg.a:.12g}, b={cfg.b:.12g}: "
            f"p={cfg.p:.12g}, q={cfg.q:.12g}, gamma={cfg.gamma:.12g}"
        )


def detour_breakdown(t, a, b, strict=True):
    """The four pieces of the detour, each computed from its own formula."""
    cfg = DetourConfig.build(t, a, b, strict=strict)
    _require_structure(cfg)
    t = cfg.t
    psi, k = cfg.psi, math.tan(cfg.psi)
    # both spirals reach V at radius sqrt(x_p x_q) e^{pi/2 tan psi}
    r_v = math.sqrt(cfg.x_p * cfg.x_q) * math.exp(0.5 * math.pi * k)
    r_q = cfg.x_q * math.exp(cfg.q * k)
    r_p = cfg.x_p * math.exp(cfg.p * k)
    return DetourBreakdown(
        seg_pp=r_p * math.sin(cfg.p) / math.cos(cfg.p - psi),
        spiral_pv=t * (r_v - r_p),
        spiral_vq=t * (r_v - r_q),
        seg_qq=r_q * math.sin(cfg.q) / math.cos(cfg.q - psi),
    )


def structure_check(t, a, b, strict=True):
    """Report whether ``q < gamma < pi - p`` holds, with the three angles.

    Array inputs give elementwise fields; truthiness means every element holds.
    """
    check_config(t, a, b, strict=strict)
    psi = pitch_angle(t)
    x_p, x_q = _apex(t, a), _apex(t, b)
    p = tangency_angle(t, a, x_p)
    q = tangency_angle(t, b, x_q)
    gamma = junction_angle(x_p, x_q, psi)
    ok = (np.asarray(q) < gamma) & (gamma < math.pi - np.asarray(p))
    return StructureReport(ok=bool(ok) if np.ndim(ok) == 0 else ok, p=p, q=q, gamma=gamma)
