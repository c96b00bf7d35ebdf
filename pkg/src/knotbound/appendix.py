"""Numerical checks of the bounds used to establish the four-arc detour shape.

For ``t <= 5`` the apex scales stay above ``x(5) > 0.76``, the tangency
angles stay below 1.32, and ``gamma > q`` follows from a four-case bound on
``d(q, t) = (cot psi / 2) ln x_q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from knotbound.errors import DomainError
from knotbound.geometry import (
    HALF_PI,
    _apex,
    _g_unchecked,
    junction_angle,
    penetration_f_inverse,
    pitch_angle,
    tangency_angle,
)
from knotbound.optimizer import T_HIGH, T_LOW, FeasibleSet

Q_LIMIT = 1.32
X_FLOOR = 0.76
BRIDGE_FLOOR = 0.9

# (q_lo, q_hi, c): for q in [q_lo, q_hi), q + d(q_lo, pi + 1) < q - c < 0.9
CASE_TABLE = (
    (0.9, 1.09, 0.19),
    (1.09, 1.23, 0.33),
    (1.23, 1.32, 0.48),
)
# the printed table gives [0.9, 1.23) for the middle row
PRINTED_MIDDLE_ROW = (0.9, 1.23)


def x_of_t(t):
    """Smallest admissible apex scale at distortion t: ``1 - (u(t) - 1) / t``."""
    t = np.asarray(t, dtype=float)
    if np.any(~(t >= T_LOW - 1e-12)):
        raise DomainError("x_of_t requires t >= pi + 1")
    out = 1.0 - (_u(t) - 1.0) / t
    return float(out) if out.ndim == 0 else out


def _u(t):
    """``f^-1(t - 1 - pi/2)``, the largest admissible distance."""
    return penetration_f_inverse(np.maximum(np.asarray(t, dtype=float) - 1.0 - HALF_PI, HALF_PI))


def d_of(q_angle, t):
    """``(cot psi / 2) ln x_q`` with ``x_q = (t + 1) / (t + g_psi(q))``."""
    q = np.asarray(q_angle, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(~((q >= 0) & (q <= Q_LIMIT))):
        raise DomainError(f"d_of requires q in [0, {Q_LIMIT}]")
    if np.any(~((t >= T_LOW - 1e-12) & (t <= T_HIGH))):
        raise DomainError("d_of requires t in [pi + 1, 5]")
    psi = pitch_angle(t)
    x_q = (t + 1.0) / (t + _g_unchecked(q, psi))
    out = 0.5 / np.tan(psi) * np.log(x_q)
    return float(out) if out.ndim == 0 else out


@dataclass
class AppendixReport:
    x5: float
    x_monotone: bool
    q_max: float
    bridge: float
    bridge_ok: bool
    d_monotone: bool
    d_values: dict
    case_rows: list
    gamma_gt_q: bool
    gamma_configs: int
    notes: list = field(default_factory=list)

    @property
    def x5_ok(self) -> bool:
        return X_FLOOR < self.x5 < 1.0

    @property
    def q_ok(self) -> bool:
        return self.q_max < Q_LIMIT

    @property
    def cases_ok(self) -> bool:
        return all(row["ok"] for row in self.case_rows)

    @property
    def flags(self) -> dict:
        return {
            "x5_in_range": self.x5_ok,
            "x_decreasing": self.x_monotone,
            "q_below_limit": self.q_ok,
            "bridge_above_0.9": self.bridge_ok,
            "d_decreasing": self.d_monotone,
            "case_table": self.cases_ok,
            "gamma_gt_q": self.gamma_gt_q,
        }

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())


def _gamma_check(t, side):
    """``q < gamma < pi - p`` and the equivalent logarithmic form on an admissible sample."""
    fs = FeasibleSet(t)
    a, b = fs.sample(side, side)
    psi = pitch_angle(t)
    x_p, x_q = _apex(t, a), _apex(t, b)
    p = tangency_angle(t, a, x_p)
    q = tangency_angle(t, b, x_q)
    gamma = junction_angle(x_p, x_q, psi)
    half_cot = 0.5 / math.tan(psi)
    equivalent = HALF_PI + half_cot * np.log(x_p) > q + half_cot * np.log(x_q)
    ok = (q < gamma) & (gamma < math.pi - p) & equivalent
    return bool(np.all(ok)), a.size


def verify_appendix(sample_density=1000):
    """Run every check and collect the results; failures are recorded, not raised."""
    if sample_density < 100:
        raise DomainError("sample_density must be at least 100")
    n = int(sample_density)
    ts = np.linspace(T_LOW, T_HIGH, n)

    xs = x_of_t(ts)
    x5 = float(xs[-1])
    x_monotone = bool(np.all(np.diff(xs) < 0))

    # q grows with |OQ|, so its largest admissible value sits at |OQ| = u(t)
    u = _u(ts)
    q_top = tangency_angle(ts, u, _apex(ts, u))
    q_max = float(np.max(q_top))

    half_cot = 0.5 / np.tan(pitch_angle(ts))
    bridge = float(HALF_PI + half_cot[-1] * math.log(x5))
    chain = HALF_PI + half_cot * np.log(xs)
    bridge_ok = bool(bridge > BRIDGE_FLOOR and np.all(chain >= bridge - 1e-12))

    qs = np.linspace(0.9, Q_LIMIT, n)
    grid = d_of(qs[:, None], ts[None, :])
    d_monotone = bool(np.all(np.diff(grid, axis=0) < 0) and np.all(np.diff(grid, axis=1) < 0))

    d_values = {q_lo: d_of(q_lo, T_LOW) for q_lo, _, _ in CASE_TABLE}
    case_rows = [
        {"q_lo": 0.0, "q_hi": 0.9, "bound": 0.0, "d": d_of(0.0, T_LOW),
         "ok": bool(np.all(grid <= 0) and d_of(0.0, T_LOW) == 0.0)},
    ]
    for q_lo, q_hi, c in CASE_TABLE:
        d = d_values[q_lo]
        case_rows.append(
            {"q_lo": q_lo, "q_hi": q_hi, "bound": c, "d": d,
             "ok": bool(d < -c and q_hi - c <= BRIDGE_FLOOR + 1e-12)}
        )

    side = max(10, n // 10)
    gamma_ok, count = True, 0
    for t in np.linspace(T_LOW, T_HIGH, 11):
        ok, m = _gamma_check(float(t), side)
        gamma_ok &= ok
        count += m

    notes = [
        "case table: middle row printed as q in [%g, %g); checked as [1.09, 1.23)"
        % PRINTED_MIDDLE_ROW
    ]
    return AppendixReport(
        x5=x5,
        x_monotone=x_monotone,
        q_max=q_max,
        bridge=bridge,
        bridge_ok=bridge_ok,
        d_monotone=d_monotone,
        d_values=d_values,
        case_rows=case_rows,
        gamma_gt_q=gamma_ok,
        gamma_configs=count,
        notes=notes,
    )
