import math

import numpy as np
import pytest
from scipy.integrate import quad

from knotbound import (
    DetourConfig,
    FeasibilityError,
    StructureError,
    detour_breakdown,
    detour_length_F,
    pitch_angle,
    structure_check,
)
from knotbound.optimizer import FeasibleSet

T_LOW = math.pi + 1
# 2t (e^{(pi/2) tan psi} - 1) at t = pi + 1, 30-digit mpmath (closed form and quadrature agree)
F_AT_T_LOW = 3.96116934592993005879899684481


def _spiral_length(x, k, th0, th1):
    return quad(lambda th: x * math.exp(k * th) * math.sqrt(1 + k * k), th0, th1, epsabs=1e-14)[0]


def _geometric_detour(t, a, b):
    """Assemble the detour from coordinates: tangent points, chord lengths, quadrature arcs."""
    cfg = DetourConfig.build(t, a, b)
    k = math.tan(cfg.psi)
    r_q = cfg.x_q * math.exp(cfg.q * k)
    r_p = cfg.x_p * math.exp(cfg.p * k)
    q_touch = np.array([r_q * math.cos(cfg.q), r_q * math.sin(cfg.q)])
    p_touch = np.array([-r_p * math.cos(cfg.p), r_p * math.sin(cfg.p)])
    seg_qq = float(np.linalg.norm(q_touch - [b, 0.0]))
    seg_pp = float(np.linalg.norm(p_touch - [-a, 0.0]))
    arc_q = _spiral_length(cfg.x_q, k, cfg.q, cfg.gamma)
    arc_p = _spiral_length(cfg.x_p, k, cfg.p, math.pi - cfg.gamma)
    return seg_pp, arc_p, arc_q, seg_qq


def test_value_at_pi_plus_one():
    psi = pitch_angle(T_LOW)
    two_term = 2 * math.exp(math.pi / 2 * math.tan(psi)) / math.sin(psi) - 2 / (math.tan(psi) * math.cos(psi))
    value = detour_length_F(T_LOW, 1.0, 1.0)
    assert value == pytest.approx(two_term, rel=1e-14)
    assert value == pytest.approx(F_AT_T_LOW, rel=1e-13)
    assert value > math.pi


def test_breakdown_at_pi_plus_one():
    parts = detour_breakdown(T_LOW, 1.0, 1.0)
    assert parts.seg_pp == 0.0
    assert parts.seg_qq == 0.0
    assert parts.spiral_pv == pytest.approx(parts.spiral_vq, rel=1e-15)
    assert parts.total == pytest.approx(F_AT_T_LOW, rel=1e-13)


@pytest.mark.parametrize("t,a,b", [(4.5, 1.2, 1.3), (4.76, 1.0, 1.4), (5.0, 1.1, 2.0), (4.3, 1.05, 1.02)])
def test_breakdown_matches_coordinate_geometry(t, a, b):
    parts = detour_breakdown(t, a, b)
    expected = _geometric_detour(t, a, b)
    got = (parts.seg_pp, parts.spiral_pv, parts.spiral_vq, parts.seg_qq)
    assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_swap_symmetry():
    for a, b in [(1.1, 1.4), (1.0, 1.55), (1.25, 1.3)]:
        assert detour_length_F(4.5, a, b) == detour_length_F(4.5, b, a)


@pytest.mark.parametrize("t", [T_LOW, 4.0, 4.5, 4.76, 5.0])
def test_breakdown_total_matches_closed_form(t):
    rng = np.random.default_rng(7)
    if t < T_LOW:
        # no admissible configuration here; exercise the geometric domain instead
        a, b = 1 + 0.4 * rng.random(100), 1 + 0.4 * rng.random(100)
        strict = False
    else:
        a, b = FeasibleSet(t).random(rng, 100)
        strict = True
    for ai, bi in zip(a, b):
        closed = detour_length_F(t, ai, bi, strict=strict)
        total = detour_breakdown(t, ai, bi, strict=strict).total
        assert total == pytest.approx(closed, rel=1e-12)


def test_longer_than_straight_secant():
    rng = np.random.default_rng(3)
    for t in (4.3, 4.76, 5.0):
        a, b = FeasibleSet(t).random(rng, 50)
        assert np.all(detour_length_F(t, a, b) >= a + b)


def test_vectorized_matches_scalar():
    a = np.array([1.0, 1.1, 1.2])
    b = np.array([1.3, 1.0, 1.15])
    vec = detour_length_F(4.7, a, b)
    assert vec == pytest.approx([detour_length_F(4.7, x, y) for x, y in zip(a, b)], rel=1e-15)


def test_arc_positivity_tracks_ordering():
    parts = detour_breakdown(4.6, 1.1, 1.5)
    report = structure_check(4.6, 1.1, 1.5)
    assert report.ok
    assert min(parts.seg_pp, parts.seg_qq, parts.spiral_pv, parts.spiral_vq) > 0
    assert (parts.spiral_vq >= 0) == (report.gamma >= report.q)


class TestStructure:
    def test_symmetric_start(self):
        report = structure_check(T_LOW, 1.0, 1.0)
        assert report.ok
        assert report.gamma == pytest.approx(math.pi / 2)

    def test_dense_grid_at_five(self):
        a, b = FeasibleSet(5.0).sample(60, 60)
        for ai, bi in zip(a, b):
            assert structure_check(5.0, ai, bi).ok

    def test_array_form(self):
        a, b = FeasibleSet(4.7).sample(20, 20)
        report = structure_check(4.7, a, b)
        assert report.ok.shape == a.shape
        assert bool(report)
        assert report.ok[3] == structure_check(4.7, a[3], b[3]).ok

    def test_synthetic_violation(self):
        # tiny pitch (t = 50) and very unequal apex scales push gamma past pi - p
        report = structure_check(50.0, 1.0, 40.0, strict=False)
        assert not report.ok
        assert report.gamma > math.pi - report.p
        with pytest.raises(StructureError):
            detour_breakdown(50.0, 1.0, 40.0, strict=False)
        with pytest.raises(StructureError):
            detour_length_F(50.0, 1.0, 40.0, strict=False)

    def test_refuses_above_five(self):
        with pytest.raises(FeasibilityError):
            detour_length_F(5.2, 1.0, 1.0)

    def test_refuses_infeasible(self):
        with pytest.raises(FeasibilityError):
            detour_length_F(4.5, 1.5, 1.5)
