import math

import numpy as np
import pytest

import knotbound.oracle as oracle_mod
from knotbound import (
    DisconnectedGraphError,
    DomainError,
    PlanarRegion,
    detour_length_F,
    oracle_shortest_path,
)

T_LOW = math.pi + 1
CONFIGS = [(T_LOW, 1.0, 1.0), (4.5, 1.2, 1.3), (4.76, 1.13, 1.13), (5.0, 1.0, 2.1)]


def test_unit_ball_case():
    value = oracle_shortest_path(T_LOW, 1.0, 1.0, 4096)
    closed = detour_length_F(T_LOW, 1.0, 1.0)
    assert abs(value - closed) / closed <= 1e-3
    assert value == pytest.approx(3.961, abs=1e-3)


@pytest.mark.parametrize("t,a,b", CONFIGS)
def test_refinement_is_monotone_and_bounded_below(t, a, b):
    closed = detour_length_F(t, a, b)
    values = [oracle_shortest_path(t, a, b, n) for n in (64, 128, 256, 512, 1024, 2048)]
    for coarse, fine in zip(values, values[1:]):
        assert fine <= coarse + 1e-12
    assert all(v >= closed - 1e-9 for v in values)


@pytest.mark.parametrize("t,a,b", CONFIGS[1:3])
def test_quadratic_convergence(t, a, b):
    closed = detour_length_F(t, a, b)
    errors = [oracle_shortest_path(t, a, b, n) - closed for n in (128, 256, 512)]
    for e1, e2 in zip(errors, errors[1:]):
        assert 3.0 < e1 / e2 < 5.0


def test_region_layout():
    region = PlanarRegion.build(4.6, 1.1, 1.4, 256)
    assert region.boundary[0] == pytest.approx([region.x_q, 0.0])
    assert region.boundary[-1] == pytest.approx([-region.x_p, 0.0], abs=1e-15)
    assert np.any(region.angles == region.gamma)
    # P and Q sit outside the region, on opposite sides of O
    assert region.depth(region.P) < 0 and region.depth(region.Q) < 0
    assert region.P[0] < 0 < region.Q[0]
    # boundary samples lie on the region boundary, the enclosing polygon outside it
    assert np.all(np.abs(region.depth(region.boundary)) < 1e-13)
    assert np.all(region.depth(region.polygon()) <= 1e-13)


def test_region_is_intersection_of_bodies():
    region = PlanarRegion.build(4.6, 1.1, 1.4, 64)
    k = math.tan(region.psi)
    rng = np.random.default_rng(0)
    pts = rng.uniform(-2, 2, size=(2000, 2))
    ang = np.abs(np.arctan2(pts[:, 1], pts[:, 0]))
    r = np.hypot(pts[:, 0], pts[:, 1])
    in_q = r < region.x_q * np.exp(ang * k)
    in_p = r < region.x_p * np.exp((math.pi - ang) * k)
    assert np.array_equal(region.depth(pts) > 0, in_q & in_p)


def test_too_few_samples():
    with pytest.raises(DomainError):
        oracle_shortest_path(4.5, 1.2, 1.3, 32)


def test_disconnected_graph(monkeypatch):
    monkeypatch.setattr(oracle_mod, "_clear", lambda region, s, e, n: np.zeros(len(s), dtype=bool))
    with pytest.raises(DisconnectedGraphError):
        oracle_shortest_path(4.5, 1.2, 1.3, 64)


def test_geometric_domain_below_pi_plus_one():
    value = oracle_shortest_path(4.0, 1.1, 1.2, 2048, strict=False)
    closed = detour_length_F(4.0, 1.1, 1.2, strict=False)
    assert closed <= value <= closed * (1 + 1e-5)
