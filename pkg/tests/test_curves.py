import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from knotbound import (
    CurveFormatError,
    DegenerateCurveError,
    DomainError,
    PolygonalCurve,
    load_curve,
    polygonal_distortion,
    save_curve,
    torus_knot,
)
from knotbound.curves import pair_ratio


def _regular_polygon(n, radius=1.0):
    phi = 2 * math.pi * np.arange(n) / n
    return PolygonalCurve(np.column_stack([radius * np.cos(phi), radius * np.sin(phi), np.zeros(n)]))


def _brute_force(curve):
    pts, cum = curve.points, curve.cum_len
    best = -1.0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            arc = cum[j] - cum[i]
            arc = min(arc, cum[-1] - arc)
            best = max(best, arc / np.linalg.norm(pts[j] - pts[i]))
    return best


class TestDistortion:
    def test_regular_polygon_approaches_half_pi(self):
        value, (i, j) = polygonal_distortion(_regular_polygon(2000))
        assert value == pytest.approx(math.pi / 2, abs=1e-3)
        assert j - i == 1000

    def test_triangle(self):
        value, _ = polygonal_distortion(_regular_polygon(3))
        assert value == pytest.approx(1.0, abs=1e-12)

    def test_trefoil_exceeds_bound(self):
        value, _ = polygonal_distortion(torus_knot(2, 3, 2.0, 1.0, 4096))
        assert value > 4.76

    def test_matches_brute_force(self):
        rng = np.random.default_rng(4)
        curve = PolygonalCurve(rng.normal(size=(40, 3)))
        assert polygonal_distortion(curve)[0] == pytest.approx(_brute_force(curve), rel=1e-14)

    def test_witness_pair(self):
        curve = torus_knot(2, 5, 3.0, 1.0, 600)
        value, (i, j) = polygonal_distortion(curve)
        assert i < j
        assert pair_ratio(curve, i, j) == value

    def test_threads_agree(self):
        curve = torus_knot(3, 4, 2.5, 1.0, 1500)
        assert polygonal_distortion(curve, workers=1) == polygonal_distortion(curve, workers=4)

    @given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0))
    @settings(max_examples=25, deadline=None)
    def test_rigid_motion_and_scale_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        curve = PolygonalCurve(rng.normal(size=(30, 3)))
        rot = Rotation.random(random_state=seed).as_matrix()
        moved = PolygonalCurve(scale * curve.points @ rot.T + rng.normal(size=3))
        v0 = polygonal_distortion(curve)[0]
        v1 = polygonal_distortion(moved)[0]
        assert v1 == pytest.approx(v0, rel=1e-12)
        assert v0 >= 1.0


class TestTorusKnot:
    def test_invalid(self):
        for args in [(1, 0), (2, 4), (1, 3), (3, 6)]:
            with pytest.raises(DomainError):
                torus_knot(*args)
        with pytest.raises(DomainError):
            torus_knot(2, 3, 1.0, 2.0)
        with pytest.raises(DomainError):
            torus_knot(2, 3, n=10)

    def test_length_converges(self):
        l1 = torus_knot(2, 3, n=4096).length
        l2 = torus_knot(2, 3, n=8192).length
        assert abs(l2 - l1) / l2 < 1e-4

    def test_on_torus(self):
        pts = torus_knot(2, 3, 2.0, 1.0, 256).points
        rho = np.hypot(pts[:, 0], pts[:, 1])
        assert np.allclose((rho - 2.0) ** 2 + pts[:, 2] ** 2, 1.0)


class TestCurveIO:
    def test_round_trip(self, tmp_path):
        curve = torus_knot(2, 3, 2.0, 1.0, 300)
        path = tmp_path / "k.txt"
        save_curve(curve, path)
        again = load_curve(path)
        assert np.array_equal(again.points, curve.points)

    def test_comments_and_blank_lines(self, tmp_path):
        path = tmp_path / "c.txt"
        path.write_text("# tri\n\n1,0,0\n0,1,0\n\n0,0,1\n")
        assert len(load_curve(path)) == 3

    def test_bad_line_reports_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("# header\n1,0,0\n1,2\n0,0,1\n")
        with pytest.raises(CurveFormatError) as info:
            load_curve(path)
        assert info.value.lineno == 3
        assert "line 3" in str(info.value)

    def test_non_numeric(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1,0,0\n0,x,0\n0,0,1\n")
        with pytest.raises(CurveFormatError):
            load_curve(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("# nothing\n")
        with pytest.raises(DegenerateCurveError):
            load_curve(path)

    def test_coincident_vertices(self):
        with pytest.raises(DegenerateCurveError):
            PolygonalCurve([[0, 0, 0], [1, 0, 0], [1, 0, 0], [0, 1, 0]])
        curve = PolygonalCurve([[0, 0, 0], [1, 0, 0], [0, 0, 0], [0, 1, 0]])
        with pytest.raises(DegenerateCurveError):
            polygonal_distortion(curve)
