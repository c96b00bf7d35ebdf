"""Numerical lower bound for the distortion of knotted curves.

The package evaluates the length of the shortest planar detour around a pair
of logarithmic-spiral bodies, minimizes it over the admissible secant
configurations, and certifies the largest distortion value for which the
detour is still long enough.  A brute-force visibility-graph oracle and a
polygonal-curve distortion calculator are included for cross-checks.
"""

from knotbound.errors import (
    CertificationError,
    ConvergenceError,
    CurveFormatError,
    DegenerateCurveError,
    DisconnectedGraphError,
    DomainError,
    FeasibilityError,
    NoCrossingError,
    StructureError,
)
from knotbound.geometry import (
    DetourConfig,
    RescaledModel,
    SpiralBody,
    apex_scales,
    g_psi,
    junction_angle,
    penetration_f,
    penetration_f_inverse,
    pitch_angle,
    tangency_angle,
)
from knotbound.detour import (
    DetourBreakdown,
    StructureReport,
    detour_breakdown,
    detour_length_F,
    structure_check,
)
from knotbound.oracle import PlanarRegion, oracle_shortest_path
from knotbound.optimizer import (
    Certificate,
    FeasibleSet,
    Tolerances,
    certify_lower_bound,
    min_detour_L,
    sample_L_curve,
)
from knotbound.appendix import AppendixReport, d_of, verify_appendix, x_of_t
from knotbound.curves import (
    PolygonalCurve,
    load_curve,
    polygonal_distortion,
    save_curve,
    torus_knot,
)

__version__ = "0.1.0"
