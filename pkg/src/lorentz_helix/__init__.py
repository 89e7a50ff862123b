"""Timelike curves in Minkowski 4-space: Frenet frames, helix tests, slant-helix synthesis."""
from ._backend import BACKEND
from .analysis import (
    axis_decomposition,
    b2_slant_invariant,
    build_report,
    construct_axis,
    construct_tangent_axis,
    detect_constancy,
    exponential_ratio_check,
    f_characterization,
    ode_residuals,
    sinh_cosh_fit,
    slant_coefficient_solution,
    tangent_helix_coefficients,
    tangent_helix_invariant,
)
from .expr import parse_expression
from .frenet import CurvatureProfile, CurveSamples, FrenetData, frenet_data, frenet_residuals, reparametrize_unit_speed
from .minkowski import causal_character, lorentz_gram_schmidt, lorentz_inner, vec4
from .synthesis import CurvatureSpec, integrate_frenet, make_b2_slant_spec, make_w_curve

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CurvatureProfile",
    "CurvatureSpec",
    "CurveSamples",
    "FrenetData",
    "axis_decomposition",
    "b2_slant_invariant",
    "build_report",
    "causal_character",
    "construct_axis",
    "construct_tangent_axis",
    "detect_constancy",
    "exponential_ratio_check",
    "f_characterization",
    "frenet_data",
    "frenet_residuals",
    "integrate_frenet",
    "lorentz_gram_schmidt",
    "lorentz_inner",
    "make_b2_slant_spec",
    "make_w_curve",
    "ode_residuals",
    "parse_expression",
    "reparametrize_unit_speed",
    "sinh_cosh_fit",
    "slant_coefficient_solution",
    "tangent_helix_coefficients",
    "tangent_helix_invariant",
    "vec4",
]
