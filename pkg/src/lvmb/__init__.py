"""Polytopality of LVMB quotient fans and moment-map convexity checks."""

from .arith import GaussianRational, RatMatrix
from .fans import Fan, SimplicialComplex, complex_from_maximal, fan_from_complex, project_fan
from .lp import LPCertificate, LPProblem, solve, support_function_lp
from .moment import LVMBData, check_lvmb, classify, verify_convexity
from .polytopes import HPolytope, is_normal_to, normal_fan, polytope_from_support

__all__ = [
    "GaussianRational", "RatMatrix", "Fan", "SimplicialComplex", "complex_from_maximal",
    "fan_from_complex", "project_fan", "LPCertificate", "LPProblem", "solve",
    "support_function_lp", "LVMBData", "check_lvmb", "classify", "verify_convexity",
    "HPolytope", "is_normal_to", "normal_fan", "polytope_from_support",
]
