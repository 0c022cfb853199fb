"""Exact automorphism criteria and formal solutions for linear differential operators."""

from .analysis import (
    AutomorphismReport,
    ReducedFamily,
    Verdict,
    check_thm1,
    check_thm1_moment,
    check_thm2,
    check_thm3,
    check_thm4,
    index,
    reduce_to_family,
)
from .errors import FormalAutoError
from .gevrey import BoundCertificate, GevreyEstimate, borel_transform, estimate_order, verify_bound
from .moment import FACTORIAL, MomentSequence, moment_derive, q_derivative
from .newton import (
    VERTICAL,
    NewtonPolygon,
    boundary_reduce_1d,
    boundary_reduce_2d,
    first_positive_slope,
    polygon_1d,
    polygon_2d,
    principal_part_1d,
    principal_part_2d,
)
from .operators import Operator1, Operator2, apply1, apply2, apply_integro, integrate_t
from .parser import parse_expression, parse_operator, pretty_print
from .problem import Problem, load_problem
from .scalar import Scalar
from .series import Poly1, Poly2, Series1, Series2
from .solver import (
    Obstructed,
    Underdetermined,
    Unique,
    kernel_basis,
    oracle_solve,
    solve_1d,
    solve_cauchy_2d,
)
from .spectral import (
    CharPoly,
    CharPoly2,
    FailsAt,
    Holds,
    UndecidedBeyond,
    char_poly_1d,
    char_poly_2d,
    generalized_char_poly,
    nonneg_integer_roots,
    nonresonance_2d,
)

__version__ = "0.1.0"

__all__ = [
    "apply1",
    "apply2",
    "apply_integro",
    "AutomorphismReport",
    "borel_transform",
    "boundary_reduce_1d",
    "boundary_reduce_2d",
    "BoundCertificate",
    "char_poly_1d",
    "char_poly_2d",
    "CharPoly",
    "CharPoly2",
    "check_thm1",
    "check_thm1_moment",
    "check_thm2",
    "check_thm3",
    "check_thm4",
    "estimate_order",
    "FACTORIAL",
    "FailsAt",
    "first_positive_slope",
    "FormalAutoError",
    "generalized_char_poly",
    "GevreyEstimate",
    "Holds",
    "index",
    "integrate_t",
    "kernel_basis",
    "load_problem",
    "moment_derive",
    "MomentSequence",
    "NewtonPolygon",
    "nonneg_integer_roots",
    "nonresonance_2d",
    "Obstructed",
    "Operator1",
    "Operator2",
    "oracle_solve",
    "parse_expression",
    "parse_operator",
    "Poly1",
    "Poly2",
    "polygon_1d",
    "polygon_2d",
    "pretty_print",
    "principal_part_1d",
    "principal_part_2d",
    "Problem",
    "q_derivative",
    "reduce_to_family",
    "ReducedFamily",
    "Scalar",
    "Series1",
    "Series2",
    "solve_1d",
    "solve_cauchy_2d",
    "UndecidedBeyond",
    "Underdetermined",
    "Unique",
    "Verdict",
    "verify_bound",
    "VERTICAL",
]
