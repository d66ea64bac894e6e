"""Exact multidegrees of monomial rational maps.

Three mutually cross-checking routes: triangulation of the Newton outer
region, symbolic evaluation of the region integral, and characteristic
polynomials of well-presented square exponent matrices.  All arithmetic is
exact rational; no floating point anywhere in the core.
"""

from .engine import (
    ExponentMatrix,
    MultidegreeReport,
    multidegree_class,
    multidegree_polynomial,
    multidegree_report,
    gamma_from_symbolic,
    segre_class,
    symbolic_integral,
)
from .errors import (
    DivisionByZeroFormError,
    InternalInvariantError,
    IsobaricError,
    MultidegError,
    NonSquareError,
    NotWellPresentedError,
    PowerEvaluationError,
    ValidationError,
)
from .geometry import (
    GeneralizedSimplex,
    NewtonOuterRegion,
    Triangulation,
    newton_outer_region,
    outer_region_contains,
    project,
    translate_by_pivot,
    triangulate,
)
from .intersection import (
    GeometricSetup,
    GradedClass,
    MultidegreePolynomial,
    XSeries,
    evaluate_degree,
    projective_space_setup,
    table_setup,
    validate_isobaric,
)
from .poly import (
    LinearForm,
    MultiPoly,
    RationalExpression,
    charpoly,
    det,
    expr_sum,
    monomial_ring,
    parse_expression,
    parse_poly,
)
from .wellpresented import (
    TorusMap,
    WellPresentedReport,
    charpoly_factorization_check,
    check_well_presented,
    homogenize_torus,
    multidegree_via_charpoly,
    multidegree_via_prechar,
    newton_decomposition,
    prechar_class,
    torus_multidegrees,
)

__version__ = "0.1.0"

__all__ = [
    "ExponentMatrix",
    "GeneralizedSimplex",
    "GeometricSetup",
    "GradedClass",
    "LinearForm",
    "MultidegError",
    "MultidegreePolynomial",
    "MultidegreeReport",
    "MultiPoly",
    "NewtonOuterRegion",
    "RationalExpression",
    "TorusMap",
    "Triangulation",
    "WellPresentedReport",
    "XSeries",
    "charpoly",
    "charpoly_factorization_check",
    "check_well_presented",
    "det",
    "evaluate_degree",
    "expr_sum",
    "gamma_from_symbolic",
    "homogenize_torus",
    "monomial_ring",
    "multidegree_class",
    "multidegree_polynomial",
    "multidegree_report",
    "multidegree_via_charpoly",
    "multidegree_via_prechar",
    "newton_decomposition",
    "newton_outer_region",
    "outer_region_contains",
    "parse_expression",
    "parse_poly",
    "prechar_class",
    "project",
    "projective_space_setup",
    "segre_class",
    "symbolic_integral",
    "table_setup",
    "torus_multidegrees",
    "translate_by_pivot",
    "triangulate",
    "validate_isobaric",
]
