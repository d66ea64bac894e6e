"""Multidegree computation through the Newton outer region.

Pipeline: translate the exponent rows by a pivot row, identify the vertices
of the resulting outer region, triangulate with vertices at infinity, then
read off either

* the multidegree class  G = sum_T hvol(T) * X_T  (one squarefree monomial
  per simplex, graded by rank), evaluated through the intersection oracle
  into the multidegree polynomial, or
* the closed-form symbolic value of the underlying region integral: each
  simplex T with finite vertices v_0..v_s contributes

      hvol(T) * X_T * t^rank * h^(dimV+1) / prod_i (h + (v_i . X) t),

  summed into a single simplified rational expression, or
* the Segre-class series of the monomial base scheme, from the untranslated
  region with denominator factors (1 + v . X) expanded as truncated
  geometric series.

Every quantity is exact; the evaluated outputs are independent of the pivot
choice and of the triangulation insertion order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalInvariantError, ValidationError
from .geometry import (
    GeneralizedSimplex,
    NewtonOuterRegion,
    Triangulation,
    newton_outer_region,
    translate_by_pivot,
    triangulate,
)
from .intersection import (
    GeometricSetup,
    GradedClass,
    MultidegreePolynomial,
    XSeries,
    evaluate_degree,
    validate_isobaric,
)
from .poly import MultiPoly, RationalExpression, expr_sum, monomial_ring


@dataclass(frozen=True)
class ExponentMatrix:
    """Nonnegative integer exponent rows, one per monomial, plus a pivot row."""

    rows: tuple[tuple[int, ...], ...]
    pivot: int

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], pivot: int | None = None) -> "ExponentMatrix":
        if not rows:
            raise ValidationError("exponent matrix needs at least one row")
        width = len(rows[0])
        if width == 0:
            raise ValidationError("exponent rows must have at least one column")
        if any(len(r) != width for r in rows):
            raise ValidationError("exponent rows of unequal length")
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if value < 0:
                    raise ValidationError(f"rows[{i}][{j}]: negative exponent")
        if pivot is None:
            pivot = len(rows) - 1
        if not 0 <= pivot < len(rows):
            raise ValidationError(f"pivot {pivot} out of range for {len(rows)} rows")
        return ExponentMatrix(tuple(tuple(r) for r in rows), pivot)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def is_square(self) -> bool:
        return len(self.rows) == self.n

    def translated(self) -> list[tuple[int, ...]]:
        return translate_by_pivot(self.rows, self.pivot)

    def with_pivot(self, pivot: int) -> "ExponentMatrix":
        return ExponentMatrix.from_rows(self.rows, pivot)


def outer_region(matrix: ExponentMatrix) -> NewtonOuterRegion:
    """Translated Newton outer region of the map, vertices flagged."""
    return newton_outer_region(matrix.translated())


def triangulated_region(
    matrix: ExponentMatrix, insertion_order: Sequence[int] | None = None
) -> tuple[NewtonOuterRegion, Triangulation]:
    region = outer_region(matrix)
    return region, triangulate(region, insertion_order=insertion_order)


def _simplex_class_subset(simplex: GeneralizedSimplex) -> frozenset[int]:
    # X_T: hypersurfaces whose axis direction is NOT at infinity in T
    return frozenset(range(simplex.dimension)) - simplex.infinite


def multidegree_class(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    insertion_order: Sequence[int] | None = None,
) -> GradedClass:
    """G = sum over simplices of hvol(T) * X_T, truncated at the variety dimension."""
    validate_isobaric(matrix.rows, setup)
    _, tri = triangulated_region(matrix, insertion_order)
    terms: dict[tuple[frozenset[int], int], Fraction] = {}
    for simplex in tri.simplices:
        key = (_simplex_class_subset(simplex), 0)
        terms[key] = terms.get(key, Fraction(0)) + simplex.hvol()
    return GradedClass(setup.dim_v, terms)


def multidegree_polynomial(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    insertion_order: Sequence[int] | None = None,
) -> MultidegreePolynomial:
    gclass = multidegree_class(matrix, setup, insertion_order)
    result = evaluate_degree(gclass, setup, t_grading=True)
    assert isinstance(result, MultidegreePolynomial)
    return result


def symbolic_integral(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    insertion_order: Sequence[int] | None = None,
) -> RationalExpression:
    """Exact symbolic value of the region integral, as a rational expression.

    No class substitution is performed: hypersurface classes, the hyperplane
    class and the codimension grading remain formal variables.
    """
    validate_isobaric(matrix.rows, setup)
    n = matrix.n
    names = monomial_ring(n)
    _, tri = triangulated_region(matrix, insertion_order)
    h = MultiPoly.variable(names, "h")
    t = MultiPoly.variable(names, "t")
    x = [MultiPoly.variable(names, f"X{j + 1}") for j in range(n)]
    contributions = []
    for simplex in tri.simplices:
        num = MultiPoly.constant(names, simplex.hvol())
        for j in sorted(_simplex_class_subset(simplex)):
            num = num * x[j]
        num = num * t ** simplex.rank * h ** (setup.dim_v + 1)
        factors = []
        for v in simplex.finite:
            linear = h
            for j, coeff in enumerate(v):
                if coeff:
                    linear = linear + x[j] * t * coeff
            factors.append((linear, 1))
        contributions.append(RationalExpression.make(num, factors))
    return expr_sum(contributions)


def gamma_from_symbolic(
    expr: RationalExpression, setup: GeometricSetup
) -> MultidegreePolynomial:
    """Recover the multidegree polynomial from the symbolic integral.

    Substitutes each hypersurface class by degree * h; every denominator
    factor then collapses to a power of h because translated vertices lie on
    the weight-zero hyperplane.  Only valid under the proportional model.
    """
    if not setup.proportional:
        raise ValidationError(
            "symbolic-route evaluation requires the generic projective model"
        )
    names = expr.names
    n = len(names) - 2
    h = MultiPoly.variable(names, "h")
    assignment = {f"X{j + 1}": h.scale(setup.degrees[j]) for j in range(n)}
    collapsed = expr.substitute(assignment)
    packed = collapsed.as_poly_over_monomial_denominator()
    if packed is None:
        raise InternalInvariantError(
            "denominator did not collapse to a monomial under class substitution"
        )
    num, den_exp = packed
    if any(den_exp[i] for i in range(n)) or den_exp[n + 1] != 0:
        raise InternalInvariantError("unexpected residual denominator variables")
    h_idx, t_idx = n, n + 1
    gamma: dict[int, Fraction] = {}
    for e, c in num.terms.items():
        if any(e[i] for i in range(n)):
            raise InternalInvariantError("residual hypersurface variable after substitution")
        h_pow = e[h_idx] - den_exp[h_idx]
        ell = e[t_idx]
        # every collapsed term carries exactly h^dim_v: the class monomial
        # contributes h^ell, the explicit h^(dim_v+1), and ell+1 factors h cancel
        if h_pow != setup.dim_v:
            raise InternalInvariantError(
                f"unexpected grading h^{h_pow} t^{ell} in collapsed integral"
            )
        gamma[ell] = gamma.get(ell, Fraction(0)) + c
    out = [Fraction(0)] * (setup.dim_v + 1)
    for ell, c in gamma.items():
        if ell > setup.dim_v:
            continue  # codimension beyond the variety evaluates to zero
        out[ell] = c * setup.deg_v
    ints = []
    for value in out:
        if value.denominator != 1:
            raise InternalInvariantError(f"non-integer multidegree {value}")
        ints.append(value.numerator)
    return MultidegreePolynomial.from_list(ints)


def _region_integral_series(points: Sequence[tuple[int, ...]], cap: int) -> XSeries:
    """Truncated series value of the region integral in untranslated coordinates."""
    n = len(points[0])
    region = newton_outer_region(list(points))
    tri = triangulate(region)
    total = XSeries.zero(n, cap)
    for simplex in tri.simplices:
        term = XSeries.one(n, cap).scale(simplex.hvol())
        for j in sorted(_simplex_class_subset(simplex)):
            term = term * XSeries.linear([1 if i == j else 0 for i in range(n)], cap)
        for v in simplex.finite:
            denom = XSeries.one(n, cap) + XSeries.linear(list(v), cap)
            term = term * denom.geometric_inverse()
        total = total + term
    return total


def segre_class(
    matrix: ExponentMatrix, setup: GeometricSetup
) -> tuple[XSeries, XSeries]:
    """Segre series of the monomial base scheme and its complement class.

    Returns (segre, complement) with complement = [V] - pushforward of the
    Segre class, computed by triangulating the untranslated outer region and
    expanding each per-simplex closed form as a truncated geometric series;
    segre = 1 - complement.
    """
    validate_isobaric(matrix.rows, setup)
    complement = _region_integral_series(list(matrix.rows), setup.dim_v)
    segre = XSeries.one(matrix.n, setup.dim_v) - complement
    return segre, complement


def segre_orthant_normalization(n: int, dim_v: int) -> XSeries:
    """Value of the integral over the whole positive orthant (must be 1)."""
    return _region_integral_series([(0,) * n], dim_v)


@dataclass(frozen=True)
class SimplexRow:
    """One triangulation-table row of the report."""

    finite: tuple[tuple[int, ...], ...]
    infinite: tuple[int, ...]  # 1-based axis labels
    rank: int
    hvol: int
    degree: int

    def to_json_dict(self) -> dict:
        return {
            "finite_vertices": [list(v) for v in self.finite],
            "infinite_directions": list(self.infinite),
            "rank": self.rank,
            "hvol": self.hvol,
            "degree": self.degree,
        }


@dataclass(frozen=True)
class MultidegreeReport:
    """Structured result of the triangulation route."""

    gamma: MultidegreePolynomial
    graded_class: GradedClass
    triangulation: tuple[SimplexRow, ...]
    bundle_degree: int
    base_locus_contribution: int
    dominant: bool
    assumes_transversality: bool
    table_defaults_used: tuple[tuple[int, ...], ...]

    def to_json_dict(self) -> dict:
        return {
            "gamma": list(self.gamma.coefficients),
            "gamma_text": str(self.gamma),
            "multidegree_class": [
                {"subset": list(subset), "h_exp": h_exp, "coeff": str(coeff)}
                for subset, h_exp, coeff in self.graded_class.canonical_terms()
            ],
            "multidegree_class_text": str(self.graded_class),
            "triangulation": [row.to_json_dict() for row in self.triangulation],
            "bundle_degree": self.bundle_degree,
            "base_locus_contribution": self.base_locus_contribution,
            "dominant": self.dominant,
            "assumes_transversality": self.assumes_transversality,
            "table_defaults_used": [list(s) for s in self.table_defaults_used],
        }


def multidegree_report(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    insertion_order: Sequence[int] | None = None,
) -> MultidegreeReport:
    d = validate_isobaric(matrix.rows, setup)
    _, tri = triangulated_region(matrix, insertion_order)
    terms: dict[tuple[frozenset[int], int], Fraction] = {}
    rows = []
    for simplex in tri.simplices:
        subset = _simplex_class_subset(simplex)
        hvol = simplex.hvol()
        key = (subset, 0)
        terms[key] = terms.get(key, Fraction(0)) + hvol
        rows.append(
            SimplexRow(
                finite=simplex.finite,
                infinite=tuple(sorted(j + 1 for j in simplex.infinite)),
                rank=simplex.rank,
                hvol=hvol,
                degree=setup.degree_of(subset),
            )
        )
    gclass = GradedClass(setup.dim_v, terms)
    gamma = evaluate_degree(gclass, setup, t_grading=True)
    assert isinstance(gamma, MultidegreePolynomial)
    top = gamma.coefficient(setup.dim_v)
    return MultidegreeReport(
        gamma=gamma,
        graded_class=gclass,
        triangulation=tuple(rows),
        bundle_degree=d,
        base_locus_contribution=d**setup.dim_v * setup.deg_v - top,
        dominant=top > 0,
        assumes_transversality=True,
        table_defaults_used=tuple(
            tuple(sorted(j + 1 for j in s)) for s in setup.defaulted
        ),
    )
