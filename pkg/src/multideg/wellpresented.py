"""Well-presented maps: minor signs, projections, and char-poly shortcuts.

For a square exponent matrix (one monomial per hypersurface), the map is
well-presented when, for every proper subset I of the hypersurface indices,

* each row indexed by I projects (along the I directions) into the outer
  region spanned by the projections of the remaining rows, and
* the principal minor obtained by deleting the I rows and columns is zero or
  has sign (-1)^(n-1-|I|).

Under these conditions the Newton region decomposes into explicit simplices
indexed by proper subsets, and the multidegree polynomial can be read off
the characteristic polynomial of the matrix of translated rows scaled by the
hypersurface classes.  Torus endomorphism matrices (integer exponents, signs
allowed) are handled by homogenizing into a square nonnegative matrix first.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .engine import ExponentMatrix
from .errors import (
    InternalInvariantError,
    NonSquareError,
    NotWellPresentedError,
    PowerEvaluationError,
    ValidationError,
)
from .geometry import GeneralizedSimplex, outer_region_contains, project
from .intersection import (
    GeometricSetup,
    MultidegreePolynomial,
    XSeries,
)
from .poly import MultiPoly, charpoly, det, monomial_ring


@dataclass(frozen=True)
class WellPresentedReport:
    """Outcome of the subset sweep; ok iff both violation lists are empty."""

    n: int
    projection_violations: tuple[tuple[tuple[int, ...], int], ...]
    sign_violations: tuple[tuple[tuple[int, ...], int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.projection_violations and not self.sign_violations

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "projection_violations": [
                {"I": [i + 1 for i in subset], "row": row + 1}
                for subset, row in self.projection_violations
            ],
            "sign_violations": [
                {"I": [i + 1 for i in subset], "det": minor, "required_sign": sign}
                for subset, minor, sign in self.sign_violations
            ],
        }


def _require_square(matrix: ExponentMatrix) -> int:
    n = matrix.n
    if len(matrix.rows) != n:
        raise NonSquareError(
            f"well-presentedness needs a square matrix; got {len(matrix.rows)} rows "
            f"of width {n}"
        )
    return n


def _int_det(rows: Sequence[Sequence[int]]) -> int:
    size = len(rows)
    if size == 0:
        return 1
    m = [[Fraction(v) for v in row] for row in rows]
    det_val = Fraction(1)
    for k in range(size):
        pivot = next((r for r in range(k, size) if m[r][k] != 0), None)
        if pivot is None:
            return 0
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            det_val = -det_val
        det_val *= m[k][k]
        inv = 1 / m[k][k]
        for r in range(k + 1, size):
            if m[r][k] != 0:
                f = m[r][k] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    assert det_val.denominator == 1
    return det_val.numerator


def principal_minor(rows: Sequence[Sequence[int]], removed: Sequence[int]) -> int:
    """Determinant after deleting the given rows and columns (0-based)."""
    removed_set = set(removed)
    keep = [i for i in range(len(rows)) if i not in removed_set]
    sub = [[rows[i][j] for j in keep] for i in keep]
    return _int_det(sub)


def check_well_presented(matrix: ExponentMatrix) -> WellPresentedReport:
    """Sweep every proper index subset; untranslated rows throughout."""
    n = _require_square(matrix)
    rows = matrix.rows
    projection_violations = []
    sign_violations = []
    for size in range(n):
        for subset in itertools.combinations(range(n), size):
            sset = set(subset)
            minor = principal_minor(rows, subset)
            required = (-1) ** (n - 1 - size)
            if minor != 0 and (1 if minor > 0 else -1) != required:
                sign_violations.append((subset, minor, required))
            if subset:
                outside = [rows[k] for k in range(n) if k not in sset]
                projected_outside = project(outside, sset)
                for i in subset:
                    projected_row = project([rows[i]], sset)[0]
                    if not outer_region_contains(projected_outside, projected_row):
                        projection_violations.append((subset, i))
    return WellPresentedReport(
        n=n,
        projection_violations=tuple(sorted(projection_violations)),
        sign_violations=tuple(sorted(sign_violations)),
    )


def require_well_presented(matrix: ExponentMatrix) -> WellPresentedReport:
    report = check_well_presented(matrix)
    if not report.ok:
        raise NotWellPresentedError(
            "map is not well-presented; rerun with force to compute anyway",
            report=report,
        )
    return report


def newton_decomposition(matrix: ExponentMatrix) -> list[GeneralizedSimplex]:
    """Decompose the Newton region into one simplex per proper index subset.

    Subset I yields the simplex with infinite vertices along the I axes and
    finite vertices at the origin plus the rows outside I.  Degenerate
    (volume-zero) simplices are retained; callers may filter on .degenerate.
    """
    n = _require_square(matrix)
    require_well_presented(matrix)
    origin = (0,) * n
    out = []
    for size in range(n):
        for subset in itertools.combinations(range(n), size):
            finite = (origin,) + tuple(
                matrix.rows[k] for k in range(n) if k not in set(subset)
            )
            out.append(GeneralizedSimplex(finite, frozenset(subset)))
    return out


def scaled_matrix(matrix: ExponentMatrix) -> list[list[MultiPoly]]:
    """Rows scaled columnwise by the hypersurface variables: entry m_ij * X_j."""
    n = matrix.n
    names = monomial_ring(n)
    x = [MultiPoly.variable(names, f"X{j + 1}") for j in range(n)]
    return [[x[j].scale(matrix.rows[i][j]) for j in range(n)] for i in range(len(matrix.rows))]


def translated_scaled_matrix(
    matrix: ExponentMatrix, pivot: int | None = None
) -> list[list[MultiPoly]]:
    """Entries (m_ij - m_pivot,j) * X_j; the pivot row becomes zero."""
    n = _require_square(matrix)
    pivot = matrix.pivot if pivot is None else pivot
    names = monomial_ring(n)
    x = [MultiPoly.variable(names, f"X{j + 1}") for j in range(n)]
    base = matrix.rows[pivot]
    return [
        [x[j].scale(matrix.rows[i][j] - base[j]) for j in range(n)]
        for i in range(n)
    ]


def reduced_scaled_matrix(
    matrix: ExponentMatrix, pivot: int | None = None
) -> list[list[MultiPoly]]:
    """Translated scaled matrix with the pivot row and column removed."""
    n = _require_square(matrix)
    pivot = matrix.pivot if pivot is None else pivot
    full = translated_scaled_matrix(matrix, pivot)
    keep = [i for i in range(n) if i != pivot]
    return [[full[i][j] for j in keep] for i in keep]


def multidegree_via_charpoly(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    pivot: int | None = None,
    force: bool = False,
) -> MultidegreePolynomial:
    """Read the multidegrees off det(t*I - translated scaled matrix).

    The coefficient of t^(n-ell) is a squarefree multilinear form of degree
    ell in the hypersurface classes (a signed sum of principal minors), so it
    evaluates directly through the intersection oracle; codimensions beyond
    the variety dimension are truncated away.
    """
    n = _require_square(matrix)
    if not force:
        require_well_presented(matrix)
    cp = charpoly(translated_scaled_matrix(matrix, pivot))
    by_t = cp.coefficients_in("t")
    gamma = [Fraction(0)] * (setup.dim_v + 1)
    for ell in range(min(setup.dim_v, n) + 1):
        coeff_poly = by_t.get(n - ell)
        if coeff_poly is None:
            continue
        for e, c in coeff_poly.terms.items():
            if any(k > 1 for k in e[:n]) or e[n] or e[n + 1]:
                raise InternalInvariantError("charpoly coefficient not squarefree")
            subset = frozenset(j for j in range(n) if e[j])
            if len(subset) != ell:
                raise InternalInvariantError("charpoly coefficient of wrong degree")
            gamma[ell] += c * setup.degree_of(subset)
    ints = []
    for value in gamma:
        if value.denominator != 1:
            raise InternalInvariantError(f"non-integer multidegree {value}")
        ints.append(value.numerator)
    return MultidegreePolynomial.from_list(ints)


def prechar_class(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    pivot: int | None = None,
    force: bool = False,
) -> XSeries:
    """Signed principal-minor sum twisted by the dual bundle's total class.

    Expands 1/(1 - c1) with c1 = pivot-row weighted sum of the hypersurface
    classes, multiplies into sum over all subsets I of
    (-1)^(n-|I|) det(minor_I) * prod_{k not in I} X_k, and truncates at the
    variety dimension.  Repeated factors appear, so numeric evaluation needs
    the proportional model.
    """
    n = _require_square(matrix)
    if not force:
        require_well_presented(matrix)
    pivot = matrix.pivot if pivot is None else pivot
    cap = setup.dim_v
    minor_sum = XSeries.zero(n, cap)
    for size in range(n + 1):
        for subset in itertools.combinations(range(n), size):
            minor = principal_minor(matrix.rows, subset) if size < n else 1
            if minor == 0:
                continue
            sign = (-1) ** (n - size)
            exps = tuple(0 if j in set(subset) else 1 for j in range(n))
            term = XSeries(n, cap, {exps: Fraction(sign * minor)})
            minor_sum = minor_sum + term
    c1 = XSeries.linear(list(matrix.rows[pivot]), cap)
    dual_inverse = (XSeries.one(n, cap) - c1).geometric_inverse()
    return dual_inverse * minor_sum


def multidegree_via_prechar(
    matrix: ExponentMatrix,
    setup: GeometricSetup,
    pivot: int | None = None,
    force: bool = False,
) -> MultidegreePolynomial:
    series = prechar_class(matrix, setup, pivot, force)
    values = series.evaluate(setup)
    ints = []
    for value in values:
        if value.denominator != 1:
            raise InternalInvariantError(f"non-integer multidegree {value}")
        ints.append(value.numerator)
    return MultidegreePolynomial.from_list(ints)


@dataclass(frozen=True)
class TorusMap:
    """Integer exponent matrix of a monomial torus endomorphism."""

    exponents: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "TorusMap":
        if not rows:
            raise ValidationError("torus matrix needs at least one row")
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise ValidationError("torus exponent matrix must be square")
        return TorusMap(tuple(tuple(r) for r in rows))

    @property
    def k(self) -> int:
        return len(self.exponents)


def homogenize_torus(torus: TorusMap) -> ExponentMatrix:
    """Homogenize a torus endomorphism into a square nonnegative exponent matrix.

    Each monomial gains a power of the extra coordinate making it degree
    zero, a trailing constant-monomial row is appended, and the columnwise
    minimum is subtracted: the canonical shift-minimal representative (every
    column touches zero).
    """
    k = torus.k
    n = k + 1
    rows = [list(r) + [-sum(r)] for r in torus.exponents]
    rows.append([0] * n)
    mins = [min(rows[i][j] for i in range(n)) for j in range(n)]
    shifted = [[rows[i][j] - mins[j] for j in range(n)] for i in range(n)]
    return ExponentMatrix.from_rows(shifted)


def torus_multidegrees(torus: TorusMap) -> MultidegreePolynomial:
    """Multidegrees of the homogenized map: coefficients of det(I - t*A).

    Requires the homogenization to be well-presented.
    """
    matrix = homogenize_torus(torus)
    require_well_presented(matrix)
    k = torus.k
    names = ("t",)
    t = MultiPoly.variable(names, "t")
    entries = [
        [
            MultiPoly.constant(names, int(i == j)) - t.scale(torus.exponents[i][j])
            for j in range(k)
        ]
        for i in range(k)
    ]
    p = det(entries)
    coeffs = [Fraction(0)] * (k + 1)
    for e, c in p.terms.items():
        coeffs[e[0]] += c
    ints = []
    for value in coeffs:
        if value.denominator != 1:
            raise InternalInvariantError("non-integer torus multidegree")
        ints.append(value.numerator)
    return MultidegreePolynomial.from_list(ints)


def charpoly_factorization_check(
    matrix: ExponentMatrix,
    samples: int = 20,
    seed: int = 0,
    pivot: int | None = None,
) -> bool:
    """Verify det(t*I - M(X)) = (t - c1) * det(t*I - reduced M(X)) on samples.

    Samples are random rational class vectors satisfying the defining
    constraint that every row has the same weighted value c1 (the matrix of
    row differences annihilates the vector); on that locus the full scaled
    matrix has the all-ones eigenvector with eigenvalue c1.
    """
    n = _require_square(matrix)
    pivot = matrix.pivot if pivot is None else pivot
    rng = random.Random(seed)
    base = matrix.rows[pivot]
    diff_rows = [
        [Fraction(matrix.rows[i][j] - base[j]) for j in range(n)]
        for i in range(len(matrix.rows))
        if i != pivot
    ]
    basis = _nullspace_basis(diff_rows, n)
    if not basis:
        raise InternalInvariantError("constraint system has no solutions")
    names = ("t",)
    t = MultiPoly.variable(names, "t")
    for _ in range(samples):
        x = [Fraction(0)] * n
        while all(v == 0 for v in x):
            weights = [Fraction(rng.randint(-9, 9)) for _ in basis]
            x = [
                sum((w * b[j] for w, b in zip(weights, basis)), Fraction(0))
                for j in range(n)
            ]
        c1 = sum((Fraction(base[j]) * x[j] for j in range(n)), Fraction(0))
        full = [
            [
                (t - Fraction(matrix.rows[i][j]) * x[j])
                if i == j
                else MultiPoly.constant(names, -Fraction(matrix.rows[i][j]) * x[j])
                for j in range(n)
            ]
            for i in range(n)
        ]
        lhs = det(full)
        keep = [i for i in range(n) if i != pivot]
        if keep:
            reduced = [
                [
                    (t - (Fraction(matrix.rows[i][j] - base[j]) * x[j]))
                    if i == j
                    else MultiPoly.constant(
                        names, -(Fraction(matrix.rows[i][j] - base[j]) * x[j])
                    )
                    for j in keep
                ]
                for i in keep
            ]
            rhs = (t - MultiPoly.constant(names, c1)) * det(reduced)
        else:
            rhs = t - MultiPoly.constant(names, c1)
        if lhs != rhs:
            return False
    return True


def _nullspace_basis(rows: list[list[Fraction]], width: int) -> list[list[Fraction]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    row = 0
    for col in range(width):
        pivot_row = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    basis = []
    for free in (c for c in range(width) if c not in pivots):
        vec = [Fraction(0)] * width
        vec[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -m[r][free]
        basis.append(vec)
    return basis
