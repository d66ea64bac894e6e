import itertools
import random
from fractions import Fraction

import pytest

from exact2d import clipped_region_area
from instances import well_presented_instances
from multideg.engine import ExponentMatrix, multidegree_polynomial
from multideg.errors import NonSquareError, NotWellPresentedError
from multideg.geometry import newton_outer_region, triangulate
from multideg.intersection import projective_space_setup
from multideg.poly import MultiPoly, charpoly, monomial_ring
from multideg.wellpresented import (
    TorusMap,
    charpoly_factorization_check,
    check_well_presented,
    homogenize_torus,
    multidegree_via_charpoly,
    multidegree_via_prechar,
    newton_decomposition,
    prechar_class,
    principal_minor,
    reduced_scaled_matrix,
    scaled_matrix,
    torus_multidegrees,
    translated_scaled_matrix,
)

PLANE_MAP = ExponentMatrix.from_rows([[0, 1, 2], [2, 0, 2], [3, 1, 1]])
PLANE_SETUP = projective_space_setup(2, [1, 2, 3])
CREMONA3 = ExponentMatrix.from_rows([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
CREMONA_SETUP = projective_space_setup(2, [1, 1, 1])
IDENTITY3 = ExponentMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def test_cremona_is_well_presented():
    assert check_well_presented(CREMONA3).ok


def test_plane_map_is_well_presented():
    assert check_well_presented(PLANE_MAP).ok


def test_identity_fails_with_last_singleton_cited_in_both_lists():
    report = check_well_presented(IDENTITY3)
    assert not report.ok
    assert ((2,), 2) in report.projection_violations
    assert ((2,), 1, -1) in report.sign_violations


def test_non_square_rejected():
    wide = ExponentMatrix.from_rows([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(NonSquareError):
        check_well_presented(wide)


def test_well_presented_invariant_under_simultaneous_permutation():
    rng = random.Random(3)
    for matrix in (CREMONA3, PLANE_MAP, IDENTITY3):
        n = matrix.n
        perm = list(range(n))
        rng.shuffle(perm)
        permuted = ExponentMatrix.from_rows(
            [[matrix.rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        )
        assert check_well_presented(permuted).ok == check_well_presented(matrix).ok


def test_newton_decomposition_cremona():
    parts = newton_decomposition(CREMONA3)
    assert len(parts) == 7
    degenerate = [s for s in parts if s.degenerate]
    assert len(degenerate) == 3
    assert sorted(s.hvol() for s in parts) == [0, 0, 0, 1, 1, 1, 2]


def test_newton_decomposition_one_dimensional():
    m = ExponentMatrix.from_rows([[4]])
    parts = newton_decomposition(m)
    assert len(parts) == 1
    (seg,) = parts
    assert seg.finite == ((0,), (4,))
    assert seg.infinite == frozenset()
    assert seg.hvol() == 4


def test_newton_decomposition_requires_well_presented():
    with pytest.raises(NotWellPresentedError):
        newton_decomposition(IDENTITY3)


def test_decomposition_volume_identity_per_subset():
    # hvol of the subset simplex equals the signed principal minor
    for matrix in (CREMONA3, PLANE_MAP):
        n = matrix.n
        for size in range(n):
            for subset in itertools.combinations(range(n), size):
                minor = principal_minor(matrix.rows, subset)
                finite = ((0,) * n,) + tuple(
                    matrix.rows[k] for k in range(n) if k not in set(subset)
                )
                from multideg.geometry import GeneralizedSimplex

                hv = GeneralizedSimplex(finite, frozenset(subset)).hvol()
                if minor != 0:
                    assert hv == (-1) ** (n - 1 - size) * minor
                else:
                    assert hv == 0


def test_decomposition_area_bookkeeping_2d():
    # complement-of-outer-region area inside a box equals the summed simplex areas
    rng = random.Random(31)
    checked = 0
    lo, hi = 0, 16
    while checked < 8:
        w = rng.randint(1, 4)
        rows = []
        for _ in range(2):
            row = [0, 0]
            for _ in range(w):
                row[rng.randrange(2)] += 1
            rows.append(row)
        matrix = ExponentMatrix.from_rows(rows)
        if not check_well_presented(matrix).ok:
            continue
        checked += 1
        reach = 10 * (hi + 10)
        total = Fraction(0)
        for s in newton_decomposition(matrix):
            rays = [tuple(int(i == j) for i in range(2)) for j in sorted(s.infinite)]
            total += clipped_region_area([tuple(v) for v in s.finite], rays, lo, hi, reach)
        region = newton_outer_region(list(matrix.rows))
        outer = clipped_region_area(
            [tuple(v) for v in region.vertices], [(1, 0), (0, 1)], lo, hi, reach
        )
        orthant = Fraction((hi - lo) ** 2)
        assert total == orthant - outer


def test_translated_scaled_matrix_golden():
    names = monomial_ring(3)
    x1, x2, x3 = (MultiPoly.variable(names, f"X{j}") for j in (1, 2, 3))
    zero = MultiPoly.zero(names)
    assert translated_scaled_matrix(PLANE_MAP) == [
        [x1.scale(-3), zero, x3],
        [-x1, -x2, x3],
        [zero, zero, zero],
    ]


def test_pivot_row_of_translated_matrix_is_zero():
    rng = random.Random(9)
    for matrix, _ in well_presented_instances(seed=5, count=5):
        pivot = rng.randrange(matrix.n)
        rows = translated_scaled_matrix(matrix, pivot)
        assert all(entry.is_zero() for entry in rows[pivot])


def test_charpoly_of_translated_equals_t_times_reduced():
    rng = random.Random(14)
    names_cache = {}
    for matrix, _ in well_presented_instances(seed=6, count=8):
        n = matrix.n
        names = names_cache.setdefault(n, monomial_ring(n))
        t = MultiPoly.variable(names, "t")
        pivot = rng.randrange(n)
        full = charpoly(translated_scaled_matrix(matrix, pivot))
        reduced = reduced_scaled_matrix(matrix, pivot)
        if reduced:
            expected = t * charpoly(reduced)
        else:
            expected = t
        assert full == expected


def test_minor_expansion_identity_symbolically():
    # det(t*I - scaled matrix) as a signed sum of principal minors
    rng = random.Random(18)
    for n in (2, 3, 4, 5):
        names = monomial_ring(n)
        t = MultiPoly.variable(names, "t")
        x = [MultiPoly.variable(names, f"X{j + 1}") for j in range(n)]
        rows = [[rng.randint(0, 3) for _ in range(n)] for _ in range(n)]
        matrix = ExponentMatrix.from_rows(rows)
        lhs = charpoly(scaled_matrix(matrix))
        rhs = MultiPoly.zero(names)
        for size in range(n + 1):
            for subset in itertools.combinations(range(n), size):
                minor = principal_minor(rows, subset) if size < n else 1
                term = MultiPoly.constant(names, minor).scale(
                    (-1) ** (n - size)
                ) * t**size
                for k in range(n):
                    if k not in set(subset):
                        term = term * x[k]
                rhs = rhs + term
        assert lhs == rhs


def test_charpoly_route_plane_map():
    assert multidegree_via_charpoly(PLANE_MAP, PLANE_SETUP).coefficients == (1, 5, 6)


def test_charpoly_route_cremona_family():
    import math

    for n in range(3, 7):
        rows = [[1 - (i == j) for j in range(n)] for i in range(n)]
        matrix = ExponentMatrix.from_rows(rows)
        setup = projective_space_setup(n - 1, [1] * n)
        gamma = multidegree_via_charpoly(matrix, setup)
        assert gamma.coefficients == tuple(math.comb(n - 1, k) for k in range(n))


def test_charpoly_route_requires_well_presented_unless_forced():
    setup = projective_space_setup(2, [1, 1, 1])
    with pytest.raises(NotWellPresentedError):
        multidegree_via_charpoly(IDENTITY3, setup)
    forced = multidegree_via_charpoly(IDENTITY3, setup, force=True)
    # outside the well-presented regime the formal coefficients are wrong for
    # the actual map (true value (1,1,1)); forcing exposes exactly that
    assert forced.coefficients == (1, -2, 1)


def test_prechar_route_goldens():
    assert multidegree_via_prechar(PLANE_MAP, PLANE_SETUP).coefficients == (1, 5, 6)
    assert multidegree_via_prechar(CREMONA3, CREMONA_SETUP).coefficients == (1, 2, 1)


def test_prechar_trivial_single_class():
    m = ExponentMatrix.from_rows([[0]])
    setup = projective_space_setup(0, [1])
    assert check_well_presented(m).ok
    series = prechar_class(m, setup)
    assert [v for v in series.evaluate(setup)] == [Fraction(1)]


def test_route_equivalence_on_random_well_presented_instances():
    for matrix, setup in well_presented_instances(seed=2026, count=25):
        expected = multidegree_polynomial(matrix, setup)
        assert multidegree_via_charpoly(matrix, setup) == expected
        assert multidegree_via_prechar(matrix, setup) == expected


def test_homogenize_torus_golden():
    torus = TorusMap.from_rows([[-1, 0, 1], [0, -2, 0], [0, 1, 1]])
    assert homogenize_torus(torus).rows == (
        (0, 2, 1, 2),
        (1, 0, 0, 4),
        (1, 3, 1, 0),
        (1, 2, 0, 2),
    )


def test_homogenize_negated_identity_is_cremona():
    torus = TorusMap.from_rows([[-1, 0], [0, -1]])
    assert homogenize_torus(torus).rows == CREMONA3.rows


def test_homogenize_is_isobaric_and_shift_canonical():
    rng = random.Random(21)
    for _ in range(15):
        k = rng.randint(1, 4)
        torus = TorusMap.from_rows(
            [[rng.randint(-3, 3) for _ in range(k)] for _ in range(k)]
        )
        matrix = homogenize_torus(torus)
        sums = {sum(row) for row in matrix.rows}
        assert len(sums) == 1  # isobaric with unit degrees
        for j in range(matrix.n):
            assert min(row[j] for row in matrix.rows) == 0


def test_homogenize_shift_invariance_of_multidegrees():
    # multiplying every monomial by a common factor shifts all rows equally
    # and never changes the evaluated multidegrees
    rng = random.Random(33)
    for _ in range(6):
        k = rng.randint(1, 3)
        torus = TorusMap.from_rows(
            [[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)]
        )
        matrix = homogenize_torus(torus)
        shift = [rng.randint(0, 3) for _ in range(matrix.n)]
        shifted = ExponentMatrix.from_rows(
            [[v + s for v, s in zip(row, shift)] for row in matrix.rows]
        )
        setup = projective_space_setup(matrix.n - 1, [1] * matrix.n)
        assert multidegree_polynomial(matrix, setup) == multidegree_polynomial(
            shifted, setup
        )


def test_torus_multidegrees_binomials():
    import math

    for k in (2, 3, 4, 5):
        torus = TorusMap.from_rows([[-(i == j) for j in range(k)] for i in range(k)])
        gamma = torus_multidegrees(torus)
        assert gamma.coefficients == tuple(math.comb(k, ell) for ell in range(k + 1))


def test_torus_zero_matrix_gives_constant():
    torus = TorusMap.from_rows([[0]])
    assert torus_multidegrees(torus).coefficients == (1,)


def test_torus_route_requires_well_presented():
    # the power map squares every coordinate; its homogenization fails the check
    torus = TorusMap.from_rows([[2, 0], [0, 2]])
    with pytest.raises(NotWellPresentedError):
        torus_multidegrees(torus)


def test_torus_route_matches_triangulation_and_determinant():
    rng = random.Random(2027)
    checked = 0
    while checked < 12:
        k = rng.randint(1, 4)
        torus = TorusMap.from_rows(
            [[rng.randint(-2, 2) for _ in range(k)] for _ in range(k)]
        )
        matrix = homogenize_torus(torus)
        if not check_well_presented(matrix).ok:
            continue
        checked += 1
        gamma = torus_multidegrees(torus)
        setup = projective_space_setup(k, [1] * (k + 1))
        assert gamma == multidegree_polynomial(matrix, setup)
        det_a = principal_minor(torus.exponents, ())
        assert gamma.coefficient(k) == (-1) ** k * det_a


def test_factorization_identity_on_goldens():
    assert charpoly_factorization_check(CREMONA3, samples=20, seed=1)
    assert charpoly_factorization_check(PLANE_MAP, samples=20, seed=1)
    diagonal = ExponentMatrix.from_rows([[2, 0], [0, 2]])
    assert charpoly_factorization_check(diagonal, samples=10, seed=1)
