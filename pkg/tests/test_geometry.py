import random
from fractions import Fraction

import pytest

from exact2d import clipped_region_area
from multideg.errors import ValidationError
from multideg.geometry import (
    GeneralizedSimplex,
    brute_force_region_contains,
    newton_outer_region,
    outer_region_contains,
    project,
    region_vertex_flags,
    translate_by_pivot,
    triangulate,
    triangulation_covers,
)

PLANE_MAP_ROWS = [(0, 1, 2), (2, 0, 2), (3, 1, 1)]
PLANE_MAP_TRANSLATED = [(-3, 0, 1), (-1, -1, 1), (0, 0, 0)]


def test_translate_golden():
    assert translate_by_pivot(PLANE_MAP_ROWS, 2) == PLANE_MAP_TRANSLATED


def test_translate_pivot_at_origin_is_identity():
    pts = [(0, 0), (2, 1), (1, 3)]
    assert translate_by_pivot(pts, 0) == pts


def test_translate_composes_like_a_group_action():
    rng = random.Random(2)
    pts = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(5)]
    once = translate_by_pivot(pts, 1)
    twice = translate_by_pivot(once, 3)
    assert twice == translate_by_pivot(pts, 3)


def test_project_golden():
    assert project([(1, 1, 0)], [2]) == [(1, 1)]


def test_project_empty_index_set_is_identity():
    pts = [(1, 2, 3), (4, 5, 6)]
    assert project(pts, []) == pts


def test_project_composition():
    pts = [(1, 2, 3, 4), (5, 6, 7, 8)]
    # dropping {1} then (in the smaller frame) {2} == dropping {1, 3} at once
    assert project(project(pts, [1]), [2]) == project(pts, [1, 3])


def test_outer_region_contains_goldens():
    gens = [(0, 1), (1, 0)]
    assert outer_region_contains(gens, (1, 1))
    assert not outer_region_contains(gens, (0, 0))
    assert outer_region_contains(gens, (0, 1))


def test_vertex_flags_plane_map():
    assert region_vertex_flags(PLANE_MAP_TRANSLATED) == [True, True, True]


def test_vertex_flags_domination():
    assert region_vertex_flags([(0, 0), (1, 1)]) == [True, False]


def test_vertex_flags_duplicates_keep_one_copy():
    flags = region_vertex_flags([(0, 0), (0, 0), (2, -1)])
    assert flags == [True, False, True]


def test_membership_matches_brute_force_oracle():
    rng = random.Random(99)
    for _ in range(40):
        dim = rng.choice((2, 3))
        gens = [
            tuple(rng.randint(-3, 3) for _ in range(dim))
            for _ in range(rng.randint(1, 4))
        ]
        p = tuple(rng.randint(-4, 4) for _ in range(dim))
        assert outer_region_contains(gens, p) == brute_force_region_contains(gens, p)


def test_vertex_flags_match_brute_force_oracle():
    rng = random.Random(7)
    for _ in range(20):
        dim = rng.choice((2, 3))
        pts = list(
            {tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(rng.randint(2, 5))}
        )
        flags = region_vertex_flags(pts)
        for p, flag in zip(pts, flags):
            others = [q for q in pts if q != p]
            expected = not (others and brute_force_region_contains(others, p))
            assert flag == expected


def test_vertex_flags_permutation_invariant():
    rng = random.Random(13)
    pts = [(-3, 0, 1), (-1, -1, 1), (0, 0, 0), (1, 1, 1)]
    base = region_vertex_flags(pts)
    order = list(range(len(pts)))
    rng.shuffle(order)
    permuted = region_vertex_flags([pts[i] for i in order])
    assert [base[i] for i in order] == permuted


def test_triangulate_plane_map_structure():
    region = newton_outer_region(PLANE_MAP_TRANSLATED)
    tri = triangulate(region)
    assert sorted(s.rank for s in tri.simplices) == [0, 1, 1, 2]
    # exactly one simplex spans the full orthant cone at a vertex
    assert sum(1 for s in tri.simplices if s.rank == 0) == 1
    for s in tri.simplices:
        assert len(s.finite) + len(s.infinite) == region.dimension + 1
        assert not s.degenerate
        for v in s.finite:
            assert v in region.vertices


def test_triangulate_single_generator_at_origin():
    region = newton_outer_region([(0, 0, 0)])
    tri = triangulate(region)
    assert len(tri.simplices) == 1
    only = tri.simplices[0]
    assert only.rank == 0
    assert only.hvol() == 1
    assert only.infinite == frozenset({0, 1, 2})


def test_triangulation_union_matches_region_membership():
    rng = random.Random(101)
    for _ in range(12):
        dim = rng.choice((2, 3))
        pts = list(
            {tuple(rng.randint(-3, 3) for _ in range(dim)) for _ in range(rng.randint(1, 5))}
        )
        region = newton_outer_region(pts)
        tri = triangulate(region)
        samples = [
            tuple(Fraction(rng.randint(-40, 60), 10) for _ in range(dim))
            for _ in range(25)
        ]
        assert triangulation_covers(tri, region, samples)


def test_triangulation_insertion_order_still_covers():
    region = newton_outer_region(PLANE_MAP_TRANSLATED)
    gens = len(region.vertices) + region.dimension
    rng = random.Random(5)
    order = list(range(gens))
    rng.shuffle(order)
    tri = triangulate(region, insertion_order=order)
    samples = [
        tuple(Fraction(rng.randint(-40, 60), 10) for _ in range(3)) for _ in range(30)
    ]
    assert triangulation_covers(tri, region, samples)


def test_volume_conservation_in_a_box_2d():
    # Sum of clipped simplex areas equals the clipped region area, exactly.
    rng = random.Random(55)
    lo, hi = -6, 12
    for _ in range(10):
        pts = list(
            {tuple(rng.randint(-5, 5) for _ in range(2)) for _ in range(rng.randint(1, 5))}
        )
        region = newton_outer_region(pts)
        tri = triangulate(region)
        reach = 10 * (hi - lo + 12)
        total = Fraction(0)
        for s in tri.simplices:
            rays = [
                tuple(int(i == j) for i in range(2)) for j in sorted(s.infinite)
            ]
            total += clipped_region_area([tuple(v) for v in s.finite], rays, lo, hi, reach)
        axis_rays = [(1, 0), (0, 1)]
        expected = clipped_region_area(
            [tuple(v) for v in region.vertices], axis_rays, lo, hi, reach
        )
        assert total == expected


def test_hvol_goldens():
    a, b, c = PLANE_MAP_TRANSLATED
    t2 = GeneralizedSimplex((a, c), frozenset({1, 2}))
    assert (t2.rank, t2.hvol()) == (1, 3)
    t4 = GeneralizedSimplex((a, b, c), frozenset({0}))
    assert (t4.rank, t4.hvol()) == (2, 1)


def test_hvol_degenerate_repeated_vertex():
    s = GeneralizedSimplex(((0, 0, 1), (0, 0, 1)), frozenset({0, 1}))
    assert s.hvol() == 0
    assert s.degenerate


def test_hvol_relabeling_and_translation_invariance():
    rng = random.Random(77)
    for _ in range(10):
        verts = [tuple(rng.randint(-4, 4) for _ in range(3)) for _ in range(3)]
        s = GeneralizedSimplex(tuple(verts), frozenset({1}))
        shuffled = verts[:]
        rng.shuffle(shuffled)
        assert GeneralizedSimplex(tuple(shuffled), frozenset({1})).hvol() == s.hvol()
        shift = tuple(rng.randint(-3, 3) for _ in range(3))
        moved = tuple(tuple(v + d for v, d in zip(vert, shift)) for vert in verts)
        assert GeneralizedSimplex(moved, frozenset({1})).hvol() == s.hvol()


def test_simplex_contains_exact():
    s = GeneralizedSimplex(((0, 0), (2, -2)), frozenset({0}))
    assert s.contains((Fraction(1), Fraction(-1)))
    assert s.contains((Fraction(5), Fraction(-1)))  # pushed along the ray
    assert not s.contains((Fraction(0), Fraction(-1)))


def test_empty_points_rejected():
    with pytest.raises(ValidationError):
        region_vertex_flags([])
