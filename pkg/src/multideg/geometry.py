"""Lattice-point combinatorics of Newton outer regions.

A region is ``conv(generators) + nonnegative orthant`` for a finite set of
integer points (translated exponent vectors, so coordinates may be negative).
This module answers membership and vertex questions exactly, and produces a
deterministic triangulation into generalized simplices: convex spans of s+1
finite lattice points together with n-s coordinate directions at infinity.

Triangulation strategy: homogenize to the cone in dimension n+1 generated by
``(v, 1)`` for each region vertex and ``(e_j, 0)`` for each axis direction,
then run an incremental placing (beneath-beyond) construction with a fixed
insertion order.  Full-dimensional simplicial cones map back to generalized
simplices; the construction never emits degenerate cells.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import ValidationError

Point = tuple[int, ...]


def _check_dimensions(points: Sequence[Point]) -> int:
    if not points:
        raise ValidationError("empty point list")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise ValidationError("points of mixed dimension")
    return n


def translate_by_pivot(points: Sequence[Point], pivot: int) -> list[Point]:
    """Subtract the pivot point from every point; the pivot maps to the origin."""
    _check_dimensions(points)
    if not 0 <= pivot < len(points):
        raise ValidationError(f"pivot index {pivot} out of range")
    base = points[pivot]
    return [tuple(a - b for a, b in zip(p, base)) for p in points]


def project(points: Sequence[Point], removed: Iterable[int]) -> list[Point]:
    """Drop the coordinates with (0-based) indices in ``removed``."""
    n = _check_dimensions(points)
    removed = set(removed)
    if any(i < 0 or i >= n for i in removed):
        raise ValidationError("projection index out of range")
    keep = [i for i in range(n) if i not in removed]
    return [tuple(p[i] for i in keep) for p in points]


def outer_region_contains(generators: Sequence[Point], point: Point) -> bool:
    """Exact test for ``point in conv(generators) + nonnegative orthant``.

    Feasibility of: lambda >= 0, sum(lambda) = 1, sum(lambda_k q_k) <= point
    componentwise, decided by an exact phase-1 simplex.
    """
    n = _check_dimensions(generators)
    if len(point) != n:
        raise ValidationError("point dimension mismatch")
    m = len(generators)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(n):
        # sum_k lambda_k q_ki + s_i = p_i
        rows.append(
            [Fraction(q[i]) for q in generators]
            + [Fraction(int(i == j)) for j in range(n)]
        )
        rhs.append(Fraction(point[i]))
    rows.append([Fraction(1)] * m + [Fraction(0)] * n)
    rhs.append(Fraction(1))
    return lp.feasible(rows, rhs)


def region_vertex_flags(points: Sequence[Point]) -> list[bool]:
    """Flag which input points are vertices of conv(points) + orthant.

    Duplicate points are flagged at their first occurrence only, so dropping
    all unflagged points never loses a vertex of the region.
    """
    _check_dimensions(points)
    first_index: dict[Point, int] = {}
    for i, p in enumerate(points):
        first_index.setdefault(p, i)
    unique = list(first_index)
    flags = [False] * len(points)
    for p in unique:
        others = [q for q in unique if q != p]
        if not others or not outer_region_contains(others, p):
            flags[first_index[p]] = True
    return flags


@dataclass(frozen=True)
class NewtonOuterRegion:
    """Generators plus their computed vertex flags."""

    generators: tuple[Point, ...]
    vertex_flags: tuple[bool, ...]

    @property
    def dimension(self) -> int:
        return len(self.generators[0])

    @property
    def vertices(self) -> tuple[Point, ...]:
        return tuple(p for p, f in zip(self.generators, self.vertex_flags) if f)

    def contains(self, point: Point) -> bool:
        return outer_region_contains(self.generators, point)


def newton_outer_region(points: Sequence[Point]) -> NewtonOuterRegion:
    return NewtonOuterRegion(tuple(points), tuple(region_vertex_flags(points)))


@dataclass(frozen=True)
class GeneralizedSimplex:
    """Convex span of finite vertices and coordinate directions at infinity.

    ``infinite`` holds 0-based coordinate indices.  Well-formed cells satisfy
    len(finite) + len(infinite) == dimension + 1.
    """

    finite: tuple[Point, ...]
    infinite: frozenset[int]

    @property
    def dimension(self) -> int:
        return len(self.finite[0])

    @property
    def rank(self) -> int:
        return len(self.finite) - 1

    def hvol(self) -> int:
        """Normalized lattice volume of the projection along infinite directions.

        The absolute determinant of the rank x rank integer matrix of edge
        vectors restricted to the coordinates not at infinity; 0 when the
        vertices are affinely dependent after projection.
        """
        s = self.rank
        if s == 0:
            return 1
        keep = [i for i in range(self.dimension) if i not in self.infinite]
        if len(keep) != s:
            raise ValidationError("malformed simplex: rank/coordinate mismatch")
        base = self.finite[0]
        rows = [
            [Fraction(v[i] - base[i]) for i in keep] for v in self.finite[1:]
        ]
        d = _det_fraction(rows)
        if d.denominator != 1:
            raise ValidationError("non-integer lattice volume")
        return abs(d.numerator)

    @property
    def degenerate(self) -> bool:
        return self.hvol() == 0

    def contains(self, point: Sequence[Fraction]) -> bool:
        """Exact closed-simplex membership via the unique lift coordinates."""
        n = self.dimension
        cols: list[list[Fraction]] = [
            [Fraction(c) for c in v] + [Fraction(1)] for v in self.finite
        ] + [
            [Fraction(int(i == j)) for i in range(n)] + [Fraction(0)]
            for j in sorted(self.infinite)
        ]
        target = [Fraction(c) for c in point] + [Fraction(1)]
        coeffs = _solve_square([list(col) for col in zip(*cols)], target)
        if coeffs is None:
            return False
        return all(c >= 0 for c in coeffs)


@dataclass(frozen=True)
class Triangulation:
    """Full-dimensional generalized simplices tiling a Newton outer region."""

    simplices: tuple[GeneralizedSimplex, ...]

    def rank_volume_multiset(self) -> list[tuple[int, int]]:
        return sorted((s.rank, s.hvol()) for s in self.simplices)

    def dump_lines(self) -> list[str]:
        """One simplex per line: finite vertices, infinite directions, rank, hvol."""
        lines = []
        for s in self.simplices:
            verts = " ".join("(" + ",".join(map(str, v)) + ")" for v in s.finite)
            inf = ",".join(f"a{i + 1}" for i in sorted(s.infinite)) or "-"
            lines.append(f"finite: {verts} | infinite: {inf} | rank: {s.rank} | hvol: {s.hvol()}")
        return lines


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        det *= m[k][k]
        inv = 1 / m[k][k]
        for r in range(k + 1, n):
            if m[r][k] != 0:
                f = m[r][k] * inv
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    return det


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square exact linear system; None when singular."""
    n = len(rows)
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot_row is None:
            return None
        m[k], m[pivot_row] = m[pivot_row], m[k]
        inv = 1 / m[k][k]
        m[k] = [v * inv for v in m[k]]
        for r in range(n):
            if r != k and m[r][k] != 0:
                f = m[r][k]
                m[r] = [a - f * b for a, b in zip(m[r], m[k])]
    return [m[i][n] for i in range(n)]


def _nullspace_vector(rows: list[list[Fraction]], width: int) -> list[Fraction] | None:
    """One nonzero solution of a homogeneous system expected to have rank width-1."""
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
    free = [c for c in range(width) if c not in pivots]
    if not free:
        return None
    c0 = free[0]
    sol = [Fraction(0)] * width
    sol[c0] = Fraction(1)
    for r, pc in enumerate(pivots):
        sol[pc] = -m[r][c0]
    return sol


class _PlacingCone:
    """Incremental placing triangulation of a cone from an ordered generator list."""

    def __init__(self, ambient_dim: int):
        self.dim = ambient_dim
        self.generators: list[tuple[Fraction, ...]] = []
        self.basis: list[tuple[Fraction, ...]] = []  # independent subset spanning the cone
        self.cells: list[frozenset[int]] = []

    def _in_span(self, vec: Sequence[Fraction]) -> bool:
        m = [list(b) for b in self.basis]
        residual = list(vec)
        row = 0
        for col in range(self.dim):
            pivot_row = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
            if pivot_row is None:
                continue
            m[row], m[pivot_row] = m[pivot_row], m[row]
            inv = 1 / m[row][col]
            m[row] = [v * inv for v in m[row]]
            if residual[col] != 0:
                f = residual[col]
                residual = [a - f * b for a, b in zip(residual, m[row])]
            for r in range(len(m)):
                if r != row and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [a - f * b for a, b in zip(m[r], m[row])]
            row += 1
        return all(v == 0 for v in residual)

    def _boundary_facets(self) -> list[tuple[frozenset[int], int]]:
        """Facets lying in exactly one cell, paired with the opposite generator."""
        seen: dict[frozenset[int], list[int]] = {}
        for cell in self.cells:
            for g in cell:
                facet = cell - {g}
                seen.setdefault(facet, []).append(g)
        return [(facet, opp[0]) for facet, opp in seen.items() if len(opp) == 1]

    def _outward_normal(self, facet: frozenset[int], inside_idx: int) -> tuple[Fraction, ...]:
        """Normal within the current span, zero on the facet, negative inside."""
        k = len(self.basis)
        constraint_rows = [
            [_dot(self.generators[f], b) for b in self.basis] for f in facet
        ]
        coeffs = _nullspace_vector(constraint_rows, k)
        if coeffs is None:
            raise ValidationError("facet normal not unique; cell not simplicial")
        normal = tuple(
            sum((c * b[i] for c, b in zip(coeffs, self.basis)), Fraction(0))
            for i in range(self.dim)
        )
        side = _dot(self.generators[inside_idx], normal)
        if side == 0:
            raise ValidationError("degenerate facet orientation")
        if side > 0:
            normal = tuple(-v for v in normal)
        return normal

    def insert(self, vec: Sequence[Fraction]) -> None:
        g = tuple(Fraction(v) for v in vec)
        idx = len(self.generators)
        self.generators.append(g)
        if not self.cells:
            self.cells = [frozenset([idx])]
            self.basis.append(g)
            return
        if not self._in_span(g):
            # dimension grows: cone over the previous triangulation
            self.cells = [cell | {idx} for cell in self.cells]
            self.basis.append(g)
            return
        new_cells = []
        for facet, opposite in self._boundary_facets():
            normal = self._outward_normal(facet, opposite)
            if _dot(g, normal) > 0:
                new_cells.append(facet | {idx})
        self.cells.extend(new_cells)


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def triangulate(
    region: NewtonOuterRegion,
    insertion_order: Sequence[int] | None = None,
) -> Triangulation:
    """Deterministic placing triangulation of a Newton outer region.

    Generators of the homogenized cone are the lifted region vertices (in
    input order) followed by the axis rays; ``insertion_order`` permutes that
    list (used to exercise triangulation-invariance).  Non-vertex generators
    were already dropped by the region's vertex flags.
    """
    n = region.dimension
    vertices = list(region.vertices)
    if not vertices:
        raise ValidationError("region has no vertices")
    lifted = [tuple(Fraction(c) for c in v) + (Fraction(1),) for v in vertices]
    rays = [
        tuple(Fraction(int(i == j)) for i in range(n)) + (Fraction(0),)
        for j in range(n)
    ]
    gens = lifted + rays
    order = list(range(len(gens))) if insertion_order is None else list(insertion_order)
    if sorted(order) != list(range(len(gens))):
        raise ValidationError("insertion order must permute all generators")

    cone = _PlacingCone(n + 1)
    for slot in order:
        cone.insert(gens[slot])
    placement = {placed: original for placed, original in enumerate(order)}

    simplices = []
    for cell in cone.cells:
        if len(cell) != n + 1:
            continue  # lower-dimensional startup cells are faces of later ones
        original = [placement[i] for i in cell]
        finite = tuple(vertices[i] for i in sorted(i for i in original if i < len(vertices)))
        infinite = frozenset(i - len(vertices) for i in original if i >= len(vertices))
        simplices.append(GeneralizedSimplex(finite, infinite))
    simplices.sort(key=lambda s: (s.rank, sorted(s.infinite), s.finite))
    return Triangulation(tuple(simplices))


def triangulation_covers(
    triangulation: Triangulation,
    region: NewtonOuterRegion,
    sample_points: Iterable[Sequence[Fraction]],
) -> bool:
    """Spot-check that the simplex union matches the region on sample points."""
    for p in sample_points:
        in_region = _region_contains_rational(region, p)
        in_union = any(s.contains(p) for s in triangulation.simplices)
        if in_region != in_union:
            return False
    return True


def _region_contains_rational(region: NewtonOuterRegion, point: Sequence[Fraction]) -> bool:
    n = region.dimension
    gens = region.generators
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(n):
        rows.append(
            [Fraction(q[i]) for q in gens] + [Fraction(int(i == j)) for j in range(n)]
        )
        rhs.append(Fraction(point[i]))
    rows.append([Fraction(1)] * len(gens) + [Fraction(0)] * n)
    rhs.append(Fraction(1))
    return lp.feasible(rows, rhs)


def brute_force_region_contains(generators: Sequence[Point], point: Point) -> bool:
    """Independent membership oracle by support enumeration (no LP).

    A point lies in conv(Q) + orthant iff some basic solution does, i.e. some
    subset of at most n+1 lifted generators/rays carries nonnegative
    coefficients reproducing the point.  Exponential; test use only.
    """
    n = _check_dimensions(generators)
    lifted = [tuple(Fraction(c) for c in q) + (Fraction(1),) for q in generators]
    rays = [
        tuple(Fraction(int(i == j)) for i in range(n)) + (Fraction(0),)
        for j in range(n)
    ]
    columns = lifted + rays
    target = [Fraction(c) for c in point] + [Fraction(1)]
    for size in range(1, n + 2):
        for subset in itertools.combinations(range(len(columns)), size):
            mat = [[columns[j][i] for j in subset] for i in range(n + 1)]
            sol = _solve_rectangular(mat, target)
            if sol is not None and all(c >= 0 for c in sol):
                return True
    return False


def _solve_rectangular(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique solution of an overdetermined consistent system, else None."""
    height = len(rows)
    width = len(rows[0]) if rows else 0
    m = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots: list[int] = []
    row = 0
    for col in range(width):
        pivot_row = next((r for r in range(row, height) if m[r][col] != 0), None)
        if pivot_row is None:
            continue
        m[row], m[pivot_row] = m[pivot_row], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(height):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    if len(pivots) < width:
        return None  # underdetermined support; a basic witness exists elsewhere
    for r in range(row, height):
        if m[r][width] != 0:
            return None
    sol = [Fraction(0)] * width
    for r, col in enumerate(pivots):
        sol[col] = m[r][width]
    return sol
