"""Geometric side of the computation: intersection-number oracles and classes.

A GeometricSetup knows the dimension of the source variety, the degrees of
the distinguished hypersurfaces, and an oracle returning the intersection
number of any squarefree product of hypersurface classes against the
complementary power of the hyperplane class.  Two models are provided:

* the generic projective model (hypersurfaces of given degrees in general
  position on P^r), where every number is a Bezout product and every class
  is proportional to the hyperplane class, and
* an explicit table for arbitrary varieties, where missing entries fall back
  to the Bezout product and are flagged for the report.

GradedClass is a truncated sum of squarefree hypersurface monomials times
powers of the hyperplane class; XSeries additionally allows repeated factors
(needed by geometric-series expansions) and can only be evaluated numerically
under the proportional model.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    InternalInvariantError,
    IsobaricError,
    PowerEvaluationError,
    ValidationError,
)

Subset = frozenset[int]  # 0-based hypersurface indices


def _join_signed(parts: Sequence[tuple[Fraction, str]]) -> str:
    """Render (coefficient, monomial) pairs with explicit signs between terms."""
    if not parts:
        return "0"
    rendered = []
    for coeff, mono in parts:
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not rendered:
            rendered.append(body if coeff > 0 else f"-{body}")
        else:
            rendered.append(f"+ {body}" if coeff > 0 else f"- {body}")
    return " ".join(rendered)


@dataclass(frozen=True)
class GeometricSetup:
    """Dimension, hypersurface degrees, and the squarefree degree oracle."""

    dim_v: int
    degrees: tuple[int, ...]
    deg_v: int = 1
    kind: str = "Pn"  # "Pn": generic projective model; "table": explicit oracle
    table: Mapping[Subset, int] | None = None
    defaulted: tuple[Subset, ...] = ()  # table entries that fell back to Bezout

    def __post_init__(self):
        if self.dim_v < 0:
            raise ValidationError("negative variety dimension")
        if any(d < 1 for d in self.degrees):
            raise ValidationError("hypersurface degrees must be positive")
        if self.deg_v < 1:
            raise ValidationError("variety degree must be positive")

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def proportional(self) -> bool:
        """True when every hypersurface class is a multiple of the hyperplane."""
        return self.kind == "Pn"

    def degree_of(self, subset: Iterable[int]) -> int:
        """Intersection number for a squarefree subset of hypersurfaces."""
        s = frozenset(subset)
        if any(j < 0 or j >= self.n for j in s):
            raise ValidationError("hypersurface index out of range")
        if len(s) > self.dim_v:
            return 0
        if self.table is not None and s in self.table:
            return self.table[s]
        prod = self.deg_v
        for j in s:
            prod *= self.degrees[j]
        return prod

    def degree_of_monomial(self, exponents: Sequence[int]) -> int:
        """Intersection number for a possibly-repeated hypersurface monomial.

        Repeated factors are only meaningful under the proportional model,
        where X_j may be replaced by degrees[j] copies of the hyperplane.
        """
        if len(exponents) != self.n:
            raise ValidationError("exponent vector length mismatch")
        if sum(exponents) > self.dim_v:
            return 0
        if all(e <= 1 for e in exponents):
            return self.degree_of(j for j, e in enumerate(exponents) if e)
        if not self.proportional:
            raise PowerEvaluationError(
                "repeated hypersurface factors require the generic projective model"
            )
        prod = self.deg_v
        for j, e in enumerate(exponents):
            prod *= self.degrees[j] ** e
        return prod


def projective_space_setup(r: int, degrees: Sequence[int]) -> GeometricSetup:
    """Generic hypersurfaces of the given degrees on projective r-space."""
    return GeometricSetup(dim_v=r, degrees=tuple(degrees), deg_v=1, kind="Pn")


def table_setup(
    dim_v: int,
    deg_v: int,
    degrees: Sequence[int],
    entries: Mapping[Subset, int],
) -> GeometricSetup:
    """Explicit intersection-number table; missing entries default to Bezout."""
    degrees = tuple(degrees)
    n = len(degrees)
    table: dict[Subset, int] = {}
    for s, value in entries.items():
        s = frozenset(s)
        if any(j < 0 or j >= n for j in s):
            raise ValidationError(f"table subset {sorted(s)} has an index out of range")
        if len(s) > dim_v and value != 0:
            raise ValidationError(
                f"table subset {sorted(j + 1 for j in s)} exceeds the variety dimension"
            )
        table[s] = value
    if frozenset() in table and table[frozenset()] != deg_v:
        raise ValidationError("table entry for the empty subset must equal the variety degree")
    table[frozenset()] = deg_v
    for j in range(n):
        single = frozenset([j])
        if single in table and table[single] != degrees[j]:
            raise ValidationError(
                f"table entry for hypersurface {j + 1} conflicts with its degree"
            )
        table[single] = degrees[j]
    defaulted = []
    for size in range(2, dim_v + 1):
        for combo in combinations(range(n), size):
            if frozenset(combo) not in table:
                defaulted.append(frozenset(combo))
    return GeometricSetup(
        dim_v=dim_v,
        degrees=degrees,
        deg_v=deg_v,
        kind="table",
        table=table,
        defaulted=tuple(sorted(defaulted, key=sorted)),
    )


def validate_isobaric(rows: Sequence[Sequence[int]], setup: GeometricSetup) -> int:
    """Common weighted degree of all rows, or raise naming the offenders.

    Every monomial row must satisfy sum_j m_ij * degrees[j] = d; the return
    value d is the degree of the common line-bundle class.
    """
    if not rows:
        raise ValidationError("no exponent rows")
    weights = [sum(m * d for m, d in zip(row, setup.degrees)) for row in rows]
    d = weights[0]
    offenders = tuple(i for i, w in enumerate(weights) if w != d)
    if offenders:
        raise IsobaricError(
            "rows are not isobaric: weighted degrees "
            + ", ".join(f"rows[{i}]={weights[i]}" for i in range(len(rows)))
            + " must all be equal",
            offenders,
        )
    return d


@dataclass(frozen=True)
class MultidegreePolynomial:
    """Integer multidegree coefficients, constant term first, no trailing zeros."""

    coefficients: tuple[int, ...]

    @staticmethod
    def from_list(values: Sequence[int]) -> "MultidegreePolynomial":
        vals = list(values)
        while vals and vals[-1] == 0:
            vals.pop()
        if not vals:
            vals = [0]
        return MultidegreePolynomial(tuple(vals))

    def coefficient(self, ell: int) -> int:
        if 0 <= ell < len(self.coefficients):
            return self.coefficients[ell]
        return 0

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __str__(self) -> str:
        parts = []
        for ell, c in enumerate(self.coefficients):
            if c == 0 and len(self.coefficients) > 1:
                continue
            mono = "" if ell == 0 else ("t" if ell == 1 else f"t^{ell}")
            parts.append((Fraction(c), mono))
        return _join_signed(parts)


class GradedClass:
    """Truncated sum of squarefree hypersurface monomials times h-powers.

    Terms map (subset, h_exponent) to rational coefficients; any term whose
    codimension |subset| + h_exponent exceeds the variety dimension is
    dropped on construction (it evaluates to zero).
    """

    __slots__ = ("dim_v", "terms")

    def __init__(self, dim_v: int, terms: Mapping[tuple[Subset, int], Fraction]):
        self.dim_v = dim_v
        self.terms = {
            (s, e): c
            for (s, e), c in terms.items()
            if c != 0 and len(s) + e <= dim_v
        }

    @classmethod
    def zero(cls, dim_v: int) -> "GradedClass":
        return cls(dim_v, {})

    @classmethod
    def unit(cls, dim_v: int) -> "GradedClass":
        return cls(dim_v, {(frozenset(), 0): Fraction(1)})

    def add_term(self, subset: Iterable[int], h_exp: int, coeff) -> "GradedClass":
        key = (frozenset(subset), h_exp)
        terms = dict(self.terms)
        terms[key] = terms.get(key, Fraction(0)) + Fraction(coeff)
        return GradedClass(self.dim_v, terms)

    def __add__(self, other: "GradedClass") -> "GradedClass":
        if self.dim_v != other.dim_v:
            raise ValidationError("graded classes of different truncation dimension")
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, Fraction(0)) + c
        return GradedClass(self.dim_v, terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedClass)
            and self.dim_v == other.dim_v
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.dim_v, frozenset(self.terms.items())))

    def codimension_parts(self) -> dict[int, dict[tuple[Subset, int], Fraction]]:
        parts: dict[int, dict[tuple[Subset, int], Fraction]] = {}
        for (s, e), c in self.terms.items():
            parts.setdefault(len(s) + e, {})[(s, e)] = c
        return parts

    def canonical_terms(self) -> list[tuple[tuple[int, ...], int, Fraction]]:
        """Terms as (sorted 1-based subset, h_exp, coeff), canonically ordered."""
        out = [
            (tuple(sorted(j + 1 for j in s)), e, c) for (s, e), c in self.terms.items()
        ]
        out.sort(key=lambda t: (len(t[0]) + t[1], t[0], t[1]))
        return out

    def __str__(self) -> str:
        parts = []
        for subset, e, c in self.canonical_terms():
            mono = "*".join(f"X{j}" for j in subset)
            if e:
                mono = f"{mono}*h^{e}" if mono else f"h^{e}"
            parts.append((c, mono))
        return _join_signed(parts)


def evaluate_degree(
    gclass: GradedClass, setup: GeometricSetup, t_grading: bool = True
) -> MultidegreePolynomial | int:
    """Evaluate a graded class through the intersection-number oracle.

    A term (S, e) of codimension ell contributes coeff * oracle(S) to the
    ell-th multidegree; the missing h-power is implied by the oracle's
    definition.  Integrality of every coefficient is enforced.
    """
    if gclass.dim_v != setup.dim_v:
        raise ValidationError("class truncation does not match the setup dimension")
    gamma = [Fraction(0)] * (setup.dim_v + 1)
    for (s, e), c in gclass.terms.items():
        gamma[len(s) + e] += c * setup.degree_of(s)
    out = []
    for value in gamma:
        if value.denominator != 1:
            raise InternalInvariantError(f"non-integer multidegree {value}")
        out.append(value.numerator)
    if t_grading:
        return MultidegreePolynomial.from_list(out)
    return sum(out)


class XSeries:
    """Truncated power series in the hypersurface classes (repeats allowed)."""

    __slots__ = ("n", "cap", "terms")

    def __init__(self, n: int, cap: int, terms: Mapping[tuple[int, ...], Fraction]):
        self.n = n
        self.cap = cap
        self.terms = {
            e: c for e, c in terms.items() if c != 0 and sum(e) <= cap
        }

    @classmethod
    def zero(cls, n: int, cap: int) -> "XSeries":
        return cls(n, cap, {})

    @classmethod
    def one(cls, n: int, cap: int) -> "XSeries":
        return cls(n, cap, {(0,) * n: Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence, cap: int) -> "XSeries":
        n = len(coeffs)
        terms = {}
        for j, c in enumerate(coeffs):
            if c:
                e = tuple(1 if i == j else 0 for i in range(n))
                terms[e] = Fraction(c)
        return cls(n, cap, terms)

    def _compat(self, other: "XSeries") -> None:
        if self.n != other.n or self.cap != other.cap:
            raise ValidationError("series over different truncations")

    def __add__(self, other: "XSeries") -> "XSeries":
        self._compat(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return XSeries(self.n, self.cap, terms)

    def __sub__(self, other: "XSeries") -> "XSeries":
        return self + other.scale(-1)

    def __mul__(self, other: "XSeries") -> "XSeries":
        self._compat(other)
        terms: dict[tuple[int, ...], Fraction] = {}
        for ea, ca in self.terms.items():
            da = sum(ea)
            for eb, cb in other.terms.items():
                if da + sum(eb) > self.cap:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                terms[e] = terms.get(e, Fraction(0)) + ca * cb
        return XSeries(self.n, self.cap, terms)

    def scale(self, s) -> "XSeries":
        s = Fraction(s)
        return XSeries(self.n, self.cap, {e: c * s for e, c in self.terms.items()})

    def geometric_inverse(self) -> "XSeries":
        """Inverse of 1 + p with p of positive order, as a truncated series."""
        const = self.terms.get((0,) * self.n, Fraction(0))
        if const != 1:
            raise ValidationError("geometric inverse requires constant term 1")
        p = XSeries(
            self.n, self.cap, {e: c for e, c in self.terms.items() if sum(e) > 0}
        )
        result = XSeries.one(self.n, self.cap)
        power = XSeries.one(self.n, self.cap)
        for _ in range(self.cap):
            power = power * p.scale(-1)
            if not power.terms:
                break
            result = result + power
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, XSeries)
            and (self.n, self.cap) == (other.n, other.cap)
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.n, self.cap, frozenset(self.terms.items())))

    def homogeneous_part(self, degree: int) -> "XSeries":
        return XSeries(
            self.n, self.cap, {e: c for e, c in self.terms.items() if sum(e) == degree}
        )

    def evaluate(self, setup: GeometricSetup) -> list[Fraction]:
        """Per-codimension intersection numbers of the series."""
        out = [Fraction(0)] * (self.cap + 1)
        for e, c in self.terms.items():
            out[sum(e)] += c * setup.degree_of_monomial(e)
        return out

    def __str__(self) -> str:
        items = sorted(self.terms.items(), key=lambda ec: (sum(ec[0]), ec[0]))
        parts = []
        for e, c in items:
            mono = "*".join(
                f"X{j + 1}" if k == 1 else f"X{j + 1}^{k}"
                for j, k in enumerate(e)
                if k
            )
            parts.append((c, mono))
        return _join_signed(parts)
