"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial is a map from exponent vectors to nonzero Fraction coefficients,
over a fixed ordered tuple of variable names.  Problem instances use the ring
``X1 < X2 < ... < Xn < h < t`` (see :func:`monomial_ring`); ``h`` carries the
ambient hyperplane class and ``t`` grades by codimension.

Canonical term order is graded lexicographic: compare total degree first,
then exponents of the *later* (larger) variables.  All rendering, leading-term
selection and normalization use this order, so equal values always print as
identical bytes.

Rational expressions are quotients of a polynomial by a product of normalized
"linear" denominator factors; the only factors produced by the closed-form
integration are of the shapes ``c0 + sum c_j*Xj`` and ``c0*h + (sum c_j*Xj)*t``,
which keeps simplification down to trial exact division (no multivariate GCD).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import DivisionByZeroFormError, ValidationError

Exponent = tuple[int, ...]
Scalar = int | Fraction


def monomial_ring(n: int) -> tuple[str, ...]:
    """Variable names for an instance with n hypersurface classes."""
    return tuple(f"X{j}" for j in range(1, n + 1)) + ("h", "t")


def _order_key(exp: Exponent) -> tuple:
    # graded lex; reversing the tuple makes later variables more significant
    return (sum(exp), exp[::-1])


class MultiPoly:
    """Immutable-by-convention sparse polynomial with Fraction coefficients."""

    __slots__ = ("names", "terms")

    def __init__(self, names: tuple[str, ...], terms: Mapping[Exponent, Fraction]):
        self.names = names
        self.terms = {e: c for e, c in terms.items() if c != 0}

    # ------------------------------------------------------------------ build

    @classmethod
    def zero(cls, names: tuple[str, ...]) -> "MultiPoly":
        return cls(names, {})

    @classmethod
    def constant(cls, names: tuple[str, ...], value: Scalar) -> "MultiPoly":
        c = Fraction(value)
        return cls(names, {(0,) * len(names): c} if c else {})

    @classmethod
    def variable(cls, names: tuple[str, ...], name: str) -> "MultiPoly":
        idx = names.index(name)
        exp = tuple(1 if i == idx else 0 for i in range(len(names)))
        return cls(names, {exp: Fraction(1)})

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.names != self.names:
                raise ValidationError("polynomials over different variable sets")
            return other
        return MultiPoly.constant(self.names, other)

    # ------------------------------------------------------------- arithmetic

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(self.names, out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if not self.terms or not other.terms:
            return MultiPoly.zero(self.names)
        out: dict[Exponent, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return MultiPoly(self.names, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValidationError("negative polynomial power")
        result = MultiPoly.constant(self.names, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.names == other.names
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.names, frozenset(self.terms.items())))

    # ------------------------------------------------------------------ query

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValidationError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading(self) -> tuple[Exponent, Fraction]:
        e = max(self.terms, key=_order_key)
        return e, self.terms[e]

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda ec: _order_key(ec[0]), reverse=True)

    def degree_in(self, name: str) -> int:
        idx = self.names.index(name)
        return max((e[idx] for e in self.terms), default=0)

    def coefficients_in(self, name: str) -> dict[int, "MultiPoly"]:
        """Collect by the power of one variable; values keep the full ring."""
        idx = self.names.index(name)
        out: dict[int, dict[Exponent, Fraction]] = {}
        for e, c in self.terms.items():
            k = e[idx]
            stripped = tuple(0 if i == idx else x for i, x in enumerate(e))
            out.setdefault(k, {})[stripped] = out.get(k, {}).get(stripped, Fraction(0)) + c
        return {k: MultiPoly(self.names, d) for k, d in out.items()}

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a rational point; every variable must be assigned."""
        vals = [Fraction(values[name]) for name in self.names]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for v, k in zip(vals, e):
                if k:
                    term *= v**k
            total += term
        return total

    def substitute(self, assignment: Mapping[str, "MultiPoly"]) -> "MultiPoly":
        """Replace a subset of variables by polynomials over the same ring."""
        idx_map = {}
        for name, repl in assignment.items():
            if repl.names != self.names:
                raise ValidationError("substitution polynomial over different variable set")
            idx_map[self.names.index(name)] = repl
        if not idx_map:
            return self
        powers: dict[tuple[int, int], MultiPoly] = {}

        def power_of(i: int, k: int) -> MultiPoly:
            key = (i, k)
            if key not in powers:
                powers[key] = idx_map[i] ** k
            return powers[key]

        result = MultiPoly.zero(self.names)
        for e, c in self.terms.items():
            kept = tuple(0 if i in idx_map else x for i, x in enumerate(e))
            term = MultiPoly(self.names, {kept: c})
            for i, k in enumerate(e):
                if k and i in idx_map:
                    term = term * power_of(i, k)
            result = result + term
        return result

    # ----------------------------------------------------------- exact division

    def divide_exact(self, divisor: "MultiPoly") -> "MultiPoly | None":
        """Return self / divisor when the division is exact, else None."""
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        lead_e, lead_c = divisor.leading()
        quotient: dict[Exponent, Fraction] = {}
        rem = self
        while not rem.is_zero():
            re, rc = rem.leading()
            qe = tuple(a - b for a, b in zip(re, lead_e))
            if any(x < 0 for x in qe):
                return None
            qc = rc / lead_c
            quotient[qe] = quotient.get(qe, Fraction(0)) + qc
            rem = rem - MultiPoly(self.names, {qe: qc}) * divisor
        return MultiPoly(self.names, quotient)

    def scale(self, s: Scalar) -> "MultiPoly":
        s = Fraction(s)
        return MultiPoly(self.names, {e: c * s for e, c in self.terms.items()})

    # -------------------------------------------------------------- rendering

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}"
                for name, k in zip(self.names, e)
                if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"


def parse_poly(text: str, names: tuple[str, ...]) -> MultiPoly:
    """Parse the canonical rendering produced by ``str(MultiPoly)``."""
    text = text.strip()
    if text == "0":
        return MultiPoly.zero(names)
    # normalize to "+term" / "-term" chunks
    text = text.replace("- ", "-").replace("+ ", "+")
    chunks: list[str] = []
    current = ""
    for token in text.split():
        if token.startswith(("+", "-")) and current:
            chunks.append(current)
            current = token
        else:
            current += token
    if current:
        chunks.append(current)
    result = MultiPoly.zero(names)
    for chunk in chunks:
        sign = 1
        if chunk.startswith("-"):
            sign, chunk = -1, chunk[1:]
        elif chunk.startswith("+"):
            chunk = chunk[1:]
        coeff = Fraction(1)
        exp = [0] * len(names)
        for factor in chunk.split("*"):
            if not factor:
                raise ValidationError(f"empty factor in term {chunk!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            if "^" in factor:
                var, _, power = factor.partition("^")
                k = int(power)
            else:
                var, k = factor, 1
            if var not in names:
                raise ValidationError(f"unknown variable {var!r}")
            exp[names.index(var)] += k
        term = MultiPoly(names, {tuple(exp): sign * coeff})
        result = result + term
    return result


class LinearForm:
    """Normalized denominator factor: coprime integer coefficients, positive lead.

    Wraps the underlying polynomial; ``normalize`` splits an arbitrary nonzero
    polynomial into (form, scalar) with ``scalar * form == input``.
    """

    __slots__ = ("poly",)

    def __init__(self, poly: MultiPoly):
        self.poly = poly

    @staticmethod
    def normalize(poly: MultiPoly) -> tuple["LinearForm", Fraction]:
        if poly.is_zero():
            raise DivisionByZeroFormError("denominator factor is identically zero")
        coeffs = list(poly.terms.values())
        denom_lcm = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
        numer_gcd = gcd(*(abs(c.numerator * (denom_lcm // c.denominator)) for c in coeffs))
        content = Fraction(numer_gcd, denom_lcm)
        _, lead_c = poly.leading()
        if lead_c < 0:
            content = -content
        return LinearForm(poly.scale(1 / content)), content

    def key(self) -> tuple:
        return tuple(sorted(self.poly.terms.items(), key=lambda ec: _order_key(ec[0])))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self.poly == other.poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def __str__(self) -> str:
        return str(self.poly)

    def __repr__(self) -> str:
        return f"LinearForm({self.poly})"


class RationalExpression:
    """Quotient numerator / product of LinearForm factors, kept simplified.

    Simplified means no denominator factor divides the numerator exactly; the
    factor multiset is stored sorted for deterministic rendering and equality.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: MultiPoly, denominator: tuple[tuple[LinearForm, int], ...]):
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def make(
        cls,
        numerator: MultiPoly,
        factors: Iterable[tuple[MultiPoly, int]] = (),
    ) -> "RationalExpression":
        """Build and simplify; ``factors`` are (polynomial, multiplicity) pairs."""
        num = numerator
        counts: dict[LinearForm, int] = {}
        for poly, mult in factors:
            if mult == 0:
                continue
            if mult < 0:
                raise ValidationError("negative denominator multiplicity")
            form, scalar = LinearForm.normalize(poly)
            num = num.scale(Fraction(1) / scalar**mult)
            if form.poly.is_constant():
                num = num.scale(Fraction(1) / form.poly.constant_value() ** mult)
                continue
            counts[form] = counts.get(form, 0) + mult
        if num.is_zero():
            return cls(num, ())
        # repeated trial exact division by each factor, to a fixpoint
        changed = True
        while changed:
            changed = False
            for form in list(counts):
                while counts[form] > 0:
                    q = num.divide_exact(form.poly)
                    if q is None:
                        break
                    num = q
                    counts[form] -= 1
                    changed = True
                if counts[form] == 0:
                    del counts[form]
        den = tuple(sorted(counts.items(), key=lambda fm: fm[0].key()))
        return cls(num, den)

    @property
    def names(self) -> tuple[str, ...]:
        return self.numerator.names

    def is_polynomial(self) -> bool:
        return not self.denominator

    def __add__(self, other: "RationalExpression") -> "RationalExpression":
        return expr_sum([self, other])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalExpression)
            and self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __hash__(self) -> int:
        return hash((self.numerator, self.denominator))

    def substitute(self, assignment: Mapping[str, MultiPoly]) -> "RationalExpression":
        num = self.numerator.substitute(assignment)
        factors = [
            (form.poly.substitute(assignment), mult) for form, mult in self.denominator
        ]
        return RationalExpression.make(num, factors)

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        den = Fraction(1)
        for form, mult in self.denominator:
            v = form.poly.evaluate(values)
            if v == 0:
                raise DivisionByZeroFormError("denominator vanishes at evaluation point")
            den *= v**mult
        return self.numerator.evaluate(values) / den

    def as_poly_over_monomial_denominator(self) -> tuple[MultiPoly, Exponent] | None:
        """If every denominator factor is a single monomial, return (num, exp).

        The expression then equals ``num / prod(names**exp)``.  Used after
        class substitutions collapse every factor to a power of ``h``.
        """
        total = [0] * len(self.names)
        for form, mult in self.denominator:
            if len(form.poly.terms) != 1:
                return None
            (e, c), = form.poly.terms.items()
            if c != 1:
                return None  # normalized monomial factor always has lead 1
            for i, k in enumerate(e):
                total[i] += k * mult
        return self.numerator, tuple(total)

    def __str__(self) -> str:
        num = f"({self.numerator})"
        if not self.denominator:
            return num
        factors = " * ".join(
            f"({form})" if mult == 1 else f"({form})^{mult}"
            for form, mult in self.denominator
        )
        return f"{num} / {factors}"

    def __repr__(self) -> str:
        return f"RationalExpression({self})"


def parse_expression(text: str, names: tuple[str, ...]) -> RationalExpression:
    """Parse the canonical rendering produced by ``str(RationalExpression)``."""
    text = text.strip()
    if " / " in text:
        num_part, _, den_part = text.partition(" / ")
    else:
        num_part, den_part = text, ""
    if not (num_part.startswith("(") and num_part.endswith(")")):
        raise ValidationError("expression numerator must be parenthesized")
    num = parse_poly(num_part[1:-1], names)
    factors: list[tuple[MultiPoly, int]] = []
    if den_part:
        for piece in den_part.split(" * "):
            piece = piece.strip()
            mult = 1
            if piece.endswith(")"):
                body = piece
            else:
                body, _, power = piece.rpartition("^")
                mult = int(power)
            if not (body.startswith("(") and body.endswith(")")):
                raise ValidationError(f"malformed denominator factor {piece!r}")
            factors.append((parse_poly(body[1:-1], names), mult))
    return RationalExpression.make(num, factors)


def expr_sum(terms: Sequence[RationalExpression]) -> RationalExpression:
    """Sum expressions over the least common denominator, then simplify.

    The LCD takes the maximum multiplicity of each normalized factor across
    the summands; the result does not depend on summand order.
    """
    if not terms:
        raise ValidationError("expr_sum of an empty list")
    names = terms[0].names
    for t in terms:
        if t.names != names:
            raise ValidationError("expressions over different variable sets")
    lcd: dict[LinearForm, int] = {}
    for t in terms:
        for form, mult in t.denominator:
            lcd[form] = max(lcd.get(form, 0), mult)
    num = MultiPoly.zero(names)
    for t in terms:
        have = dict(t.denominator)
        scaled = t.numerator
        for form, mult in lcd.items():
            missing = mult - have.get(form, 0)
            for _ in range(missing):
                scaled = scaled * form.poly
        num = num + scaled
    return RationalExpression.make(num, [(form.poly, mult) for form, mult in lcd.items()])


# ---------------------------------------------------------------- matrices

PolyMatrix = Sequence[Sequence[MultiPoly]]


def _require_square(rows: PolyMatrix) -> int:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValidationError("matrix is not square")
    return n


def det_cofactor(rows: PolyMatrix) -> MultiPoly:
    """Exact determinant by cofactor expansion along the first column."""
    n = _require_square(rows)
    names = rows[0][0].names
    if n == 1:
        return rows[0][0]

    def minor(mat: list[list[MultiPoly]]) -> MultiPoly:
        size = len(mat)
        if size == 1:
            return mat[0][0]
        if size == 2:
            return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
        acc = MultiPoly.zero(names)
        for i in range(size):
            if mat[i][0].is_zero():
                continue
            sub = [row[1:] for k, row in enumerate(mat) if k != i]
            term = mat[i][0] * minor(sub)
            acc = acc + term if i % 2 == 0 else acc - term
        return acc

    return minor([list(r) for r in rows])


def det_bareiss(rows: PolyMatrix) -> MultiPoly:
    """Fraction-free Bareiss elimination; divisions are exact by construction."""
    n = _require_square(rows)
    names = rows[0][0].names
    m = [list(r) for r in rows]
    sign = 1
    prev = MultiPoly.constant(names, 1)
    for k in range(n - 1):
        if m[k][k].is_zero():
            for r in range(k + 1, n):
                if not m[r][k].is_zero():
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return MultiPoly.zero(names)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                q = numerator.divide_exact(prev)
                if q is None:  # cannot happen for a true Bareiss step
                    raise ValidationError("inexact division in fraction-free elimination")
                m[i][j] = q
            m[i][k] = MultiPoly.zero(names)
        prev = m[k][k]
    result = m[n - 1][n - 1]
    return result if sign == 1 else -result


def det(rows: PolyMatrix) -> MultiPoly:
    """Determinant; cofactor expansion up to 6x6, Bareiss beyond."""
    n = _require_square(rows)
    return det_cofactor(rows) if n <= 6 else det_bareiss(rows)


def charpoly(rows: PolyMatrix, t_name: str = "t") -> MultiPoly:
    """det(t*I - rows), exact; entries must not involve the charpoly variable."""
    n = _require_square(rows)
    names = rows[0][0].names
    t_idx = names.index(t_name)
    for row in rows:
        for entry in row:
            if any(e[t_idx] for e in entry.terms):
                raise ValidationError(f"matrix entries must not involve {t_name!r}")
    t = MultiPoly.variable(names, t_name)
    shifted = [
        [(t - rows[i][j]) if i == j else -rows[i][j] for j in range(n)]
        for i in range(n)
    ]
    return det(shifted)
