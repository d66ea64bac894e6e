"""Exact rational linear-programming feasibility.

Phase-1 simplex with Bland's rule over Fractions.  Instance sizes here are
tiny (region-membership queries in dimension <= ~8), so there is no pricing,
no tableau sparsity, no revised simplex -- just a textbook dense tableau that
cannot cycle and never touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def feasible(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> bool:
    """Decide whether {x >= 0 : A x = b} is nonempty, exactly."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [[Fraction(v) for v in row] for row in rows]
    b = [Fraction(v) for v in rhs]
    for i in range(m):
        if b[i] < 0:
            a[i] = [-v for v in a[i]]
            b[i] = -b[i]

    # tableau columns: original variables, then one artificial per row
    width = n + m
    tab = [a[i] + [Fraction(int(i == j)) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    # objective: minimize sum of artificials; row stores reduced costs
    obj = [Fraction(0)] * (width + 1)
    for j in range(width):
        obj[j] = Fraction(-1) if j >= n else Fraction(0)
    # price out the initial basis (each artificial has cost 1)
    for i in range(m):
        for j in range(width + 1):
            obj[j] += tab[i][j]

    while True:
        entering = -1
        for j in range(width):
            if obj[j] > 0:  # improving column; Bland: smallest index
                entering = j
                break
        if entering < 0:
            break
        leaving = -1
        best = None
        for i in range(m):
            if tab[i][entering] > 0:
                ratio = tab[i][width] / tab[i][entering]
                if best is None or ratio < best or (
                    ratio == best and basis[i] < basis[leaving]
                ):
                    best = ratio
                    leaving = i
        if leaving < 0:
            # unbounded phase-1 objective is impossible; defensive stop
            return False
        pivot = tab[leaving][entering]
        tab[leaving] = [v / pivot for v in tab[leaving]]
        for i in range(m):
            if i != leaving and tab[i][entering] != 0:
                f = tab[i][entering]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leaving])]
        if obj[entering] != 0:
            f = obj[entering]
            obj = [v - f * w for v, w in zip(obj, tab[leaving])]
        basis[leaving] = entering

    residual = sum(tab[i][width] for i in range(m) if basis[i] >= n)
    return residual == 0
