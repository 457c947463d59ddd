"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The slack basis is feasible from the start, so no phase one is needed.
Bland's rule (lowest-index entering and leaving variables) rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class UnboundedLP(ArithmeticError):
    pass


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    x: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPSolution:
    n = len(c)
    m = len(A)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]
    if any(v < 0 for v in b):
        raise ValueError("right-hand side must be nonnegative")
    width = n + m
    rows = []
    for i, row in enumerate(A):
        if len(row) != n:
            raise ValueError("constraint row length does not match objective")
        full = [Fraction(v) for v in row] + [Fraction(0)] * m
        full[n + i] = Fraction(1)
        rows.append(full)
    rhs = list(b)
    basis = [n + i for i in range(m)]
    reduced = c + [Fraction(0)] * m
    value = Fraction(0)
    pivots = 0

    while True:
        entering = next((j for j in range(width) if reduced[j] > 0), None)
        if entering is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = rows[i][entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise UnboundedLP(f"variable {entering} can grow without bound")
        piv = rows[leave][entering]
        prow = [v / piv for v in rows[leave]]
        prhs = rhs[leave] / piv
        rows[leave], rhs[leave] = prow, prhs
        nz = [j for j, v in enumerate(prow) if v]
        for i in range(m):
            if i == leave:
                continue
            factor = rows[i][entering]
            if factor:
                row = rows[i]
                for j in nz:
                    row[j] -= factor * prow[j]
                rhs[i] -= factor * prhs
        factor = reduced[entering]
        for j in nz:
            reduced[j] -= factor * prow[j]
        value += factor * prhs
        basis[leave] = entering
        pivots += 1

    x = [Fraction(0)] * width
    for i, var in enumerate(basis):
        x[var] = rhs[i]
    dual = tuple(-reduced[n + i] for i in range(m))
    return LPSolution(value, tuple(x[:n]), dual, pivots)


def check_optimality(c, A, b, sol: LPSolution) -> bool:
    """Exact primal feasibility, dual feasibility and zero duality gap."""
    c = [Fraction(v) for v in c]
    if any(v < 0 for v in sol.x) or any(v < 0 for v in sol.dual):
        return False
    for row, bi in zip(A, b):
        if sum(Fraction(a) * xj for a, xj in zip(row, sol.x)) > Fraction(bi):
            return False
    for j in range(len(c)):
        if sum(Fraction(A[i][j]) * sol.dual[i] for i in range(len(A))) < c[j]:
            return False
    primal = sum(cj * xj for cj, xj in zip(c, sol.x))
    dual = sum(Fraction(bi) * yi for bi, yi in zip(b, sol.dual))
    return primal == sol.value == dual
