"""Linear systems over the fraction field of the coefficient ring.

Elimination is fraction-free (Bareiss): every intermediate entry is a minor of
the input, so exact division never fails and no polynomial gcd is needed.
Pointwise routines work over plain rationals and serve as the oracle for the
symbolic answers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .ring import ONE, ZERO, RatioElem, RingElem


@dataclass(frozen=True)
class Echelon:
    rows: tuple  # tuple of tuples of RingElem, row-echelon form
    pivots: tuple  # (row index, column index) pairs
    n_cols: int


def _check_rect(matrix) -> int:
    if not matrix:
        return 0
    width = len(matrix[0])
    if any(len(row) != width for row in matrix):
        raise ValueError("ragged matrix")
    return width


def bareiss(matrix: Sequence[Sequence[RingElem]], n_cols: int | None = None) -> Echelon:
    """Fraction-free row echelon form; pivots searched in the first ``n_cols`` columns."""
    width = _check_rect(matrix)
    n_cols = width if n_cols is None else n_cols
    m = [[RingElem.lift(v) for v in row] for row in matrix]
    prev = ONE
    r = 0
    pivots = []
    for c in range(n_cols):
        p = next((i for i in range(r, len(m)) if not m[i][c].is_zero()), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        for i in range(r + 1, len(m)):
            lead = m[i][c]
            for j in range(c + 1, width):
                val = piv * m[i][j] - lead * m[r][j]
                if prev != ONE:
                    q = val.divexact(prev)
                    if q is None:
                        raise ArithmeticError("Bareiss step was not exact")
                    val = q
                m[i][j] = val
            m[i][c] = ZERO
        # rows above r are untouched; columns < c of rows below r are zero already
        for i in range(r + 1, len(m)):
            for j in range(c):
                m[i][j] = ZERO
        pivots.append((r, c))
        prev = piv
        r += 1
        if r == len(m):
            break
    return Echelon(tuple(tuple(row) for row in m), tuple(pivots), width)


def rank(matrix) -> int:
    if not matrix:
        return 0
    return len(bareiss(matrix).pivots)


def solve_linear(matrix: Sequence[Sequence[RingElem]], rhs: Sequence[RingElem]) -> list[RatioElem] | None:
    """A solution of ``matrix @ y = rhs`` over the fraction field, or None.

    Free variables are set to zero.  The returned solution has been checked
    by back-substitution (after clearing denominators).
    """
    if len(matrix) != len(rhs):
        raise ValueError("dimension mismatch between matrix and right-hand side")
    n = _check_rect(matrix) if matrix else 0
    aug = [list(row) + [RingElem.lift(b)] for row, b in zip(matrix, rhs)]
    if not aug:
        return []
    ech = bareiss(aug, n_cols=n)
    pivot_rows = {r for r, _ in ech.pivots}
    for i, row in enumerate(ech.rows):
        if i not in pivot_rows and not row[n].is_zero():
            return None
    sol = _back_substitute(ech, n, [RatioElem(row[n]) for row in ech.rows], {})
    if not _verify(matrix, rhs, sol):
        raise ArithmeticError("back-substitution check failed")
    return sol


def _back_substitute(ech: Echelon, n: int, rhs: list, fixed: dict) -> list:
    sol = [RatioElem(fixed.get(j, ZERO)) for j in range(n)]
    for r, c in reversed(ech.pivots):
        row = ech.rows[r]
        acc = rhs[r]
        for j in range(c + 1, n):
            if not row[j].is_zero() and not sol[j].is_zero():
                acc = acc - sol[j] * row[j]
        sol[c] = acc / RatioElem(row[c])
    return sol


def _verify(matrix, rhs, sol) -> bool:
    for row, b in zip(matrix, rhs):
        acc = RatioElem(ZERO)
        for a, y in zip(row, sol):
            if not a.is_zero() and not y.is_zero():
                acc = acc + y * a
        if not (acc - b).is_zero():
            return False
    return True


def clear_denominators(vec: Sequence[RatioElem]) -> list[RingElem]:
    """Scale a vector of ratios to a ring vector spanning the same line."""
    dens = []
    for v in vec:
        if v.den != ONE and all(v.den != d for d in dens):
            dens.append(v.den)
    scale = ONE
    for d in dens:
        scale = scale * d
    out = []
    for v in vec:
        q = (v.num * scale).divexact(v.den)
        if q is None:
            raise ArithmeticError("denominator did not clear")
        out.append(q)
    g = None
    for v in out:
        if not v.is_zero():
            g = v.content() if g is None else _frac_gcd(g, v.content())
    if g:
        out = [v * (1 / g) for v in out]
    return out


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd

    return Fraction(gcd(a.numerator, b.numerator), a.denominator * b.denominator // gcd(a.denominator, b.denominator))


def nullspace(matrix: Sequence[Sequence[RingElem]], n_cols: int | None = None) -> list[list[RingElem]]:
    """Basis of the right kernel over the fraction field, scaled into the ring."""
    n = n_cols if n_cols is not None else (_check_rect(matrix) if matrix else 0)
    if not matrix:
        return [[ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    ech = bareiss(matrix)
    pivot_cols = {c for _, c in ech.pivots}
    basis = []
    zero_rhs = [RatioElem(ZERO)] * len(ech.rows)
    for f in range(n):
        if f in pivot_cols:
            continue
        sol = _back_substitute(ech, n, zero_rhs, {f: ONE})
        basis.append(clear_denominators(sol))
    return basis


# -- pointwise (oracle) ---------------------------------------------------------

def rank_rational(matrix: Sequence[Sequence[Fraction]]) -> int:
    m = [[Fraction(v) for v in row] for row in matrix]
    if not m:
        return 0
    width = len(m[0])
    r = 0
    for c in range(width):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def nullspace_rational(matrix: Sequence[Sequence[Fraction]], n_cols: int) -> list[list[Fraction]]:
    m = [[Fraction(v) for v in row] for row in matrix]
    pivots = []
    r = 0
    for c in range(n_cols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        m[r] = [v / m[r][c] for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    basis = []
    for f in range(n_cols):
        if f in pivots:
            continue
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row_i, c in enumerate(pivots):
            v[c] = -m[row_i][f]
        basis.append(v)
    return basis
