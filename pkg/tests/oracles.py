"""Independent oracles for the test suite.

Everything here is deliberately written from scratch against the definitions
(dense elimination, naive recursion), sharing no algorithmic path with the
package's sparse eliminator, memoized determinant, or windowed cohomology.
"""

from __future__ import annotations

from fractions import Fraction

from equisplit.laurent import LaurentPoly
from equisplit.linalg import LaurentMatrix


def dense_rank(rows: list[list[Fraction]]) -> int:
    """Plain dense Gaussian elimination over Fraction."""
    if not rows:
        return 0
    m = [list(map(Fraction, r)) for r in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, nrows):
            if m[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def naive_det(M: LaurentMatrix) -> LaurentPoly:
    """First-row cofactor expansion by fresh recursion (no memoization)."""
    n = M.rows
    if n != M.cols:
        raise ValueError("square only")
    if n == 0:
        return LaurentPoly.one()
    if n == 1:
        return M.entries[0][0]
    total = LaurentPoly.zero()
    for j in range(n):
        a = M.entries[0][j]
        if a.is_zero():
            continue
        minor = LaurentMatrix(
            [[M.entries[i][k] for k in range(n) if k != j] for i in range(1, n)]
        )
        term = a * naive_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def brute_force_h0_dim(A: LaurentMatrix, window: int | None = None) -> int:
    """dim of {(f, g) : g(1/z) = A f} by direct coefficient enumeration.

    Unknowns are the coefficients of f (degrees 0..D) and g (degrees 0..D)
    with D comfortably above any section degree; each Laurent coefficient of
    A f - g(1/z) gives one dense linear equation.
    """
    m = A.rows
    rng = A.exponent_range()
    if rng is None:
        raise ValueError("zero matrix")
    lo, hi = rng
    D = window if window is not None else 2 * (max(abs(lo), abs(hi)) + m + 2)
    nf = m * (D + 1)
    ncols = 2 * nf

    def fcol(j: int, e: int) -> int:
        return j * (D + 1) + e

    def gcol(i: int, e: int) -> int:
        return nf + i * (D + 1) + e

    # equation index: (component i, z-exponent x) over the full possible range
    xs = list(range(min(lo, -D), max(hi + D, 0) + 1))
    rows = []
    for i in range(m):
        for x in xs:
            row = [Fraction(0)] * ncols
            touched = False
            for j in range(m):
                for d, c in A.entries[i][j].monomials():
                    e = x - d
                    if 0 <= e <= D:
                        row[fcol(j, e)] += c
                        touched = True
            if 0 <= -x <= D:
                row[gcol(i, -x)] -= 1
                touched = True
            if touched:
                rows.append(row)
    return ncols - dense_rank(rows)
