"""Exact matrices of Laurent polynomials and rational linear algebra.

Two small engines live here:

* ``LaurentMatrix`` — rectangular matrices over the Laurent ring, with exact
  determinant and adjugate (division-free Laplace expansion, memoized over
  column subsets) and Kronecker products.
* rational row reduction — a sparse reduced-row-echelon eliminator over
  ``Fraction`` used by every cohomology computation, plus the dense
  ``solve_rational_kernel`` front end.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .laurent import LaurentPoly, Scalar


class LaurentMatrix:
    """A rows-by-cols grid of LaurentPoly entries (row-major, immutable use)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]], rows: int | None = None, cols: int | None = None):
        entries = [list(row) for row in entries]
        if rows is None:
            rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if len(entries) != rows or any(len(row) != cols for row in entries):
            raise ValueError("ragged or mis-sized matrix data")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def identity(cls, n: int) -> "LaurentMatrix":
        return cls(
            [[LaurentPoly.one() if i == j else LaurentPoly.zero() for j in range(n)] for i in range(n)],
            n,
            n,
        )

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "LaurentMatrix":
        return cls([[LaurentPoly.zero() for _ in range(cols)] for _ in range(rows)], rows, cols)

    @classmethod
    def diagonal(cls, diag: Sequence[LaurentPoly]) -> "LaurentMatrix":
        n = len(diag)
        out = cls.zeros(n, n)
        for i, d in enumerate(diag):
            out.entries[i][i] = d
        return out

    def __getitem__(self, ij: tuple[int, int]) -> LaurentPoly:
        i, j = ij
        return self.entries[i][j]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join("[" + ", ".join(repr(e) for e in row) + "]" for row in self.entries)
        return f"LaurentMatrix({self.rows}x{self.cols}: {body})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check_same_shape(other)
        return LaurentMatrix(
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        self._check_same_shape(other)
        return LaurentMatrix(
            [[self.entries[i][j] - other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)]
        )

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = LaurentMatrix.zeros(self.rows, other.cols)
        for i in range(self.rows):
            row = self.entries[i]
            for k in range(self.cols):
                a = row[k]
                if a.is_zero():
                    continue
                brow = other.entries[k]
                orow = out.entries[i]
                for j in range(other.cols):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return out

    def scale(self, p: LaurentPoly | Scalar) -> "LaurentMatrix":
        if not isinstance(p, LaurentPoly):
            p = LaurentPoly.constant(p)
        return LaurentMatrix([[e * p for e in row] for row in self.entries])

    def transpose(self) -> "LaurentMatrix":
        return LaurentMatrix([[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def map(self, fn: Callable[[LaurentPoly], LaurentPoly]) -> "LaurentMatrix":
        return LaurentMatrix([[fn(e) for e in row] for row in self.entries])

    def invert_variable(self) -> "LaurentMatrix":
        """Substitute z -> 1/z in every entry."""
        return self.map(lambda e: e.invert_variable())

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "LaurentMatrix":
        return LaurentMatrix([[self.entries[i][j] for j in col_idx] for i in row_idx])

    def kron(self, other: "LaurentMatrix") -> "LaurentMatrix":
        """Kronecker product; block (i, j) is self[i][j] * other."""
        out = LaurentMatrix.zeros(self.rows * other.rows, self.cols * other.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                a = self.entries[i][j]
                if a.is_zero():
                    continue
                for p in range(other.rows):
                    for q in range(other.cols):
                        b = other.entries[p][q]
                        if not b.is_zero():
                            out.entries[i * other.rows + p][j * other.cols + q] = a * b
        return out

    def exponent_range(self) -> tuple[int, int] | None:
        """(min, max) exponent over all monomials of all entries; None if zero."""
        lo: int | None = None
        hi: int | None = None
        for row in self.entries:
            for e in row:
                if e.is_zero():
                    continue
                lo = e.ord if lo is None else min(lo, e.ord)
                hi = e.deg if hi is None else max(hi, e.deg)
        if lo is None or hi is None:
            return None
        return lo, hi

    def _check_same_shape(self, other: "LaurentMatrix") -> None:
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")


def mat_det(M: LaurentMatrix) -> LaurentPoly:
    """Exact determinant via Laplace expansion memoized on column subsets."""
    if not M.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = M.rows
    if n == 0:
        return LaurentPoly.one()
    # cache[(r, cols)] = det of rows r.. over frozen column bitmask
    cache: dict[tuple[int, int], LaurentPoly] = {}

    def minor(r: int, colmask: int) -> LaurentPoly:
        if r == n:
            return LaurentPoly.one()
        key = (r, colmask)
        got = cache.get(key)
        if got is not None:
            return got
        total = LaurentPoly.zero()
        sign = 1
        j = 0
        mask = colmask
        while mask:
            low = mask & -mask
            col = low.bit_length() - 1
            entry = M.entries[r][col]
            if not entry.is_zero():
                sub = minor(r + 1, colmask & ~low)
                term = entry * sub
                total = total + (term if sign > 0 else -term)
            sign = -sign
            j += 1
            mask &= mask - 1
        cache[key] = total
        return total

    return minor(0, (1 << n) - 1)


def mat_adjugate(M: LaurentMatrix) -> LaurentMatrix:
    """Exact adjugate: adj(M) @ M = M @ adj(M) = det(M) * identity."""
    if not M.is_square():
        raise ValueError("adjugate of a non-square matrix")
    n = M.rows
    if n == 0:
        return LaurentMatrix.zeros(0, 0)
    if n == 1:
        return LaurentMatrix([[LaurentPoly.one()]])
    adj = LaurentMatrix.zeros(n, n)
    rows = list(range(n))
    cols = list(range(n))
    for i in range(n):
        for j in range(n):
            sub = M.submatrix([r for r in rows if r != j], [c for c in cols if c != i])
            cof = mat_det(sub)
            if (i + j) % 2:
                cof = -cof
            adj.entries[i][j] = cof
    return adj


def kron_adjugate(B: LaurentMatrix, C: LaurentMatrix, detB: LaurentPoly, detC: LaurentPoly) -> LaurentMatrix:
    """adj(B kron C) for unit-monomial determinants.

    Uses adj(B x C) = (det B)^(q-1) (det C)^(p-1) (adj B x adj C) with the
    scalar powers exact because both determinants are invertible monomials.
    """
    p, q = B.rows, C.rows
    scalar = _monomial_power(detB, q - 1) * _monomial_power(detC, p - 1)
    return mat_adjugate(B).kron(mat_adjugate(C)).scale(scalar)


def _monomial_power(mono: LaurentPoly, k: int) -> LaurentPoly:
    if not mono.is_monomial():
        raise ValueError("expected a monomial")
    ((e, c),) = mono.terms.items()
    return LaurentPoly.monomial(e * k, c**k)


# -- rational row reduction ---------------------------------------------


def rref_sparse(rows: Iterable[dict[int, Fraction]], ncols: int) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Reduced row echelon form of sparse rational rows.

    Columns are eliminated in ascending index order, so the pivot set and the
    reduced rows are canonical.  Returns (pivot column list, reduced rows),
    with reduced row k having leading 1 in pivots[k] and zeros in every other
    pivot column.
    """
    # bucket rows by their current leading column
    pending: dict[int, list[dict[int, Fraction]]] = {}

    def push(row: dict[int, Fraction]) -> None:
        if row:
            pending.setdefault(min(row), []).append(row)

    for row in rows:
        push({c: v for c, v in row.items() if v})

    pivots: list[int] = []
    reduced: list[dict[int, Fraction]] = []
    for col in range(ncols):
        bucket = pending.pop(col, None)
        if not bucket:
            continue
        piv = bucket.pop(0)
        inv = 1 / piv[col]
        piv = {c: v * inv for c, v in piv.items()}
        for row in bucket:
            factor = row[col]
            for c, v in piv.items():
                s = row.get(c, Fraction(0)) - factor * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
            push(row)
        # back-eliminate col from earlier reduced rows
        for r in reduced:
            factor = r.get(col)
            if factor:
                for c, v in piv.items():
                    s = r.get(c, Fraction(0)) - factor * v
                    if s:
                        r[c] = s
                    else:
                        r.pop(c, None)
        pivots.append(col)
        reduced.append(piv)
    return pivots, reduced


def rank_sparse(rows: Iterable[dict[int, Fraction]], ncols: int) -> int:
    """Rank only; row echelon without back-elimination."""
    pending: dict[int, list[dict[int, Fraction]]] = {}

    def push(row: dict[int, Fraction]) -> None:
        if row:
            pending.setdefault(min(row), []).append(row)

    for row in rows:
        push({c: v for c, v in row.items() if v})

    rank = 0
    for col in range(ncols):
        bucket = pending.pop(col, None)
        if not bucket:
            continue
        piv = bucket.pop(0)
        inv = 1 / piv[col]
        for row in bucket:
            factor = row[col] * inv
            for c, v in piv.items():
                s = row.get(c, Fraction(0)) - factor * v
                if s:
                    row[c] = s
                else:
                    row.pop(c, None)
            push(row)
        rank += 1
    return rank


def kernel_sparse(rows: Iterable[dict[int, Fraction]], ncols: int) -> tuple[list[int], list[dict[int, Fraction]]]:
    """Canonical kernel basis from the reduced row echelon form.

    Returns (free columns, basis vectors as sparse dicts); basis vector k has
    entry 1 at free column k and is supported on pivot columns otherwise.
    Vectors are emitted in ascending free-column order (echelon order).
    """
    pivots, reduced = rref_sparse(rows, ncols)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis: list[dict[int, Fraction]] = []
    for f in free:
        vec: dict[int, Fraction] = {f: Fraction(1)}
        for p, row in zip(pivots, reduced):
            v = row.get(f)
            if v:
                vec[p] = -v
        basis.append(vec)
    return free, basis


def solve_rational_kernel(M: Sequence[Sequence[Scalar]]) -> list[list[Fraction]]:
    """Exact kernel basis of a dense rational matrix (reduced echelon form).

    The basis is canonical: one vector per free column, in echelon order,
    with unit entry at its free column.  Size of the basis equals
    cols - rank(M); an empty matrix of c columns yields the standard basis.
    """
    M = [list(row) for row in M]
    ncols = len(M[0]) if M else 0
    rows = [
        {j: Fraction(v) for j, v in enumerate(row) if v}
        for row in M
    ]
    _, basis = kernel_sparse(rows, ncols)
    return [[vec.get(j, Fraction(0)) for j in range(ncols)] for vec in basis]
