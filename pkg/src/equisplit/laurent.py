"""Exact sparse Laurent polynomials in one variable over the rationals.

A Laurent polynomial is stored as a sparse map from integer exponent to a
nonzero ``fractions.Fraction`` coefficient.  The variable is written ``z``
throughout; a polynomial "in w" is simply a Laurent polynomial with
nonnegative exponents whose variable is read as w.  All arithmetic is exact.

The polynomial-only helpers (division, gcd, extended gcd, unimodular
completion) require nonnegative exponents and raise ``ValueError`` otherwise.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

#: Exact scalar type: always reduced, positive denominator, zero is 0/1.
Rational = Fraction

Scalar = Union[int, Fraction]


def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"expected an int or Fraction, got {type(c).__name__}")


class LaurentPoly:
    """A sparse Laurent polynomial sum(c_e * z**e) with rational c_e.

    Invariant: ``terms`` holds no zero coefficients.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Scalar] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[int(e)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def variable(cls) -> "LaurentPoly":
        return cls({1: 1})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {0}

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_polynomial(self) -> bool:
        """True if all exponents are nonnegative (an element of k[z])."""
        return all(e >= 0 for e in self.terms)

    @property
    def ord(self) -> int:
        """Minimum exponent; raises on the zero polynomial."""
        if not self.terms:
            raise ValueError("the zero polynomial has no order")
        return min(self.terms)

    @property
    def deg(self) -> int:
        """Maximum exponent; raises on the zero polynomial."""
        if not self.terms:
            raise ValueError("the zero polynomial has no degree")
        return max(self.terms)

    def coeff(self, exp: int) -> Fraction:
        return self.terms.get(exp, Fraction(0))

    def leading_coeff(self) -> Fraction:
        return self.terms[self.deg]

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.terms.get(0, Fraction(0))

    def monomials(self) -> Iterator[tuple[int, Fraction]]:
        """Yield (exponent, coefficient) pairs in ascending exponent order."""
        for e in sorted(self.terms):
            yield e, self.terms[e]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = terms
        return out

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e, Fraction(0)) - c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = terms
        return out

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if len(self.terms) > len(other.terms):
            self, other = other, self
        terms: dict[int, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def scale(self, c: Scalar) -> "LaurentPoly":
        c = _as_fraction(c)
        if not c:
            return LaurentPoly()
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by z**k."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = {e + k: c for e, c in self.terms.items()}
        return out

    def invert_variable(self) -> "LaurentPoly":
        """Substitute z -> 1/z (exponent negation)."""
        out = LaurentPoly.__new__(LaurentPoly)
        out.terms = {-e: c for e, c in self.terms.items()}
        return out

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers are not defined for polynomials")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    __hash__ = None  # mutable mapping inside; equality only

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.monomials():
            if e == 0:
                parts.append(str(c))
            else:
                var = "z" if e == 1 else f"z^{e}"
                if c == 1:
                    parts.append(var)
                elif c == -1:
                    parts.append(f"-{var}")
                else:
                    parts.append(f"{c}*{var}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.one()


# -- polynomial (nonnegative exponent) helpers -----------------------------


def _require_polynomial(p: LaurentPoly, what: str = "argument") -> None:
    if not p.is_polynomial():
        raise ValueError(f"{what} must have nonnegative exponents, got {p!r}")


def poly_divmod(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Quotient and remainder of polynomials, deg(rem) < deg(b)."""
    _require_polynomial(a)
    _require_polynomial(b)
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q = LaurentPoly()
    r = a
    db = b.deg
    lb = b.leading_coeff()
    while not r.is_zero() and r.deg >= db:
        t = LaurentPoly.monomial(r.deg - db, r.leading_coeff() / lb)
        q = q + t
        r = r - t * b
    return q, r


def poly_exact_div(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Division known to be exact; raises if a remainder is left."""
    q, r = poly_divmod(a, b)
    if not r.is_zero():
        raise ValueError(f"{a!r} is not divisible by {b!r}")
    return q


def poly_monic(p: LaurentPoly) -> LaurentPoly:
    if p.is_zero():
        return p
    return p.scale(1 / p.leading_coeff())


def poly_gcd(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Monic gcd of polynomials (zero if both are zero)."""
    _require_polynomial(a)
    _require_polynomial(b)
    while not b.is_zero():
        _, r = poly_divmod(a, b)
        a, b = b, r
    return poly_monic(a)


def poly_gcd_list(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    g = LaurentPoly()
    for p in polys:
        g = poly_gcd(g, p)
        if g.is_constant() and not g.is_zero():
            return g
    return g


def poly_ext_gcd2(
    a: LaurentPoly, b: LaurentPoly
) -> tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """Extended Euclid: return (g, s, t) with s*a + t*b = g, g the monic gcd."""
    _require_polynomial(a)
    _require_polynomial(b)
    r0, r1 = a, b
    s0, s1 = LaurentPoly.one(), LaurentPoly.zero()
    t0, t1 = LaurentPoly.zero(), LaurentPoly.one()
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return LaurentPoly(), s0, t0
    lc = r0.leading_coeff()
    return r0.scale(1 / lc), s0.scale(1 / lc), t0.scale(1 / lc)


def poly_ext_gcd(polys: list[LaurentPoly]) -> tuple[LaurentPoly, list[list[LaurentPoly]]]:
    """Unimodular completion of a polynomial column via 2x2 Bezout blocks.

    Returns (g, U) with g the monic gcd of the inputs and U a k-by-k
    polynomial matrix with det(U) a nonzero rational constant such that
    U @ (f_1, ..., f_k)^T = (g, 0, ..., 0)^T.  Entries are folded left to
    right, so the output is deterministic.
    """
    k = len(polys)
    if k == 0 or all(p.is_zero() for p in polys):
        raise ValueError("poly_ext_gcd needs at least one nonzero polynomial")
    for p in polys:
        _require_polynomial(p)

    U = [
        [LaurentPoly.one() if i == j else LaurentPoly.zero() for j in range(k)]
        for i in range(k)
    ]
    g = polys[0]
    for i in range(1, k):
        f = polys[i]
        if f.is_zero():
            continue
        g2, s, t = poly_ext_gcd2(g, f)
        # 2x2 block [[s, t], [-f/g2, g/g2]] has determinant exactly 1.
        m00, m01 = s, t
        m10, m11 = -poly_exact_div(f, g2), poly_exact_div(g, g2)
        row0 = [m00 * U[0][j] + m01 * U[i][j] for j in range(k)]
        rowi = [m10 * U[0][j] + m11 * U[i][j] for j in range(k)]
        U[0], U[i] = row0, rowi
        g = g2
    if not g.is_zero() and g.leading_coeff() != 1:
        inv = 1 / g.leading_coeff()
        U[0] = [u.scale(inv) for u in U[0]]
        g = g.scale(inv)
    return g, U
