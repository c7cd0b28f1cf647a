"""Exact sheaf cohomology on the projective line, with weight grading.

H^0 is computed by a finite adjugate-kernel parametrization.  Writing
h(z) = g(1/z), the section equation g(1/z) = A f forces every exponent of h
into [o, 0] where o is the minimum exponent over the monomials of A, and
f = c^-1 z^-Dt adj(A) h (det A = c z^Dt) is polynomial iff every coefficient
of z^e with e < Dt in adj(A) h vanishes.  That is a finite rational linear
system in the coefficients of h; its kernel is graded by the weight
lambdaInf[i] - e*a of the unknown h[i][e], and each weight class is solved
separately (classes never mix because the system is graded).

H^1 is computed from a truncated two-chart cover complex: chains (f, g) with
deg f <= W + E and deg g <= W map to overlap vectors by (f, g) -> A f - g(1/z),
and the cokernel is taken inside the exponent window [-W, W].  Every overlap
monomial with exponent <= 0 is hit by a g-chain alone, so the elimination
runs on exponents in [1, W] only.  The window doubles until two consecutive
windows agree and the Euler identity h0 - h1 = degree + rank holds; a hard
cap turns a failure to stabilize into an error.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .bundle import EquivariantBundle, Weight, degree, dual, twist, weight_scale, weight_sub
from .equivariant import Character, monomial_weight
from .laurent import LaurentPoly
from .linalg import kernel_sparse, rank_sparse, rref_sparse

#: Environment override for the absolute window cap of the truncated complex.
MAX_WINDOW_ENV = "EQUISPLIT_MAX_WINDOW"

_WINDOW_CAP_FACTOR = 64


class StabilizationError(RuntimeError):
    """The truncated overlap complex failed to stabilize below the cap."""


@dataclass
class Section:
    """A global section: chart-0 vector f in k[z]^m, chart-inf vector g in k[w]^m.

    Compatibility (convention C1): g(1/z) = A(z) f(z) exactly.  ``weight`` is
    set when the section is a torus eigenvector.
    """

    f: tuple[LaurentPoly, ...]
    g: tuple[LaurentPoly, ...]
    weight: Weight | None = None

    def compatibility_violation(self, E: EquivariantBundle) -> str | None:
        for i in range(E.rank):
            lhs = LaurentPoly.zero()
            for j in range(E.rank):
                lhs = lhs + E.A.entries[i][j] * self.f[j]
            if lhs != self.g[i].invert_variable():
                return f"component {i}: A f != g(1/z)"
        for i, p in enumerate(self.f):
            if not p.is_polynomial():
                return f"f[{i}] has negative exponents"
        for i, p in enumerate(self.g):
            if not p.is_polynomial():
                return f"g[{i}] has negative exponents"
        if self.weight is not None and E.torus.rank > 0:
            for i, p in enumerate(self.f):
                for d, _ in p.monomials():
                    if monomial_weight(E, 0, i, d) != self.weight:
                        return f"f[{i}] monomial z^{d} is not of weight {self.weight}"
            for i, p in enumerate(self.g):
                for e, _ in p.monomials():
                    if monomial_weight(E, "inf", i, e) != self.weight:
                        return f"g[{i}] exponent {e} is not of weight {self.weight}"
        return None


@dataclass
class _BasisRecord:
    section: Section
    weight: Weight
    echelon_col: int  # global free-column index; canonical ordering key


def _h0_basis(E: EquivariantBundle) -> list[_BasisRecord]:
    """Canonical kernel basis of the section system, in echelon order.

    Unknowns h[i][e] are ordered by (component i, exponent e ascending); the
    reduced-echelon kernel basis of a graded system is automatically
    weight-homogeneous, so every record carries a single weight.
    """
    m = E.rank
    if m == 0:
        return []
    det = E.det_transition()
    if not det.is_monomial():
        raise ValueError("invalid bundle: det(A) is not a nonzero monomial")
    rng = E.A.exponent_range()
    if rng is None:
        raise ValueError("invalid bundle: zero transition matrix")
    lo, _ = rng
    if lo > 0:
        return []
    ((dt_exp, dt_c),) = det.terms.items()
    adj = E.adj_transition()

    width = 1 - lo  # exponents lo..0
    ncols = m * width

    def col(i: int, e: int) -> int:
        return i * width + (e - lo)

    a = E.torus.a
    col_weight: list[Weight] = [
        weight_sub(E.lambdaInf[i], weight_scale(e, a)) for i in range(m) for e in range(lo, 1)
    ]

    # constraint rows: coefficient of z^x in (adj(A) h)_i must vanish for x < dt_exp
    rows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(m):
        for j in range(m):
            for d, c in adj.entries[i][j].monomials():
                for e in range(lo, 1):
                    x = d + e
                    if x < dt_exp:
                        row = rows.setdefault((i, x), {})
                        cidx = col(j, e)
                        s = row.get(cidx, Fraction(0)) + c
                        if s:
                            row[cidx] = s
                        else:
                            del row[cidx]

    # group columns by weight and solve each class independently; a graded
    # system never mixes classes within a row, so straddling rows mean the
    # input was not actually equivariant
    classes: dict[Weight, list[int]] = {}
    for cidx in range(ncols):
        classes.setdefault(col_weight[cidx], []).append(cidx)
    if E.torus.rank:
        for row in rows.values():
            seen = {col_weight[c] for c in row}
            if len(seen) > 1:
                raise ValueError(
                    "section system mixes weight classes; the bundle is not equivariant"
                )

    records: list[_BasisRecord] = []
    for chi in sorted(classes):
        cols = classes[chi]
        local_index = {c: k for k, c in enumerate(cols)}
        local_rows = []
        for row in rows.values():
            local = {local_index[c]: v for c, v in row.items() if c in local_index}
            if local:
                local_rows.append(local)
        free, basis = kernel_sparse(local_rows, len(cols))
        for fcol, vec in zip(free, basis):
            h = [LaurentPoly.zero() for _ in range(m)]
            for lc, v in vec.items():
                gcol = cols[lc]
                i, e = divmod(gcol, width)
                h[i] = h[i] + LaurentPoly.monomial(e + lo, v)
            section = _section_from_h(E, h, adj, dt_exp, dt_c, chi)
            records.append(_BasisRecord(section, chi, cols[fcol]))
    records.sort(key=lambda r: r.echelon_col)
    return records


def _section_from_h(
    E: EquivariantBundle,
    h: list[LaurentPoly],
    adj,
    dt_exp: int,
    dt_c: Fraction,
    chi: Weight,
) -> Section:
    m = E.rank
    inv = 1 / dt_c
    f = []
    for i in range(m):
        acc = LaurentPoly.zero()
        for j in range(m):
            acc = acc + adj.entries[i][j] * h[j]
        fi = acc.shift(-dt_exp).scale(inv)
        if not fi.is_polynomial():
            raise AssertionError("adjugate parametrization produced a non-polynomial f")
        f.append(fi)
    g = [hi.invert_variable() for hi in h]
    weight = chi if E.torus.rank > 0 else ()
    return Section(tuple(f), tuple(g), weight)


def h0_sections(E: EquivariantBundle) -> list[tuple[Section, Weight]]:
    """A basis of the global sections, graded by weight.

    Sections are returned sorted by weight (then by echelon position); the
    number of entries is dim H^0.
    """
    records = _h0_basis(E)
    records.sort(key=lambda r: (r.weight, r.echelon_col))
    return [(r.section, r.weight) for r in records]


def h0_dim(E: EquivariantBundle) -> int:
    return len(_h0_basis(E))


def h0_character(E: EquivariantBundle) -> Character:
    return Character.from_weights(r.weight for r in _h0_basis(E))


# -- truncated overlap (Cech) complex ---------------------------------------


def _initial_window(E: EquivariantBundle) -> int:
    rng = E.A.exponent_range()
    if rng is None:
        raise ValueError("invalid bundle: zero transition matrix")
    lo, hi = rng
    return max(abs(lo), abs(hi)) + max(E.rank, 1)


def _window_cap(initial: int, max_window: int | None) -> int:
    if max_window is not None:
        return max_window
    env = os.environ.get(MAX_WINDOW_ENV)
    if env is not None:
        return int(env)
    return _WINDOW_CAP_FACTOR * initial


def _cech_once(E: EquivariantBundle, W: int) -> tuple[int, Character]:
    """(kernel dimension, cokernel character) of the W-truncated complex."""
    m = E.rank
    lo, hi = E.A.exponent_range()
    margin = max(0, -lo)
    Wf = W + margin  # chart-0 degree bound
    Wg = W  # chart-inf degree bound

    # kernel: unknowns f[j][e], e in [0, Wf] and g[i][e'], e' in [0, Wg]
    fw, gw = Wf + 1, Wg + 1

    def fcol(j: int, e: int) -> int:
        return j * fw + e

    def gcol(i: int, e: int) -> int:
        return m * fw + i * gw + e

    ncols = m * fw + m * gw
    krows: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i in range(m):
        for j in range(m):
            for d, c in E.A.entries[i][j].monomials():
                for e in range(fw):
                    row = krows.setdefault((i, d + e), {})
                    cidx = fcol(j, e)
                    s = row.get(cidx, Fraction(0)) + c
                    if s:
                        row[cidx] = s
                    else:
                        del row[cidx]
    for i in range(m):
        for e in range(gw):
            krows.setdefault((i, -e), {})[gcol(i, e)] = Fraction(-1)
    kernel_dim = ncols - rank_sparse(krows.values(), ncols)

    # cokernel inside exponents [1, W]: the g-side image covers everything
    # below, so only chart-0 generators projected to the window remain.
    def ocol(i: int, d: int) -> int:
        return (d - 1) * m + i

    gen_rows = []
    for j in range(m):
        base = [(i, d, c) for i in range(m) for d, c in E.A.entries[i][j].monomials()]
        for e in range(fw):
            row: dict[int, Fraction] = {}
            for i, d, c in base:
                x = d + e
                if 1 <= x <= W:
                    cidx = ocol(i, x)
                    s = row.get(cidx, Fraction(0)) + c
                    if s:
                        row[cidx] = s
                    else:
                        del row[cidx]
            if row:
                gen_rows.append(row)
    pivots, _ = rref_sparse(gen_rows, m * W)
    pivot_set = set(pivots)
    weights = []
    for cidx in range(m * W):
        if cidx not in pivot_set:
            d, i = divmod(cidx, m)
            weights.append(monomial_weight(E, "inf", i, -(d + 1)))
    return kernel_dim, Character.from_weights(weights)


def cech_cohomology(
    E: EquivariantBundle, max_window: int | None = None
) -> tuple[int, Character]:
    """Stabilized (h0 dimension, h1 character) from the truncated complex.

    Stops when two consecutive windows agree and the Euler identity
    h0 - h1 = degree + rank holds; raises StabilizationError at the cap,
    which signals a bug or an invalid instance, never a routine outcome.
    """
    m = E.rank
    if m == 0:
        return 0, Character()
    deg = degree(E)
    W = _initial_window(E)
    cap = _window_cap(W, max_window)
    prev: tuple[int, Character] | None = None
    while W <= cap:
        cur = _cech_once(E, W)
        if prev is not None and cur == prev and cur[0] - cur[1].total() == deg + m:
            return cur
        prev = cur
        W *= 2
    raise StabilizationError(
        f"overlap complex did not stabilize below window {cap} "
        f"(set {MAX_WINDOW_ENV} to raise the cap)"
    )


def cech_h0_dim(E: EquivariantBundle, max_window: int | None = None) -> int:
    """H^0 dimension from the truncated complex (independent of the adjugate route)."""
    return cech_cohomology(E, max_window)[0]


def h1_character(E: EquivariantBundle, max_window: int | None = None) -> Character:
    return cech_cohomology(E, max_window)[1]


def h1_dim(E: EquivariantBundle, max_window: int | None = None) -> int:
    return cech_cohomology(E, max_window)[1].total()


# -- cross-check harness -----------------------------------------------------


@dataclass
class EulerReport:
    h0: int
    h1: int
    degree: int
    rank: int
    euler_ok: bool
    serre_h0: int
    serre_ok: bool

    @property
    def ok(self) -> bool:
        return self.euler_ok and self.serre_ok

    def to_json(self) -> dict:
        return {
            "h0": self.h0,
            "h1": self.h1,
            "degree": self.degree,
            "rank": self.rank,
            "euler_ok": self.euler_ok,
            "serre_h0": self.serre_h0,
            "serre_ok": self.serre_ok,
        }


def euler_check(E: EquivariantBundle, max_window: int | None = None) -> EulerReport:
    """Verify h0 - h1 = degree + rank and dimension-level duality.

    The duality check compares dim H^1(E) with dim H^0 of the dual twisted
    by the degree -2 line bundle.
    """
    h0 = h0_dim(E)
    h1 = h1_dim(E, max_window)
    deg = degree(E)
    zero = E.torus.zero_weight
    serre_h0 = h0_dim(twist(dual(E), -2, zero))
    return EulerReport(
        h0=h0,
        h1=h1,
        degree=deg,
        rank=E.rank,
        euler_ok=(h0 - h1 == deg + E.rank),
        serre_h0=serre_h0,
        serre_ok=(h1 == serre_h0),
    )
