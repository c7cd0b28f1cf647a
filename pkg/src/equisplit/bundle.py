"""Vector bundles on the projective line as Laurent transition matrices.

A rank-m bundle is a transition matrix A(z) that converts chart-0 section
coordinates into chart-infinity coordinates on the overlap; invertibility
over the Laurent ring means det A is a nonzero monomial.  A torus action is
recorded by a base character exponent vector ``a`` together with one integer
weight vector per frame vector on each chart.

Conventions (fixed here, cited everywhere else):

* C1 — a section is a pair (f, g) with f in k[z]^m, g in k[w]^m, w = 1/z,
  related by g(1/z) = A(z) f(z).
* C2 — the degree-n line bundle has transition z^(-n), so its global
  sections for n >= 0 are spanned by 1, z, ..., z^n.
* C3 — the torus acts on sections by (t.f)(z) = t^L0 f(alpha(t)^-1 z); the
  monomial z^d in component i has weight lambda0[i] - d*a on chart 0, and
  w-exponent j in component i has weight lambdaInf[i] + j*a on chart inf.

The equivariance law for transition entries follows: every monomial c*z^d of
A[i][j] must satisfy d*a = lambdaInf[i] - lambda0[j].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .laurent import LaurentPoly
from .linalg import LaurentMatrix, kron_adjugate, mat_adjugate, mat_det

Weight = tuple[int, ...]


def weight_add(u: Weight, v: Weight) -> Weight:
    return tuple(x + y for x, y in zip(u, v, strict=True))

def weight_sub(u: Weight, v: Weight) -> Weight:
    return tuple(x - y for x, y in zip(u, v, strict=True))

def weight_neg(u: Weight) -> Weight:
    return tuple(-x for x in u)

def weight_scale(k: int, u: Weight) -> Weight:
    return tuple(k * x for x in u)


@dataclass(frozen=True)
class TorusAction:
    """Torus of dimension ``rank`` acting through the character ``a``.

    rank = 0 encodes "no torus" (plain splitting mode); a may also be the
    zero vector, in which case the torus fixes the base pointwise.
    """

    rank: int
    a: Weight

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("torus rank must be nonnegative")
        if len(self.a) != self.rank:
            raise ValueError(f"base character has length {len(self.a)}, expected {self.rank}")
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))

    @property
    def zero_weight(self) -> Weight:
        return (0,) * self.rank

    def base_is_fixed(self) -> bool:
        """True when the action does not move the base coordinate."""
        return all(x == 0 for x in self.a)


NO_TORUS = TorusAction(0, ())


@dataclass(frozen=True)
class LineSummand:
    """A linearized line bundle: degree n with chart-0 weight lam.

    The induced chart-infinity weight is lam - n*a, forced by the
    equivariance law applied to the transition z^(-n).
    """

    n: int
    lam: Weight

    def chart_inf_weight(self, torus: TorusAction) -> Weight:
        return weight_sub(self.lam, weight_scale(self.n, torus.a))

    def sort_key(self) -> tuple:
        return (-self.n, self.lam)


class EquivariantBundle:
    """Transition matrix plus per-chart frame weights under a torus action."""

    __slots__ = ("A", "lambda0", "lambdaInf", "torus", "_det", "_adj")

    def __init__(
        self,
        A: LaurentMatrix,
        lambda0: tuple[Weight, ...],
        lambdaInf: tuple[Weight, ...],
        torus: TorusAction = NO_TORUS,
    ):
        self.A = A
        self.lambda0 = tuple(tuple(w) for w in lambda0)
        self.lambdaInf = tuple(tuple(w) for w in lambdaInf)
        self.torus = torus
        self._det: LaurentPoly | None = None
        self._adj: LaurentMatrix | None = None

    @property
    def rank(self) -> int:
        return self.A.rows

    def det_transition(self) -> LaurentPoly:
        if self._det is None:
            self._det = mat_det(self.A)
        return self._det

    def adj_transition(self) -> LaurentMatrix:
        if self._adj is None:
            self._adj = mat_adjugate(self.A)
        return self._adj

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EquivariantBundle):
            return NotImplemented
        return (
            self.A == other.A
            and self.lambda0 == other.lambda0
            and self.lambdaInf == other.lambdaInf
            and self.torus == other.torus
        )

    __hash__ = None

    def __repr__(self) -> str:
        return (
            f"EquivariantBundle(rank={self.rank}, torus_rank={self.torus.rank}, "
            f"lambda0={self.lambda0}, lambdaInf={self.lambdaInf}, A={self.A!r})"
        )


@dataclass
class ValidationReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def transition_law_violations(
    A: LaurentMatrix,
    lambda_rows: tuple[Weight, ...],
    lambda_cols: tuple[Weight, ...],
    torus: TorusAction,
    label: str = "A",
) -> list[str]:
    """Check d*a = lambda_rows[i] - lambda_cols[j] for every monomial of A.

    This is the transition-shaped law; chart-local frame maps use the same
    helper with the appropriate weight vectors.
    """
    if torus.rank == 0:
        return []
    out = []
    a = torus.a
    for i in range(A.rows):
        for j in range(A.cols):
            need = weight_sub(lambda_rows[i], lambda_cols[j])
            for d, _ in A.entries[i][j].monomials():
                if weight_scale(d, a) != need:
                    out.append(
                        f"{label}[{i}][{j}]: monomial z^{d} has d*a={weight_scale(d, a)}, "
                        f"law requires {need}"
                    )
    return out


def validate(E: EquivariantBundle) -> ValidationReport:
    """Report every violated bundle invariant (empty report means valid)."""
    v: list[str] = []
    m = E.rank
    if E.A.rows != E.A.cols:
        v.append(f"transition matrix is {E.A.rows}x{E.A.cols}, not square")
        return ValidationReport(v)
    if len(E.lambda0) != m or len(E.lambdaInf) != m:
        v.append(
            f"weight lists have lengths {len(E.lambda0)}/{len(E.lambdaInf)}, expected rank {m}"
        )
        return ValidationReport(v)
    r = E.torus.rank
    for name, lams in (("lambda0", E.lambda0), ("lambdaInf", E.lambdaInf)):
        for i, w in enumerate(lams):
            if len(w) != r:
                v.append(f"{name}[{i}] has length {len(w)}, expected torus rank {r}")
    if v:
        return ValidationReport(v)
    det = E.det_transition()
    if not det.is_monomial():
        v.append(f"det(A) = {det!r} is not a nonzero monomial")
    v.extend(transition_law_violations(E.A, E.lambdaInf, E.lambda0, E.torus))
    return ValidationReport(v)


def degree(E: EquivariantBundle) -> int:
    """Minus the z-exponent of det(A); additive over direct sums."""
    det = E.det_transition()
    if not det.is_monomial():
        raise ValueError("transition determinant is not a monomial")
    ((e, _),) = det.terms.items()
    return -e


def line_bundle(n: int, lam: Weight = (), torus: TorusAction = NO_TORUS) -> EquivariantBundle:
    """The degree-n line bundle with chart-0 linearization weight lam."""
    lam = tuple(lam)
    if len(lam) != torus.rank:
        raise ValueError("linearization weight length must equal the torus rank")
    A = LaurentMatrix([[LaurentPoly.monomial(-n)]])
    return EquivariantBundle(A, (lam,), (weight_sub(lam, weight_scale(n, torus.a)),), torus)


def twist(E: EquivariantBundle, n: int, lam: Weight) -> EquivariantBundle:
    """Tensor with the (n, lam)-linearized line bundle.

    Transition becomes z^(-n) A; chart-0 weights shift by lam, chart-inf
    weights by lam - n*a; the degree grows by rank*n.
    """
    lam = tuple(lam)
    shift_inf = weight_sub(lam, weight_scale(n, E.torus.a))
    out = EquivariantBundle(
        E.A.scale(LaurentPoly.monomial(-n)),
        tuple(weight_add(w, lam) for w in E.lambda0),
        tuple(weight_add(w, shift_inf) for w in E.lambdaInf),
        E.torus,
    )
    if E._det is not None:
        out._det = E._det.shift(-n * E.rank)
    if E._adj is not None:
        out._adj = E._adj.scale(LaurentPoly.monomial(-n * (E.rank - 1)))
    return out


def dual(E: EquivariantBundle) -> EquivariantBundle:
    """Dual bundle: transition transpose(A^-1), weights negated."""
    det = E.det_transition()
    if not det.is_monomial():
        raise ValueError("transition determinant is not a monomial")
    ((e, c),) = det.terms.items()
    inv_det = LaurentPoly.monomial(-e, 1 / c)
    adj = E.adj_transition()
    B = adj.transpose().scale(inv_det)
    out = EquivariantBundle(
        B,
        tuple(weight_neg(w) for w in E.lambda0),
        tuple(weight_neg(w) for w in E.lambdaInf),
        E.torus,
    )
    out._det = inv_det
    out._adj = E.A.transpose().scale(inv_det)
    return out


def direct_sum(E: EquivariantBundle, F: EquivariantBundle) -> EquivariantBundle:
    """Block-diagonal transition with concatenated weights."""
    if E.torus != F.torus:
        raise ValueError("direct sum of bundles over different tori")
    m, n = E.rank, F.rank
    A = LaurentMatrix.zeros(m + n, m + n)
    for i in range(m):
        for j in range(m):
            A.entries[i][j] = E.A.entries[i][j]
    for i in range(n):
        for j in range(n):
            A.entries[m + i][m + j] = F.A.entries[i][j]
    return EquivariantBundle(
        A, E.lambda0 + F.lambda0, E.lambdaInf + F.lambdaInf, E.torus
    )


def hom_bundle(E: EquivariantBundle, F: EquivariantBundle) -> EquivariantBundle:
    """The bundle of morphisms E -> F, realized as dual(E) tensor F.

    Index pairs (j, i) with j a frame index of E and i of F are flattened as
    j*rank(F) + i, so a global section vector reshapes to the chart-0 matrix
    of a bundle map (see equivariant.hom_element_from_section).
    """
    if E.torus != F.torus:
        raise ValueError("hom of bundles over different tori")
    dE = dual(E)
    K = dE.A.kron(F.A)
    lam0 = tuple(
        weight_add(dE.lambda0[j], F.lambda0[i]) for j in range(E.rank) for i in range(F.rank)
    )
    lamInf = tuple(
        weight_add(dE.lambdaInf[j], F.lambdaInf[i]) for j in range(E.rank) for i in range(F.rank)
    )
    out = EquivariantBundle(K, lam0, lamInf, E.torus)
    detE, detF = dE.det_transition(), F.det_transition()
    ((eE, cE),) = detE.terms.items()
    ((eF, cF),) = detF.terms.items()
    out._det = LaurentPoly.monomial(eE * F.rank + eF * E.rank, cE**F.rank * cF**E.rank)
    if E.rank and F.rank:
        out._adj = kron_adjugate(dE.A, F.A, detE, detF)
    return out


# -- seeded random instances with hidden ground truth -----------------------

_COEFF_POOL = (
    Fraction(1),
    Fraction(-1),
    Fraction(2),
    Fraction(-2),
    Fraction(3),
    Fraction(1, 2),
    Fraction(-1, 2),
)

_MAX_OP_EXP = 3


def _solve_exponent(diff: Weight, a: Weight) -> int | None:
    """The unique integer e with e*a = diff, if any (a nonzero)."""
    for ak, dk in zip(a, diff):
        if ak != 0:
            if dk % ak != 0:
                return None
            e = dk // ak
            return e if weight_scale(e, a) == diff else None
    return None


def random_instance(
    seed: int,
    summands: list[LineSummand],
    complexity: int,
    torus: TorusAction = NO_TORUS,
) -> tuple[EquivariantBundle, list[LineSummand]]:
    """A seeded bundle equivariantly isomorphic to the given line-bundle sum.

    Starting from the diagonal transition diag(z^(-n_i)) with the given
    weights, ``complexity`` weight-respecting elementary operations are
    applied: unipotent column adds over k[z], unipotent row adds over k[w]
    (monomial multipliers, exponent window <= 3) and transpositions carrying
    their weight swap.  When a sampled add admits no legal exponent the
    operation falls back to a transposition, so the op count is exact and
    generation always terminates.  Deterministic for a fixed seed; the
    returned bundle validates.  The second component is the hidden answer:
    the summand multiset in canonical order.
    """
    for s in summands:
        if len(s.lam) != torus.rank:
            raise ValueError("summand weight length must equal the torus rank")
    A = LaurentMatrix.diagonal([LaurentPoly.monomial(-s.n) for s in summands])
    lam0 = [s.lam for s in summands]
    lamInf = [s.chart_inf_weight(torus) for s in summands]
    _apply_random_ops(A, lam0, lamInf, torus, random.Random(seed), complexity)
    E = EquivariantBundle(A, tuple(lam0), tuple(lamInf), torus)
    hidden = sorted(summands, key=LineSummand.sort_key)
    return E, hidden


def random_reframe(E: EquivariantBundle, seed: int, complexity: int) -> EquivariantBundle:
    """E rewritten in fresh random chart-local frames (same isomorphism class)."""
    A = LaurentMatrix([row[:] for row in E.A.entries])
    lam0 = list(E.lambda0)
    lamInf = list(E.lambdaInf)
    _apply_random_ops(A, lam0, lamInf, E.torus, random.Random(seed), complexity)
    return EquivariantBundle(A, tuple(lam0), tuple(lamInf), E.torus)


def _apply_random_ops(
    A: LaurentMatrix,
    lam0: list[Weight],
    lamInf: list[Weight],
    torus: TorusAction,
    rng: random.Random,
    complexity: int,
) -> None:
    m = A.rows
    a = torus.a
    trivial_a = torus.base_is_fixed()

    def legal_exponents(diff: Weight, lo: int, hi: int, need_equal: bool) -> list[int]:
        if torus.rank == 0:
            return list(range(lo, hi + 1))
        if trivial_a:
            return list(range(lo, hi + 1)) if need_equal else []
        e = _solve_exponent(diff, a)
        return [e] if e is not None and lo <= e <= hi else []

    def apply_col_add(i: int, j: int, e: int, c: Fraction) -> None:
        # column j += c*z^e * column i  (chart-0 frame change)
        mono = LaurentPoly.monomial(e, c)
        for r in range(m):
            A.entries[r][j] = A.entries[r][j] + A.entries[r][i] * mono

    def apply_row_add(i: int, j: int, e: int, c: Fraction) -> None:
        # row i += c*z^e * row j  (chart-inf frame change, e <= 0)
        mono = LaurentPoly.monomial(e, c)
        for s_ in range(m):
            A.entries[i][s_] = A.entries[i][s_] + A.entries[j][s_] * mono

    def apply_col_swap(i: int, j: int) -> None:
        for r in range(m):
            A.entries[r][i], A.entries[r][j] = A.entries[r][j], A.entries[r][i]
        lam0[i], lam0[j] = lam0[j], lam0[i]

    def apply_row_swap(i: int, j: int) -> None:
        A.entries[i], A.entries[j] = A.entries[j], A.entries[i]
        lamInf[i], lamInf[j] = lamInf[j], lamInf[i]

    for _ in range(complexity):
        if m < 2:
            break
        kind = rng.choice(("col_add", "row_add", "col_swap", "row_swap"))
        done = False
        if kind in ("col_add", "row_add"):
            for _attempt in range(16):
                i, j = rng.sample(range(m), 2)
                c = rng.choice(_COEFF_POOL)
                if kind == "col_add":
                    exps = legal_exponents(
                        weight_sub(lam0[i], lam0[j]), 0, _MAX_OP_EXP, lam0[i] == lam0[j]
                    )
                else:
                    exps = legal_exponents(
                        weight_sub(lamInf[i], lamInf[j]), -_MAX_OP_EXP, 0, lamInf[i] == lamInf[j]
                    )
                if exps:
                    e = rng.choice(exps)
                    if kind == "col_add":
                        apply_col_add(i, j, e, c)
                    else:
                        apply_row_add(i, j, e, c)
                    done = True
                    break
        if not done:
            i, j = rng.sample(range(m), 2)
            if kind == "col_swap" or kind == "col_add":
                apply_col_swap(i, j)
            else:
                apply_row_swap(i, j)
