"""Weight bookkeeping: characters, linearizations, graded bundle maps.

Weight conventions follow the section action C3 in :mod:`equisplit.bundle`.
The weight of a Hom-monomial is fixed as

* chart 0:   (target frame weight) - (source frame weight) - d*a,
* chart inf: (target frame weight) - (source frame weight) + e*a,

for a z-monomial z^d resp. a w-monomial w^e; composition of graded maps adds
weights under this convention, which the tests exercise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .bundle import (
    EquivariantBundle,
    TorusAction,
    Weight,
    line_bundle,
    transition_law_violations,
    weight_add,
    weight_scale,
    weight_sub,
)
from .laurent import LaurentPoly
from .linalg import LaurentMatrix

Chart = Literal[0, "inf"]


class Character:
    """A finite multiset of weights with integer (possibly negative) multiplicities."""

    __slots__ = ("mult",)

    def __init__(self, mult: dict[Weight, int] | None = None):
        self.mult = {tuple(w): int(m) for w, m in (mult or {}).items() if m != 0}

    @classmethod
    def from_weights(cls, weights: Iterable[Weight]) -> "Character":
        out: dict[Weight, int] = {}
        for w in weights:
            w = tuple(w)
            out[w] = out.get(w, 0) + 1
        return cls(out)

    def total(self) -> int:
        """Sum of multiplicities (the dimension, for honest characters)."""
        return sum(self.mult.values())

    def __add__(self, other: "Character") -> "Character":
        out = dict(self.mult)
        for w, m in other.mult.items():
            out[w] = out.get(w, 0) + m
        return Character(out)

    def __sub__(self, other: "Character") -> "Character":
        out = dict(self.mult)
        for w, m in other.mult.items():
            out[w] = out.get(w, 0) - m
        return Character(out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Character):
            return NotImplemented
        return self.mult == other.mult

    __hash__ = None

    def __bool__(self) -> bool:
        return bool(self.mult)

    def items_sorted(self) -> list[tuple[Weight, int]]:
        return sorted(self.mult.items())

    def to_json(self) -> list[dict]:
        return [{"weight": list(w), "mult": m} for w, m in self.items_sorted()]

    @classmethod
    def from_json(cls, data: list[dict]) -> "Character":
        return cls({tuple(item["weight"]): item["mult"] for item in data})

    def __repr__(self) -> str:
        inner = ", ".join(f"{w}: {m}" for w, m in self.items_sorted())
        return f"Character({{{inner}}})"


def check_equivariance(E: EquivariantBundle) -> list[str]:
    """Violations of the monomial weight law d*a = lambdaInf[i] - lambda0[j]."""
    return transition_law_violations(E.A, E.lambdaInf, E.lambda0, E.torus)


def standard_linearization(n: int, lam: Weight, torus: TorusAction) -> EquivariantBundle:
    """The degree-n line bundle linearized with chart-0 weight lam."""
    return line_bundle(n, lam, torus)


def monomial_weight(E: EquivariantBundle, chart: Chart, i: int, exponent: int) -> Weight:
    """Weight of the exponent's monomial in frame component i (convention C3)."""
    if not 0 <= i < E.rank:
        raise IndexError(f"frame index {i} out of range for rank {E.rank}")
    a = E.torus.a
    if chart == 0:
        return weight_sub(E.lambda0[i], weight_scale(exponent, a))
    if chart == "inf":
        return weight_add(E.lambdaInf[i], weight_scale(exponent, a))
    raise ValueError(f"chart must be 0 or 'inf', got {chart!r}")


def chart_map_violations(
    M: LaurentMatrix,
    target: tuple[Weight, ...],
    source: tuple[Weight, ...],
    torus: TorusAction,
    chart: Chart,
    label: str = "M",
) -> list[str]:
    """Equivariance of a chart-local frame map (new coords = M @ old coords).

    chart 0 (z-matrix): every monomial z^d of M[i][j] needs
    d*a = target[i] - source[j]; chart inf (w-matrix): every w^e needs
    e*a = source[j] - target[i].
    """
    if torus.rank == 0:
        return []
    out = []
    a = torus.a
    for i in range(M.rows):
        for j in range(M.cols):
            if chart == 0:
                need = weight_sub(target[i], source[j])
            else:
                need = weight_sub(source[j], target[i])
            for e, _ in M.entries[i][j].monomials():
                if weight_scale(e, a) != need:
                    out.append(
                        f"{label}[{i}][{j}]: exponent {e} has e*a={weight_scale(e, a)}, "
                        f"law requires {need}"
                    )
    return out


def derive_target_weights(
    M: LaurentMatrix,
    source: tuple[Weight, ...],
    torus: TorusAction,
    chart: Chart,
) -> tuple[Weight, ...]:
    """Row weights forced by the chart-map law (rows must be nonzero).

    Only the first monomial of each row is used; full consistency is what
    :func:`chart_map_violations` checks.
    """
    if torus.rank == 0:
        return ((),) * M.rows
    a = torus.a
    out = []
    for i in range(M.rows):
        for j in range(M.cols):
            entry = M.entries[i][j]
            if entry.is_zero():
                continue
            e = min(entry.terms)
            if chart == 0:
                out.append(weight_add(source[j], weight_scale(e, a)))
            else:
                out.append(weight_sub(source[j], weight_scale(e, a)))
            break
        else:
            raise ValueError(f"row {i} is zero; weights cannot be derived")
    return tuple(out)


@dataclass
class HomElement:
    """A bundle map: chart-local matrices (F0 over k[z], FInf over k[w]).

    Satisfies the intertwining law  target.A @ F0 = FInf(1/z) @ source.A
    as an exact Laurent identity.
    """

    source: EquivariantBundle
    target: EquivariantBundle
    F0: LaurentMatrix
    FInf: LaurentMatrix

    def intertwining_violation(self) -> str | None:
        lhs = self.target.A @ self.F0
        rhs = self.FInf.invert_variable() @ self.source.A
        if lhs != rhs:
            return "target.A @ F0 != FInf(1/z) @ source.A"
        return None

    def __add__(self, other: "HomElement") -> "HomElement":
        return HomElement(self.source, self.target, self.F0 + other.F0, self.FInf + other.FInf)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.F0.entries for e in row) and all(
            e.is_zero() for row in self.FInf.entries for e in row
        )


def hom_identity(E: EquivariantBundle) -> HomElement:
    n = E.rank
    return HomElement(E, E, LaurentMatrix.identity(n), LaurentMatrix.identity(n))


def hom_compose(g: HomElement, f: HomElement) -> HomElement:
    """The composite g o f (source of g must be the target of f)."""
    if g.source is not f.target and g.source != f.target:
        raise ValueError("hom composition source/target mismatch")
    return HomElement(f.source, g.target, g.F0 @ f.F0, g.FInf @ f.FInf)


def hom_monomial_weights(h: HomElement) -> set[Weight]:
    """All Hom-weights occurring among the monomials of h."""
    out: set[Weight] = set()
    a = h.source.torus.a
    for i in range(h.F0.rows):
        for j in range(h.F0.cols):
            base = weight_sub(h.target.lambda0[i], h.source.lambda0[j])
            for d, _ in h.F0.entries[i][j].monomials():
                out.add(weight_sub(base, weight_scale(d, a)))
    for i in range(h.FInf.rows):
        for j in range(h.FInf.cols):
            base = weight_sub(h.target.lambdaInf[i], h.source.lambdaInf[j])
            for e, _ in h.FInf.entries[i][j].monomials():
                out.add(weight_add(base, weight_scale(e, a)))
    return out


def weight_project_hom(h: HomElement, chi: Weight) -> HomElement:
    """Keep exactly the monomials of Hom-weight chi.

    Projection is idempotent and linear, components for distinct weights have
    disjoint support, and summing over all occurring weights returns h.  The
    input must satisfy the intertwining law; the output then does too.
    """
    bad = h.intertwining_violation()
    if bad:
        raise ValueError(f"weight_project_hom on a non-map: {bad}")
    a = h.source.torus.a
    chi = tuple(chi)

    def filter0(i: int, j: int, p: LaurentPoly) -> LaurentPoly:
        base = weight_sub(h.target.lambda0[i], h.source.lambda0[j])
        kept = {
            d: c for d, c in p.terms.items() if weight_sub(base, weight_scale(d, a)) == chi
        }
        return LaurentPoly(kept)

    def filterInf(i: int, j: int, p: LaurentPoly) -> LaurentPoly:
        base = weight_sub(h.target.lambdaInf[i], h.source.lambdaInf[j])
        kept = {
            e: c for e, c in p.terms.items() if weight_add(base, weight_scale(e, a)) == chi
        }
        return LaurentPoly(kept)

    F0 = LaurentMatrix(
        [[filter0(i, j, h.F0.entries[i][j]) for j in range(h.F0.cols)] for i in range(h.F0.rows)]
    )
    FInf = LaurentMatrix(
        [
            [filterInf(i, j, h.FInf.entries[i][j]) for j in range(h.FInf.cols)]
            for i in range(h.FInf.rows)
        ]
    )
    out = HomElement(h.source, h.target, F0, FInf)
    bad = out.intertwining_violation()
    if bad:
        raise AssertionError(f"graded component broke the intertwining law: {bad}")
    return out


def hom_element_from_section(
    source: EquivariantBundle,
    target: EquivariantBundle,
    f: list[LaurentPoly],
    g: list[LaurentPoly],
) -> HomElement:
    """Reshape a section of hom_bundle(source, target) into a bundle map.

    The flattening is j*rank(target) + i  ->  entry (i, j), matching the
    Kronecker index order used by :func:`equisplit.bundle.hom_bundle`.
    """
    mS, mT = source.rank, target.rank
    F0 = LaurentMatrix([[f[j * mT + i] for j in range(mS)] for i in range(mT)])
    FInf = LaurentMatrix([[g[j * mT + i] for j in range(mS)] for i in range(mT)])
    return HomElement(source, target, F0, FInf)


def section_from_hom_element(h: HomElement) -> tuple[list[LaurentPoly], list[LaurentPoly]]:
    mS, mT = h.source.rank, h.target.rank
    f = [h.F0.entries[i][j] for j in range(mS) for i in range(mT)]
    g = [h.FInf.entries[i][j] for j in range(mS) for i in range(mT)]
    return f, g
