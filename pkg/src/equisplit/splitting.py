"""Constructive equivariant splitting of bundles on the projective line.

The engine peels off a maximal-degree equivariant line subbundle (spanned by
an eigenvector of the global sections of a suitable twist), passes to the
quotient, and recurses; the accumulated chart-local frames leave an
upper-triangular transition with monomial diagonal, which a final
triangular-clearing pass makes diagonal.  The output is the summand list
together with the two invertible frame matrices whose product identity is
machine-checkable, plus an independent verifier for that certificate.

With no torus (rank-0 action) the same pipeline is a constructive splitting
of an arbitrary bundle into line bundles.
"""

from __future__ import annotations

from dataclasses import dataclass

from fractions import Fraction

from .bundle import (
    EquivariantBundle,
    LineSummand,
    TorusAction,
    Weight,
    degree,
    direct_sum,
    hom_bundle,
    line_bundle,
    twist,
    validate,
    weight_scale,
    weight_sub,
)
from .cohomology import Section, _h0_basis, h0_dim, h0_sections
from .equivariant import (
    HomElement,
    chart_map_violations,
    derive_target_weights,
    hom_element_from_section,
)
from .laurent import LaurentPoly, poly_ext_gcd, poly_gcd_list
from .linalg import LaurentMatrix, mat_adjugate, mat_det, rank_sparse


class InvariantViolation(RuntimeError):
    """A theory-guaranteed invariant failed: corrupted input or internal bug."""


def _inverse_constant_det(M: LaurentMatrix) -> LaurentMatrix:
    """Exact inverse of a square matrix whose determinant is a nonzero constant."""
    det = mat_det(M)
    if not det.is_constant() or det.is_zero():
        raise ValueError(f"matrix determinant {det!r} is not a nonzero constant")
    return mat_adjugate(M).scale(1 / det.constant_value())


def max_twist(E: EquivariantBundle) -> int:
    """The largest k with nonzero global sections after twisting by -k.

    Searches downward from -o (o the minimum exponent in A), where the
    section window is empty; theory guarantees a hit at or before
    ceil(degree/rank), so running past it is an internal error.
    """
    if E.rank == 0:
        raise ValueError("max_twist of a rank-0 bundle")
    rng = E.A.exponent_range()
    if rng is None:
        raise ValueError("invalid bundle: zero transition matrix")
    hi = -rng[0]
    floor = -(-degree(E) // E.rank)  # ceil
    zero = E.torus.zero_weight
    E.adj_transition()  # seed the cache once; twists reuse it
    for k in range(hi, floor - 1, -1):
        if h0_dim(twist(E, -k, zero)) > 0:
            return k
    raise InvariantViolation(
        f"twist search found no sections in [{floor}, {hi}]; "
        "the instance cannot be a valid bundle"
    )


def eigen_section(E: EquivariantBundle) -> Section:
    """A nonzero global section spanning a torus-stable line.

    Deterministic choice: the first vector of the canonical echelon kernel
    basis (unknowns ordered by component, then exponent).  Kernel vectors of
    the graded section system are weight-homogeneous, so this is always an
    eigenvector; with a nontrivial base action its entries are monomials.
    """
    records = _h0_basis(E)
    if not records:
        raise ValueError("the bundle has no nonzero global sections")
    rec = min(records, key=lambda r: r.echelon_col)
    section = rec.section
    if not E.torus.base_is_fixed():
        for p in (*section.f, *section.g):
            if not (p.is_zero() or p.is_monomial()):
                raise InvariantViolation(
                    "eigen-section entries must be monomials for a moving base"
                )
    return section


@dataclass
class PeelStep:
    """One induction step: V A U^-1 = [[z^-n, beta], [0, quotient.A]].

    U (over k[z]) and V (over k[w]) have constant nonzero determinant and are
    equivariant from the input frame weights to (summand weight, quotient
    weights); beta is the extension row.
    """

    summand: LineSummand
    U: LaurentMatrix
    V: LaurentMatrix
    beta: list[LaurentPoly]
    quotient: EquivariantBundle

    def reframed(self, torus: TorusAction) -> EquivariantBundle:
        """The input bundle in the new frame (block-triangular transition)."""
        m = self.quotient.rank + 1
        A = LaurentMatrix.zeros(m, m)
        A.entries[0][0] = LaurentPoly.monomial(-self.summand.n)
        for j, b in enumerate(self.beta):
            A.entries[0][j + 1] = b
        for i in range(self.quotient.rank):
            for j in range(self.quotient.rank):
                A.entries[i + 1][j + 1] = self.quotient.A.entries[i][j]
        return EquivariantBundle(
            A,
            (self.summand.lam,) + self.quotient.lambda0,
            (self.summand.chart_inf_weight(torus),) + self.quotient.lambdaInf,
            torus,
        )


def _completion_monomial(entries: list[LaurentPoly]) -> LaurentMatrix:
    """M with M @ entries = e_1 for a monomial vector whose minimal exponent is 0.

    Pivot swap, constant scaling, then monomial eliminations; every factor is
    equivariant monomial-by-monomial when the entries share one weight.
    """
    k = len(entries)
    pivot = None
    for i, p in enumerate(entries):
        if p.is_zero():
            continue
        if not p.is_monomial():
            raise InvariantViolation("expected a monomial vector")
        ((e, _),) = p.terms.items()
        if e == 0:
            pivot = i
            break
    if pivot is None:
        raise InvariantViolation("no constant entry: the vector is not unimodular")
    perm = list(range(k))
    perm[0], perm[pivot] = perm[pivot], perm[0]
    permuted = [entries[perm[i]] for i in range(k)]
    c0 = permuted[0].constant_value()
    M = LaurentMatrix.zeros(k, k)
    M.entries[0][perm[0]] = LaurentPoly.constant(1 / c0)
    for i in range(1, k):
        M.entries[i][perm[i]] = LaurentPoly.one()
        # eliminate entry i against the unit pivot
        if not permuted[i].is_zero():
            M.entries[i][perm[0]] = permuted[i].scale(-1 / c0)
    return M


def _completion_bezout(entries: list[LaurentPoly]) -> LaurentMatrix:
    """M with M @ entries = e_1 via the extended-gcd unimodular completion."""
    g, U = poly_ext_gcd(entries)
    if not (g.is_constant() and not g.is_zero()):
        raise InvariantViolation("vector entries have a nonconstant common divisor")
    return LaurentMatrix(U)


def _frame_completion(entries: list[LaurentPoly], monomial_path: bool) -> LaurentMatrix:
    M = _completion_monomial(entries) if monomial_path else _completion_bezout(entries)
    achieved = [LaurentPoly.zero() for _ in entries]
    for i in range(len(entries)):
        for j, p in enumerate(entries):
            achieved[i] = achieved[i] + M.entries[i][j] * p
    want = [LaurentPoly.one()] + [LaurentPoly.zero()] * (len(entries) - 1)
    if achieved != want:
        raise InvariantViolation("frame completion failed to reduce the section to e_1")
    return M


def peel(E: EquivariantBundle) -> PeelStep:
    """Split off the top-degree equivariant line subbundle.

    Twists so the subbundle has degree 0, takes the deterministic
    eigen-section, completes it to chart-local frames via unimodular
    completion, and reads off the block-triangular transition.  The
    nowhere-vanishing check (constant gcd on both charts) is guaranteed by
    theory for valid input; its failure raises InvariantViolation.
    """
    if E.rank == 0:
        raise ValueError("peel of a rank-0 bundle")
    m = E.rank
    torus = E.torus
    n1 = max_twist(E)
    Et = twist(E, -n1, torus.zero_weight)
    sigma = eigen_section(Et)
    chi = sigma.weight

    gcd_f = poly_gcd_list(list(sigma.f))
    gcd_g = poly_gcd_list(list(sigma.g))
    if gcd_f.is_zero() or not gcd_f.is_constant():
        raise InvariantViolation(f"section vanishes on chart 0: gcd {gcd_f!r}")
    if gcd_g.is_zero() or not gcd_g.is_constant():
        raise InvariantViolation(f"section vanishes on chart inf: gcd {gcd_g!r}")

    monomial_path = not torus.base_is_fixed()
    U = _frame_completion(list(sigma.f), monomial_path)
    V = _frame_completion(list(sigma.g), monomial_path)

    nu0 = derive_target_weights(U, E.lambda0, torus, 0)
    nuInf = derive_target_weights(V, E.lambdaInf, torus, "inf")
    bad = chart_map_violations(U, nu0, E.lambda0, torus, 0, "U") + chart_map_violations(
        V, nuInf, E.lambdaInf, torus, "inf", "V"
    )
    if bad:
        raise InvariantViolation("frame completion broke equivariance: " + "; ".join(bad))
    if torus.rank and (
        nu0[0] != chi or nuInf[0] != weight_sub(chi, weight_scale(n1, torus.a))
    ):
        raise InvariantViolation(
            f"peeled frame weight {nu0[0]}/{nuInf[0]} does not match the section weight {chi}"
        )

    A_new = (V.invert_variable() @ E.A) @ _inverse_constant_det(U)
    mono = LaurentPoly.monomial(-n1)
    for i in range(m):
        want = mono if i == 0 else LaurentPoly.zero()
        if A_new.entries[i][0] != want:
            raise InvariantViolation("reframed transition lacks the expected first column")

    quotient = EquivariantBundle(
        A_new.submatrix(range(1, m), range(1, m)), nu0[1:], nuInf[1:], torus
    )
    beta = [A_new.entries[0][j] for j in range(1, m)]
    summand = LineSummand(n1, chi if torus.rank else ())
    if quotient.rank:
        qreport = validate(quotient)
        if not qreport.ok:
            raise InvariantViolation("peel produced an invalid quotient: " + "; ".join(qreport.violations))
        if degree(quotient) != degree(E) - n1:
            raise InvariantViolation("quotient degree mismatch")
    return PeelStep(summand, U, V, beta, quotient)


def triangular_clear(
    R: LaurentMatrix,
    lam0: tuple[Weight, ...],
    lamInf: tuple[Weight, ...],
    torus: TorusAction,
) -> tuple[LaurentMatrix, LaurentMatrix]:
    """Clear the strictly-upper part of an equivariant triangular transition.

    R must be upper triangular with diagonal z^(-n_i), n_1 >= ... >= n_m.
    Each entry beta at (i, j) is split as beta = delta z^(-n_j) - gamma
    z^(-n_i) with gamma in k[z] and delta in k[w]; monomials with exponent
    >= -n_i go to gamma, the rest to delta (the two ranges cover all
    exponents because n_i >= n_j).  Returns unipotent (W0 over k[z], WInf
    over k[w]) with WInf @ R @ W0^-1 diagonal.
    """
    m = R.rows
    degrees = []
    for i in range(m):
        d = R.entries[i][i]
        if not d.is_monomial() or d.leading_coeff() != 1:
            raise ValueError(f"diagonal entry {i} is not a unit monomial: {d!r}")
        degrees.append(-d.deg)
        for j in range(i):
            if not R.entries[i][j].is_zero():
                raise ValueError("matrix is not upper triangular")
    if any(degrees[i] < degrees[i + 1] for i in range(m - 1)):
        raise ValueError(f"diagonal degrees {degrees} are not non-increasing")

    Rc = LaurentMatrix([row[:] for row in R.entries])
    W0 = LaurentMatrix.identity(m)
    WInf = LaurentMatrix.identity(m)
    for s in range(1, m):
        for i in range(0, m - s):
            j = i + s
            beta = Rc.entries[i][j]
            if beta.is_zero():
                continue
            ni, nj = degrees[i], degrees[j]
            gamma = LaurentPoly({d + ni: -c for d, c in beta.terms.items() if d >= -ni})
            delta_w = LaurentPoly({-(d + nj): c for d, c in beta.terms.items() if d < -ni})
            delta_z = delta_w.invert_variable()
            # row i -= delta_z * row j ; col j += gamma * col i
            for t in range(m):
                Rc.entries[i][t] = Rc.entries[i][t] - delta_z * Rc.entries[j][t]
            for t in range(m):
                Rc.entries[t][j] = Rc.entries[t][j] + gamma * Rc.entries[t][i]
            # accumulate the unipotent factors
            for t in range(m):
                WInf.entries[i][t] = WInf.entries[i][t] - delta_w * WInf.entries[j][t]
                W0.entries[i][t] = W0.entries[i][t] - gamma * W0.entries[j][t]

    for i in range(m):
        for j in range(m):
            want = LaurentPoly.monomial(-degrees[i]) if i == j else LaurentPoly.zero()
            if Rc.entries[i][j] != want:
                raise InvariantViolation("triangular clearing did not reach diagonal form")
    bad = chart_map_violations(W0, lam0, lam0, torus, 0, "W0") + chart_map_violations(
        WInf, lamInf, lamInf, torus, "inf", "WInf"
    )
    if bad:
        raise InvariantViolation("clearing factors broke equivariance: " + "; ".join(bad))
    return W0, WInf


@dataclass
class SplittingCertificate:
    """Machine-checkable witness: MInf @ A @ M0 = diag(z^(-n_i)).

    M0 is over k[z], MInf over k[w] (stored as w-polynomials); both have
    constant nonzero determinant and are equivariant from the bundle frame
    weights to the summand weights.
    """

    summands: list[LineSummand]
    M0: LaurentMatrix
    MInf: LaurentMatrix


def equivariant_split(E: EquivariantBundle) -> tuple[list[LineSummand], SplittingCertificate]:
    """Decompose into equivariant line bundles with a verifiable certificate.

    Repeatedly peels the top-degree line subbundle, accumulating the frame
    changes into a global triangularization, then clears the upper part.
    Summands come out sorted by non-increasing degree.  With a rank-0 torus
    this is a constructive splitting-type computation.
    """
    report = validate(E)
    if not report.ok:
        raise ValueError("cannot split an invalid bundle: " + "; ".join(report.violations))
    m = E.rank
    torus = E.torus
    Utot = LaurentMatrix.identity(m)
    Vtot = LaurentMatrix.identity(m)
    summands: list[LineSummand] = []
    current = E
    while current.rank > 0:
        step = peel(current)
        if summands and step.summand.n > summands[-1].n:
            raise InvariantViolation(
                f"peel degrees out of order: {step.summand.n} after {summands[-1].n}"
            )
        summands.append(step.summand)
        t = m - step.U.rows
        Utot = _embed(step.U, m, t) @ Utot
        Vtot = _embed(step.V, m, t) @ Vtot
        current = step.quotient

    R = (Vtot.invert_variable() @ E.A) @ _inverse_constant_det(Utot)
    lam0 = tuple(s.lam for s in summands)
    lamInf = tuple(s.chart_inf_weight(torus) for s in summands)
    W0, WInf = triangular_clear(R, lam0, lamInf, torus)
    M0 = _inverse_constant_det(W0 @ Utot)
    MInf = WInf @ Vtot
    cert = SplittingCertificate(summands, M0, MInf)
    check = verify_certificate(E, cert)
    if not check.ok:
        raise InvariantViolation("produced certificate failed verification: " + check.summary())
    return summands, cert


def _embed(M: LaurentMatrix, m: int, offset: int) -> LaurentMatrix:
    out = LaurentMatrix.identity(m)
    for i in range(M.rows):
        for j in range(M.cols):
            out.entries[offset + i][offset + j] = M.entries[i][j]
    return out


@dataclass
class CertCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CertReport:
    checks: list[CertCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def summary(self) -> str:
        return "; ".join(f"{c.name}: {'ok' if c.ok else 'FAIL ' + c.detail}" for c in self.checks)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "ok": c.ok, **({"detail": c.detail} if c.detail else {})}
                for c in self.checks
            ],
        }


def verify_certificate(E: EquivariantBundle, cert: SplittingCertificate) -> CertReport:
    """Independent certificate checker (exact arithmetic only).

    Checks: (i) MInf A M0 is the claimed diagonal; (ii) both frame
    determinants are nonzero constants; (iii) both frames satisfy the weight
    law; (iv) degrees are sorted non-increasing and sum to degree(E);
    (v) the chart-inf weights implied by MInf match lam_i - n_i a.
    """
    checks: list[CertCheck] = []
    m = E.rank
    n_list = [s.n for s in cert.summands]
    a = E.torus.a
    r = E.torus.rank

    # (i) frame product reaches the diagonal monomial transition
    ok_shape = (
        len(cert.summands) == m
        and cert.M0.rows == cert.M0.cols == m
        and cert.MInf.rows == cert.MInf.cols == m
        and all(len(s.lam) == r for s in cert.summands)
    )
    if not ok_shape:
        checks.append(CertCheck("product_diagonal", False, "certificate shape mismatch"))
        checks.append(CertCheck("frames_invertible", False, "skipped"))
        checks.append(CertCheck("frames_equivariant", False, "skipped"))
        checks.append(CertCheck("degrees_sum", False, "skipped"))
        checks.append(CertCheck("summand_inf_weights", False, "skipped"))
        return CertReport(checks)

    product = (cert.MInf.invert_variable() @ E.A) @ cert.M0
    diag_ok = True
    detail = ""
    for i in range(m):
        for j in range(m):
            want = LaurentPoly.monomial(-n_list[i]) if i == j else LaurentPoly.zero()
            if product.entries[i][j] != want:
                diag_ok = False
                detail = f"entry ({i},{j}) is {product.entries[i][j]!r}, expected {want!r}"
                break
        if not diag_ok:
            break
    checks.append(CertCheck("product_diagonal", diag_ok, detail))

    # (ii) constant nonzero determinants
    det0, detInf = mat_det(cert.M0), mat_det(cert.MInf)
    inv_ok = (
        det0.is_constant()
        and not det0.is_zero()
        and detInf.is_constant()
        and not detInf.is_zero()
    )
    checks.append(
        CertCheck(
            "frames_invertible",
            inv_ok,
            "" if inv_ok else f"det M0 = {det0!r}, det MInf = {detInf!r}",
        )
    )

    # (iii) weight law, written out directly: M0 maps summand coordinates to
    # bundle coordinates on chart 0, MInf maps bundle to summand on chart inf.
    law_bad: list[str] = []
    if r:
        for i in range(m):
            for j in range(m):
                need = weight_sub(E.lambda0[i], cert.summands[j].lam)
                for d, _ in cert.M0.entries[i][j].monomials():
                    if weight_scale(d, a) != need:
                        law_bad.append(f"M0[{i}][{j}] exponent {d}")
        for i in range(m):
            lam_inf_i = weight_sub(cert.summands[i].lam, weight_scale(n_list[i], a))
            for j in range(m):
                need = weight_sub(E.lambdaInf[j], lam_inf_i)
                for e, _ in cert.MInf.entries[i][j].monomials():
                    if weight_scale(e, a) != need:
                        law_bad.append(f"MInf[{i}][{j}] exponent {e}")
    checks.append(CertCheck("frames_equivariant", not law_bad, "; ".join(law_bad[:4])))

    # (iv) degree bookkeeping
    det = mat_det(E.A)
    deg_ok = det.is_monomial() and sum(n_list) == -det.deg
    sorted_ok = all(n_list[i] >= n_list[i + 1] for i in range(len(n_list) - 1))
    checks.append(
        CertCheck(
            "degrees_sum",
            deg_ok and sorted_ok,
            "" if deg_ok and sorted_ok else f"degrees {n_list} vs det {det!r}",
        )
    )

    # (v) chart-inf weights implied by the rows of MInf
    implied_ok = True
    detail = ""
    if r:
        for i in range(m):
            want = weight_sub(cert.summands[i].lam, weight_scale(n_list[i], a))
            got = None
            for j in range(m):
                entry = cert.MInf.entries[i][j]
                if not entry.is_zero():
                    e = min(entry.terms)
                    got = weight_sub(E.lambdaInf[j], weight_scale(e, a))
                    break
            if got != want:
                implied_ok = False
                detail = f"row {i}: implied {got}, claimed {want}"
                break
    checks.append(CertCheck("summand_inf_weights", implied_ok, detail))
    return CertReport(checks)


def _hom_coeff_vector(h: HomElement) -> dict[tuple, Fraction]:
    vec: dict[tuple, Fraction] = {}
    for i in range(h.F0.rows):
        for j in range(h.F0.cols):
            for d, c in h.F0.entries[i][j].monomials():
                vec[(0, i, j, d)] = c
    for i in range(h.FInf.rows):
        for j in range(h.FInf.cols):
            for e, c in h.FInf.entries[i][j].monomials():
                vec[(1, i, j, e)] = c
    return vec


def projection_surjective_on_invariants(step: PeelStep, torus: TorusAction) -> bool:
    """Does composing with the quotient projection stay onto, weight-0 part?

    For a peel step L -> E -> Q this checks, by exact rank computation, that
    every invariant global endomorphism of Q lifts to an invariant global
    bundle map Q -> E.  The projection is the constant matrix that drops the
    peeled coordinate of the reframed bundle.
    """
    Q = step.quotient
    if Q.rank == 0:
        return True
    Eprime = step.reframed(torus)
    zero = torus.zero_weight
    sources = [
        hom_element_from_section(Q, Eprime, list(s.f), list(s.g))
        for s, w in h0_sections(hom_bundle(Q, Eprime))
        if w == zero
    ]
    target_dim = sum(1 for _, w in h0_sections(hom_bundle(Q, Q)) if w == zero)
    composed = []
    for h in sources:
        img = HomElement(
            Q,
            Q,
            LaurentMatrix(h.F0.entries[1:]),
            LaurentMatrix(h.FInf.entries[1:]),
        )
        bad = img.intertwining_violation()
        if bad:
            raise InvariantViolation(f"projected map is not a bundle map: {bad}")
        composed.append(_hom_coeff_vector(img))
    keys = sorted({k for vec in composed for k in vec})
    index = {k: t for t, k in enumerate(keys)}
    rows = [{index[k]: v for k, v in vec.items()} for vec in composed if vec]
    return rank_sparse(rows, len(keys)) == target_dim


def splitting_hom(
    E: EquivariantBundle, cert: SplittingCertificate
) -> tuple[HomElement, HomElement]:
    """Mutually inverse bundle maps between the summand sum and E.

    Returns (s, p) with s from the direct sum into E and p back; p o s is the
    identity exactly on chart-0 matrices, and both maps are weight-invariant.
    """
    report = verify_certificate(E, cert)
    if not report.ok:
        raise ValueError("refusing to build a splitting from an invalid certificate: " + report.summary())
    torus = E.torus
    S: EquivariantBundle | None = None
    for summand in cert.summands:
        L = line_bundle(summand.n, summand.lam, torus)
        S = L if S is None else direct_sum(S, L)
    if S is None:
        S = EquivariantBundle(LaurentMatrix.zeros(0, 0), (), (), torus)
    s = HomElement(S, E, cert.M0, _inverse_constant_det(cert.MInf))
    p = HomElement(E, S, _inverse_constant_det(cert.M0), cert.MInf)
    for h, name in ((s, "section-side"), (p, "projection-side")):
        bad = h.intertwining_violation()
        if bad:
            raise InvariantViolation(f"{name} splitting map is not a bundle map: {bad}")
    if p.F0 @ s.F0 != LaurentMatrix.identity(E.rank):
        raise InvariantViolation("splitting maps are not mutually inverse")
    return s, p
