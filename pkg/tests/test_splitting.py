import random

import pytest

from equisplit.bundle import (
    EquivariantBundle,
    LineSummand,
    TorusAction,
    degree,
    line_bundle,
    random_instance,
    random_reframe,
    validate,
)
from equisplit.cohomology import h0_character, h0_dim, h1_character
from equisplit.equivariant import Character, weight_project_hom
from equisplit.laurent import LaurentPoly
from equisplit.linalg import LaurentMatrix, mat_det
from equisplit.splitting import (
    InvariantViolation,
    SplittingCertificate,
    eigen_section,
    equivariant_split,
    max_twist,
    peel,
    projection_surjective_on_invariants,
    splitting_hom,
    triangular_clear,
    verify_certificate,
)

P = LaurentPoly
T1 = TorusAction(1, (1,))


def lm(rows):
    return LaurentMatrix([[P(dict(cell)) for cell in row] for row in rows])


def jump_bundle():
    return EquivariantBundle(lm([[{1: 1}, {0: 1}], [{}, {-1: 1}]]), ((), ()), ((), ()))


def e3_bundle():
    return EquivariantBundle(
        lm([[{-1: 1}, {0: 1}], [{}, {-1: 1}]]), ((0,), (-1,)), ((-1,), (-2,)), T1
    )


def sample(seed, max_rank=4, ops=8, r=None):
    rng = random.Random(seed)
    if r is None:
        r = rng.randint(0, 2)
    torus = TorusAction(r, tuple(rng.randint(-2, 2) for _ in range(r)))
    summands = [
        LineSummand(rng.randint(-3, 3), tuple(rng.randint(-2, 2) for _ in range(r)))
        for _ in range(rng.randint(1, max_rank))
    ]
    E, hidden = random_instance(seed, summands, rng.randint(0, ops), torus)
    return E, hidden, torus


def canon(summands):
    return sorted(summands, key=LineSummand.sort_key)


class TestMaxTwist:
    def test_line_bundle(self):
        assert max_twist(line_bundle(3)) == 3

    def test_jump(self):
        # h^0(E(-1)) = 0 while det forces n1 + n2 = 0, so n1 = 0
        assert max_twist(jump_bundle()) == 0

    def test_split_diagonal(self):
        # diag(z^-2, z^3) = O(2) + O(-3), so the top twist is 2
        E = EquivariantBundle(lm([[{-2: 1}, {}], [{}, {3: 1}]]), ((), ()), ((), ()))
        assert max_twist(E) == 2

    def test_post_conditions(self):
        for seed in range(20):
            E, _, torus = sample(seed)
            n1 = max_twist(E)
            zero = torus.zero_weight
            assert h0_dim(twist_by(E, -n1)) > 0
            assert h0_dim(twist_by(E, -n1 - 1)) == 0
            assert n1 * E.rank >= degree(E)


def twist_by(E, k):
    from equisplit.bundle import twist

    return twist(E, k, E.torus.zero_weight)


class TestEigenSection:
    def test_trivial_rank_two(self):
        E = EquivariantBundle(lm([[{0: 1}, {}], [{}, {0: 1}]]), ((0,), (0,)), ((0,), (0,)), T1)
        s = eigen_section(E)
        assert s.weight == (0,)
        assert s.f[0].is_constant() and s.f[1].is_zero()

    def test_worked_example_picks_e1(self):
        Et = twist_by(e3_bundle(), -1)
        s = eigen_section(Et)
        assert s.weight == (0,)
        assert s.f == (P.one(), P.zero())
        assert s.g == (P.one(), P.zero())

    def test_equal_degrees_distinct_weights(self):
        E = EquivariantBundle(lm([[{-1: 1}, {}], [{}, {-1: 1}]]), ((5,), (7,)), ((4,), (6,)), T1)
        s = eigen_section(twist_by(E, -1))
        assert s.weight == (5,)

    def test_no_sections_raises(self):
        with pytest.raises(ValueError):
            eigen_section(line_bundle(-1))

    def test_no_torus_any_vector(self):
        s = eigen_section(jump_bundle())
        assert s.weight == ()
        assert s.compatibility_violation(jump_bundle()) is None


class TestPeel:
    def test_rank_one(self):
        step = peel(line_bundle(2, (3,), T1))
        assert step.summand == LineSummand(2, (3,))
        assert step.quotient.rank == 0
        assert step.beta == []

    def test_worked_example(self):
        E = e3_bundle()
        step = peel(E)
        assert step.summand == LineSummand(1, (0,))
        assert step.U == LaurentMatrix.identity(2)
        assert step.V == LaurentMatrix.identity(2)
        assert step.beta == [P.one()]
        assert step.quotient.A == lm([[{-1: 1}]])
        assert step.quotient.lambda0 == ((-1,),)

    def test_determinism_rule_on_equal_degrees(self):
        E = EquivariantBundle(lm([[{-1: 1}, {}], [{}, {-1: 1}]]), ((5,), (7,)), ((4,), (6,)), T1)
        step = peel(E)
        assert step.summand == LineSummand(1, (5,))

    def test_block_identity(self):
        for seed in range(25):
            E, _, torus = sample(seed)
            step = peel(E)
            m = E.rank
            left = step.V.invert_variable() @ E.A
            from equisplit.splitting import _inverse_constant_det

            got = left @ _inverse_constant_det(step.U)
            expected = step.reframed(torus).A
            assert got == expected
            assert validate(step.reframed(torus)).ok
            if step.quotient.rank:
                assert validate(step.quotient).ok
                assert degree(step.quotient) == degree(E) - step.summand.n

    def test_frames_have_constant_det(self):
        for seed in range(10):
            E, _, _ = sample(seed)
            step = peel(E)
            for M in (step.U, step.V):
                d = mat_det(M)
                assert d.is_constant() and not d.is_zero()


class TestTriangularClear:
    def test_worked_example(self):
        R = lm([[{-1: 1}, {0: 1}], [{}, {-1: 1}]])
        W0, WInf = triangular_clear(R, ((0,), (-1,)), ((-1,), (-2,)), T1)
        assert WInf == LaurentMatrix.identity(2)
        # gamma = -z moves into W0; W0^-1 = [[1, -z], [0, 1]]
        assert W0 == lm([[{0: 1}, {1: 1}], [{}, {0: 1}]])
        diag = (WInf.invert_variable() @ R) @ lm([[{0: 1}, {1: -1}], [{}, {0: 1}]])
        assert diag == lm([[{-1: 1}, {}], [{}, {-1: 1}]])

    def test_already_diagonal(self):
        R = lm([[{-2: 1}, {}], [{}, {1: 1}]])
        W0, WInf = triangular_clear(R, ((), ()), ((), ()), TorusAction(0, ()))
        assert W0 == LaurentMatrix.identity(2)
        assert WInf == LaurentMatrix.identity(2)

    def test_low_monomial_goes_to_chart_inf(self):
        # entry z^-3 with degrees (0, -2): exponent -3 < -n_1 = 0, so the
        # whole entry is cleared from the chart-inf side
        R = lm([[{0: 1}, {-3: 1}], [{}, {2: 1}]])
        W0, WInf = triangular_clear(R, ((), ()), ((), ()), TorusAction(0, ()))
        assert W0 == LaurentMatrix.identity(2)
        assert WInf == lm([[{0: 1}, {5: -1}], [{}, {0: 1}]])

    def test_unsorted_degrees_rejected(self):
        R = lm([[{1: 1}, {0: 1}], [{}, {-1: 1}]])
        with pytest.raises(ValueError):
            triangular_clear(R, ((), ()), ((), ()), TorusAction(0, ()))

    def test_non_triangular_rejected(self):
        R = lm([[{0: 1}, {}], [{0: 1}, {0: 1}]])
        with pytest.raises(ValueError):
            triangular_clear(R, ((), ()), ((), ()), TorusAction(0, ()))


class TestEquivariantSplit:
    def test_already_split_diagonal(self):
        # diag(z^-2, z^3) is the (2, -3) splitting type
        E = EquivariantBundle(lm([[{-2: 1}, {}], [{}, {3: 1}]]), ((0,), (0,)), ((-2,), (3,)), T1)
        summands, cert = equivariant_split(E)
        assert canon(summands) == canon([LineSummand(2, (0,)), LineSummand(-3, (0,))])
        assert verify_certificate(E, cert).ok

    def test_worked_example(self):
        E = e3_bundle()
        summands, cert = equivariant_split(E)
        assert canon(summands) == canon([LineSummand(1, (0,)), LineSummand(1, (-1,))])
        assert cert.M0 == lm([[{0: 1}, {1: -1}], [{}, {0: 1}]])
        assert cert.MInf == LaurentMatrix.identity(2)

    def test_jump_type(self):
        summands, cert = equivariant_split(jump_bundle())
        assert [s.n for s in summands] == [0, 0]
        assert verify_certificate(jump_bundle(), cert).ok

    def test_invalid_input_rejected(self):
        E = EquivariantBundle(lm([[{0: 1, 1: 1}]]), ((),), ((),))
        with pytest.raises(ValueError):
            equivariant_split(E)

    def test_round_trip_and_certificates(self):
        for seed in range(60):
            E, hidden, _ = sample(seed)
            summands, cert = equivariant_split(E)
            assert canon(summands) == hidden, seed
            assert [s.n for s in summands] == sorted((s.n for s in summands), reverse=True)
            report = verify_certificate(E, cert)
            assert report.ok, (seed, report.summary())

    def test_uniqueness_under_reframing(self):
        for seed in range(15):
            E, hidden, _ = sample(seed, r=0)
            R = random_reframe(E, seed + 999, 5)
            assert canon(equivariant_split(R)[0]) == hidden

    def test_character_consistency(self):
        for seed in range(10):
            E, _, torus = sample(seed)
            summands, _ = equivariant_split(E)
            h0 = []
            h1 = []
            for s in summands:
                h0 += [tuple(l - d * ak for l, ak in zip(s.lam, torus.a)) for d in range(0, s.n + 1)]
                h1 += [tuple(l - d * ak for l, ak in zip(s.lam, torus.a)) for d in range(s.n + 1, 0)]
            assert h0_character(E) == Character.from_weights(h0)
            assert h1_character(E) == Character.from_weights(h1)


class TestVerifyCertificate:
    def test_identity_certificate_on_diagonal(self):
        E = EquivariantBundle(lm([[{-2: 1}, {}], [{}, {1: 1}]]), ((1,), (0,)), ((-1,), (1,)), T1)
        cert = SplittingCertificate(
            [LineSummand(2, (1,)), LineSummand(-1, (0,))],
            LaurentMatrix.identity(2),
            LaurentMatrix.identity(2),
        )
        assert verify_certificate(E, cert).ok

    def test_tampered_product_detected(self):
        E = e3_bundle()
        _, cert = equivariant_split(E)
        bad = SplittingCertificate(
            cert.summands,
            LaurentMatrix([[cert.M0.entries[0][0], cert.M0.entries[0][1] + P.one()],
                           [cert.M0.entries[1][0], cert.M0.entries[1][1]]]),
            cert.MInf,
        )
        report = verify_certificate(E, bad)
        assert not report.ok
        assert not report.checks[0].ok  # product_diagonal

    def test_tampered_weight_detected(self):
        E = e3_bundle()
        _, cert = equivariant_split(E)
        bad = SplittingCertificate(
            [LineSummand(cert.summands[0].n, (1,)), cert.summands[1]],
            cert.M0,
            cert.MInf,
        )
        report = verify_certificate(E, bad)
        assert not report.ok
        names = {c.name for c in report.checks if not c.ok}
        assert names & {"frames_equivariant", "summand_inf_weights"}

    def test_wrong_degree_list_detected(self):
        E = e3_bundle()
        _, cert = equivariant_split(E)
        bad = SplittingCertificate(
            [LineSummand(2, (0,)), LineSummand(0, (-1,))], cert.M0, cert.MInf
        )
        report = verify_certificate(E, bad)
        assert not report.ok

    def test_shape_mismatch(self):
        E = e3_bundle()
        cert = SplittingCertificate([LineSummand(1, (0,))], LaurentMatrix.identity(1), LaurentMatrix.identity(1))
        assert not verify_certificate(E, cert).ok


class TestSplittingHom:
    def test_already_split_gives_identities(self):
        E = EquivariantBundle(lm([[{-1: 1}, {}], [{}, {-1: 1}]]), ((5,), (7,)), ((4,), (6,)), T1)
        summands, cert = equivariant_split(E)
        s, p = splitting_hom(E, cert)
        assert s.F0 == LaurentMatrix.identity(2)
        assert p.F0 == LaurentMatrix.identity(2)

    def test_worked_example(self):
        E = e3_bundle()
        _, cert = equivariant_split(E)
        s, p = splitting_hom(E, cert)
        assert p.F0 @ s.F0 == LaurentMatrix.identity(2)
        assert s.intertwining_violation() is None
        assert p.intertwining_violation() is None

    def test_invariance_and_inverse_on_random(self):
        for seed in range(20):
            E, _, torus = sample(seed)
            _, cert = equivariant_split(E)
            s, p = splitting_hom(E, cert)
            assert p.F0 @ s.F0 == LaurentMatrix.identity(E.rank)
            zero = torus.zero_weight
            proj = weight_project_hom(s, zero)
            assert proj.F0 == s.F0 and proj.FInf == s.FInf

    def test_invalid_certificate_rejected(self):
        E = e3_bundle()
        _, cert = equivariant_split(E)
        bad = SplittingCertificate(
            [LineSummand(0, (0,)), LineSummand(2, (-1,))], cert.M0, cert.MInf
        )
        with pytest.raises(ValueError):
            splitting_hom(E, bad)


class TestProjectionSurjectivity:
    def test_holds_on_peel_steps(self):
        done = 0
        seed = 0
        while done < 15:
            seed += 1
            E, _, torus = sample(seed)
            if E.rank < 2:
                continue
            step = peel(E)
            assert projection_surjective_on_invariants(step, torus), seed
            done += 1

    def test_rank_one_trivial(self):
        step = peel(line_bundle(1, (0,), T1))
        assert projection_surjective_on_invariants(step, T1)
