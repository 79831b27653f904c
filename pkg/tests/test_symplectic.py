"""Symplectic lattice algebra: normal forms, stabilizer action, invariants."""

import random
from fractions import Fraction as F

import pytest

from mumhodge.linalg import (
    identity,
    mat_eq,
    mat_inv,
    mat_mul,
    mat_vec,
    rational_matrix,
    transpose,
)
from mumhodge.symplectic import (
    GRAM,
    Invariants,
    NilpotentMatrix,
    NormalForm,
    ResidueClass,
    WeightStabilizerElement,
    act_weight_stabilizer,
    check_integrality_polarization,
    classify_nilpotent,
    invariants,
    log_unipotent,
    normal_form,
    pairing,
    weight_filtration,
)

QUINTIC = NormalForm(1, 5, F(-1, 2), F(-25, 6))
QUINTIC_PAPER = NormalForm(-1, 5, F(11, 2), F(-25, 6))


def random_normal_form(rng) -> NormalForm:
    """Random quadruple satisfying integrality and polarization."""
    a = rng.choice([x for x in range(-5, 6) if x != 0])
    b = rng.randint(1, 12)
    e = rng.randint(-10, 10) + F(a * b, 2)
    f = rng.randint(-10, 10) + F(a * a * b, 6)
    return NormalForm(a, b, e, f)


def random_stabilizer(rng) -> WeightStabilizerElement:
    p = rng.randint(-4, 4)
    q = rng.randint(-4, 4)
    r = rng.randint(-6, 6) + F(p * q, 2)
    s = rng.randint(-6, 6) + F(p * p * q, 6)
    return WeightStabilizerElement(p, q, r, s)


def random_sp4z(rng):
    """Random element of Sp(4, Z) as a product of symplectic transvections.

    x -> x + <x, v> v is integral symplectic for any integral v.
    """
    m = identity(4)
    for _ in range(rng.randint(3, 8)):
        v = tuple(F(rng.randint(-2, 2)) for _ in range(4))
        if all(x == 0 for x in v):
            continue
        t = tuple(
            tuple(
                (F(1) if i == j else F(0)) + pairing(_unit(j), v) * v[i]
                for j in range(4)
            )
            for i in range(4)
        )
        m = mat_mul(t, m)
    return m


def _unit(i):
    return tuple(F(1) if j == i else F(0) for j in range(4))


def span_equal(vectors_a, vectors_b) -> bool:
    from mumhodge.symplectic import _rank

    a = [list(v) for v in vectors_a]
    b = [list(v) for v in vectors_b]
    return _rank(a) == _rank(b) == _rank(a + b)


class TestGram:
    def test_gram_pairings(self):
        e3, e2, e1, e0 = (_unit(i) for i in range(4))
        assert pairing(e3, e0) == 1
        assert pairing(e2, e1) == 1
        assert pairing(e0, e3) == -1
        assert pairing(e3, e1) == 0

    def test_transvections_are_symplectic(self):
        rng = random.Random(7)
        for _ in range(10):
            m = random_sp4z(rng)
            assert mat_eq(mat_mul(transpose(m), mat_mul(GRAM, m)), GRAM)
            assert all(x.denominator == 1 for row in m for x in row)


class TestWeightFiltration:
    def test_quintic_spans(self):
        n = QUINTIC.matrix()
        w0, w2, w4 = weight_filtration(n)
        assert span_equal(w0, [_unit(3)])
        assert span_equal(w2, [_unit(3), _unit(2)])
        assert span_equal(w4, [_unit(3), _unit(2), _unit(1)])

    def test_random_normal_forms_have_standard_spans(self):
        # Oracle: direct matrix image computation for 20 random quadruples.
        rng = random.Random(11)
        for _ in range(20):
            nf = random_normal_form(rng)
            w0, w2, w4 = weight_filtration(nf.matrix())
            assert span_equal(w0, [_unit(3)])
            assert span_equal(w2, [_unit(3), _unit(2)])
            assert span_equal(w4, [_unit(3), _unit(2), _unit(1)])

    def test_equivariance_under_stabilizer(self):
        rng = random.Random(13)
        for _ in range(10):
            nf = random_normal_form(rng)
            g = random_stabilizer(rng)
            a = g.matrix()
            n = nf.matrix().entries
            n_conj = NilpotentMatrix(mat_mul(a, mat_mul(n, mat_inv(a))))
            w0, w2, w4 = weight_filtration(nf.matrix())
            w0c, w2c, w4c = weight_filtration(n_conj)
            assert span_equal(w0c, [mat_vec(a, v) for v in w0])
            assert span_equal(w2c, [mat_vec(a, v) for v in w2])
            assert span_equal(w4c, [mat_vec(a, v) for v in w4])

    def test_non_mum_rejected(self):
        n = NilpotentMatrix(rational_matrix([[0] * 4, [0] * 4, [0] * 4, [1, 0, 0, 0]]))
        with pytest.raises(ValueError, match="MUM"):
            weight_filtration(n)


class TestClassify:
    def test_zero_rejected(self):
        n = NilpotentMatrix(rational_matrix([[0] * 4] * 4))
        with pytest.raises(ValueError, match="zero nilpotent generates no boundary type"):
            classify_nilpotent(n)

    def test_quintic_is_mum(self):
        assert classify_nilpotent(QUINTIC.matrix()) == "MUM"

    def test_rank_one_square_zero_is_type_one(self):
        # Single off-diagonal entry compatible with the form: x -> f <x,e3> e0.
        n = NilpotentMatrix(rational_matrix([[0] * 4, [0] * 4, [0] * 4, [2, 0, 0, 0]]))
        assert classify_nilpotent(n) == "type-I"

    def test_rank_two_square_zero_is_type_two(self):
        n = NilpotentMatrix(
            rational_matrix([[0] * 4, [1, 0, 0, 0], [0] * 4, [0, 0, -1, 0]])
        )
        assert (NilpotentMatrix.from_rows(n.entries).rank()) == 2
        assert classify_nilpotent(n) == "type-II"

    def test_non_symplectic_rejected(self):
        n = NilpotentMatrix(rational_matrix([[0] * 4, [1, 0, 0, 0], [0] * 4, [0] * 4]))
        with pytest.raises(ValueError, match="infinitesimally symplectic"):
            classify_nilpotent(n)


class TestLogUnipotent:
    def test_identity(self):
        n = log_unipotent(identity(4))
        assert all(x == 0 for row in n.entries for x in row)

    def test_quintic_round_trip(self):
        t = QUINTIC.monodromy()
        n = log_unipotent(t)
        assert mat_eq(n.entries, QUINTIC.matrix().entries)

    def test_displayed_unipotent_form(self):
        # T = exp(N) must match the closed form with entries e +- ab/2 and
        # f - a^2 b/6 for arbitrary rational (a, b, e, f).
        for a, b, e, f in [(1, 5, F(-1, 2), F(-25, 6)), (2, 3, 3, F(1, 3)), (-1, 7, F(7, 2), 4)]:
            nf = NormalForm(a, b, e, f)
            t = nf.monodromy()
            expected = rational_matrix(
                [
                    [1, 0, 0, 0],
                    [a, 1, 0, 0],
                    [F(e) + F(a) * b / 2, b, 1, 0],
                    [F(f) - F(a) ** 2 * b / 6, F(e) - F(a) * b / 2, -a, 1],
                ]
            )
            assert mat_eq(t, expected)

    def test_non_unipotent_rejected(self):
        m = rational_matrix([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
        with pytest.raises(ValueError, match="unipotent"):
            log_unipotent(m)


class TestNormalForm:
    def test_fixed_point(self):
        t = QUINTIC.monodromy()
        nf, frame = normal_form(t)
        assert nf == QUINTIC
        assert mat_eq(frame.change_of_basis, identity(4))

    def test_random_conjugates_have_same_invariants(self):
        rng = random.Random(17)
        base = invariants(QUINTIC)
        t = QUINTIC.monodromy()
        for _ in range(50):
            s = random_sp4z(rng)
            t_conj = mat_mul(s, mat_mul(t, mat_inv(s)))
            nf, frame = normal_form(t_conj)
            assert invariants(nf) == base
            # The returned frame really is adapted: conjugating back gives (3.2).
            a = frame.change_of_basis
            n_adapted = mat_mul(mat_inv(a), mat_mul(log_unipotent(t_conj).entries, a))
            assert n_adapted[0] == (0, 0, 0, 0)

    def test_two_quintic_presentations_agree(self):
        # The paper's presentation (-1, 5, 11/2, -25/6) and the normalized
        # (1, 5, -1/2, -25/6) have equal invariants.
        assert invariants(QUINTIC_PAPER) == invariants(QUINTIC)

    def test_non_integral_rejected(self):
        t = [[1, 0, 0, 0], [F(1, 2), 1, 0, 0], [0, 1, 1, 0], [0, 0, F(-1, 2), 1]]
        with pytest.raises(ValueError, match="integral"):
            normal_form(t)

    def test_non_symplectic_rejected(self):
        t = [[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        with pytest.raises(ValueError, match="symplectic"):
            normal_form(t)

    def test_type_one_rejected(self):
        t = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [2, 0, 0, 1]]
        with pytest.raises(ValueError, match="MUM"):
            normal_form(t)


class TestStabilizerAction:
    def test_identity_action(self):
        g = WeightStabilizerElement(0, 0, 0, 0)
        assert act_weight_stabilizer(g, QUINTIC) == QUINTIC

    def test_quintic_normalization_step(self):
        # Sign flip followed by (p, q, r) = (0, 5, 0) realizes the paper's
        # change from (-1, 5, 11/2, -25/6) to (1, 5, -1/2, -25/6).
        flipped = QUINTIC_PAPER.sign_flip()
        assert flipped == NormalForm(1, 5, F(-11, 2), F(-25, 6))
        g = WeightStabilizerElement(0, 5, 0, 0)
        assert act_weight_stabilizer(g, flipped) == QUINTIC

    def test_action_matches_matrix_conjugation(self):
        # Oracle: Ad(exp(M)) computed by exact matrix multiplication.
        rng = random.Random(23)
        for _ in range(50):
            nf = random_normal_form(rng)
            g = random_stabilizer(rng)
            got = act_weight_stabilizer(g, nf)
            a = g.matrix()
            n_conj = mat_mul(a, mat_mul(nf.matrix().entries, mat_inv(a)))
            from mumhodge.symplectic import _read_normal_form

            assert _read_normal_form(n_conj) == got

    def test_composite_action(self):
        # Acting by g1 then g2 equals acting by g2*g1, on 100 random inputs.
        rng = random.Random(29)
        for _ in range(100):
            nf = random_normal_form(rng)
            g1 = random_stabilizer(rng)
            g2 = random_stabilizer(rng)
            lhs = act_weight_stabilizer(g2, act_weight_stabilizer(g1, nf))
            rhs = act_weight_stabilizer(g2.compose(g1), nf)
            assert lhs == rhs

    def test_a_and_b_fixed(self):
        rng = random.Random(31)
        for _ in range(50):
            nf = random_normal_form(rng)
            g = random_stabilizer(rng)
            out = act_weight_stabilizer(g, nf)
            assert out.a == nf.a and out.b == nf.b

    def test_non_integral_stabilizer_rejected(self):
        g = WeightStabilizerElement(1, 1, 0, 0)  # r - pq/2 = -1/2 not integral
        with pytest.raises(ValueError, match="integrality"):
            act_weight_stabilizer(g, QUINTIC)


class TestInvariants:
    def test_quintic(self):
        inv = invariants(QUINTIC)
        assert inv == Invariants(b=F(5), abs_a=F(1), e_class=ResidueClass(1, 2))

    def test_even_ab_trivial_modulus(self):
        inv = invariants(NormalForm(1, 2, 3, F(1, 3)))
        assert inv.e_class == ResidueClass(0, 1)

    def test_invariance_under_stabilizer(self):
        rng = random.Random(37)
        for _ in range(500):
            nf = random_normal_form(rng)
            g = random_stabilizer(rng)
            assert invariants(act_weight_stabilizer(g, nf)) == invariants(nf)

    def test_sign_flip_preserves_invariants(self):
        rng = random.Random(41)
        for _ in range(50):
            nf = random_normal_form(rng)
            assert invariants(nf.sign_flip()) == invariants(nf)


class TestIntegralityPolarization:
    def test_quintic_passes(self):
        report = check_integrality_polarization(QUINTIC)
        assert report.passed
        # e +- 5/2 lands on {2, -3} and f - 5/6 = -5.
        assert QUINTIC.e + F(5, 2) == 2
        assert QUINTIC.e - F(5, 2) == -3
        assert QUINTIC.f - F(5, 6) == -5

    def test_half_integer_violation_named(self):
        report = check_integrality_polarization(NormalForm(1, 5, 0, 0))
        assert not report.passed
        assert "e + ab/2 is an integer" in report.violations
        assert "e - ab/2 is an integer" in report.violations

    def test_negative_b_fails_polarization(self):
        report = check_integrality_polarization(NormalForm(1, -5, F(-5, 2), F(-5, 6)))
        assert not report.passed
        assert "b > 0" in report.violations
        assert "a^2 b > 0" in report.violations

    def test_exp_of_passing_form_is_integral(self):
        rng = random.Random(43)
        for _ in range(30):
            nf = random_normal_form(rng)
            assert check_integrality_polarization(nf).passed
            t = nf.monodromy()
            assert all(x.denominator == 1 for row in t for x in row)
