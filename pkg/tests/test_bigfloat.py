"""BigComplex precision semantics and rational recognition."""

from fractions import Fraction as F

import gmpy2
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mumhodge.bigfloat import (
    BigComplex,
    default_tolerance,
    kappa,
    rational_reconstruct,
    two_pi_i,
    zeta3,
)


class TestBigComplex:
    def test_parts_share_precision(self):
        z = BigComplex.make(F(1, 3), F(2, 7), precision=200)
        assert z.re.precision == 200
        assert z.im.precision == 200
        assert z.precision == 200

    def test_operations_output_min_precision(self):
        a = BigComplex.make(1, 1, precision=256)
        b = BigComplex.make(2, -1, precision=128)
        assert (a + b).precision == 128
        assert (a * b).precision == 128
        assert (a / b).precision == 128

    def test_field_identities(self):
        a = BigComplex.make(F(3, 7), F(-2, 5), precision=160)
        one = BigComplex.make(1, 0, precision=160)
        assert ((a / a) - one).abs() < default_tolerance(160)

    def test_reject_too_small_precision(self):
        with pytest.raises(ValueError):
            BigComplex.make(1, 0, precision=1)


class TestConstants:
    def test_kappa_is_purely_imaginary(self):
        k = kappa(300)
        assert k.re == 0
        assert k.im > 0

    def test_kappa_matches_definition(self):
        # kappa = zeta(3)/(2 pi i)^3 computed through independent pieces.
        prec = 300
        tpi = two_pi_i(prec)
        denom = tpi * tpi * tpi
        direct = BigComplex.make(zeta3(prec), 0, prec) / denom
        assert (direct - kappa(prec)).abs() < default_tolerance(prec)

    def test_cached_per_precision(self):
        assert kappa(128) is kappa(128)
        assert kappa(128) is not kappa(256)


class TestRationalReconstruct:
    def test_simple_fifth(self):
        assert rational_reconstruct(0.2, 10) == F(1, 5)

    def test_third_from_decimal(self):
        assert rational_reconstruct(0.333333333333, 100) == F(1, 3)

    def test_golden_ratio_fails(self):
        x = 0.6180339887
        # Brute-force oracle: no p/q with q <= 100 approximates x within 1e-15.
        for q in range(1, 101):
            p = round(x * q)
            assert abs(x - p / q) > 1e-15
        assert rational_reconstruct(x, 100, tolerance=F(1, 10**15)) is None

    def test_exact_fraction_input(self):
        assert rational_reconstruct(F(22, 7), 10) == F(22, 7)

    def test_bound_respected(self):
        assert rational_reconstruct(F(1, 101), 100, tolerance=F(1, 10**20)) is None

    def test_invalid_bound(self):
        with pytest.raises(ValueError):
            rational_reconstruct(0.5, 0)

    def test_bigcomplex_input_rejected(self):
        with pytest.raises(TypeError):
            rational_reconstruct(BigComplex.make(1, 0), 10)

    @given(
        st.integers(min_value=-10**6, max_value=10**6),
        st.integers(min_value=1, max_value=10**4),
    )
    @settings(max_examples=120)
    def test_recovers_exact_rationals(self, p, q):
        # Evaluate p/q at >= 2*log2(bound) bits and reconstruct with bound >= q.
        bound = max(q, 2)
        prec = 2 * bound.bit_length() + 2 * abs(p).bit_length() + 32
        x = gmpy2.mpfr(gmpy2.mpq(p, q), precision=prec)
        assert rational_reconstruct(x, bound, precision=prec) == F(p, q)
