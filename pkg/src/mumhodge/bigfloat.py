"""Precision-tagged complex floats and rational recognition.

All high-precision numerics in the package go through :class:`BigComplex`,
a thin immutable wrapper around a pair of ``gmpy2.mpfr`` values carrying an
explicit working precision in bits.  Arithmetic between two values is
performed at the minimum of the two precisions, so precision never silently
inflates.

The module also owns the cached transcendental constants (zeta(3), 2*pi*i
and the purely imaginary combination kappa = zeta(3)/(2*pi*i)^3) and the
continued-fraction rational recognizer used throughout the recognition
pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import gmpy2

RealLike = Union[int, float, Fraction, "gmpy2.mpfr"]

DEFAULT_PRECISION = 128


def _ctx(precision: int):
    if precision < 2:
        raise ValueError("precision must be at least 2 bits")
    return gmpy2.context(precision=precision)


def _to_mpfr(x, precision: int):
    with _ctx(precision):
        if isinstance(x, Fraction):
            return gmpy2.mpfr(gmpy2.mpq(x.numerator, x.denominator))
        return gmpy2.mpfr(x)


@dataclass(frozen=True)
class BigComplex:
    """Complex number with both parts at the same explicit bit precision."""

    re: "gmpy2.mpfr"
    im: "gmpy2.mpfr"
    precision: int

    @staticmethod
    def make(re: RealLike = 0, im: RealLike = 0, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        return BigComplex(_to_mpfr(re, precision), _to_mpfr(im, precision), precision)

    @staticmethod
    def from_rational(x: Fraction, precision: int = DEFAULT_PRECISION) -> "BigComplex":
        return BigComplex.make(x, 0, precision)

    @staticmethod
    def from_mpc(z: "gmpy2.mpc", precision: int) -> "BigComplex":
        return BigComplex.make(z.real, z.imag, precision)

    def to_mpc(self) -> "gmpy2.mpc":
        with _ctx(self.precision):
            return gmpy2.mpc(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def _coerce(self, other) -> "BigComplex":
        if isinstance(other, BigComplex):
            return other
        if isinstance(other, complex):
            return BigComplex.make(other.real, other.imag, self.precision)
        return BigComplex.make(other, 0, self.precision)

    def __add__(self, other) -> "BigComplex":
        o = self._coerce(other)
        p = min(self.precision, o.precision)
        with _ctx(p):
            return BigComplex(self.re + o.re, self.im + o.im, p)

    __radd__ = __add__

    def __neg__(self) -> "BigComplex":
        with _ctx(self.precision):
            return BigComplex(-self.re, -self.im, self.precision)

    def __sub__(self, other) -> "BigComplex":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BigComplex":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BigComplex":
        o = self._coerce(other)
        p = min(self.precision, o.precision)
        with _ctx(p):
            return BigComplex(
                self.re * o.re - self.im * o.im,
                self.re * o.im + self.im * o.re,
                p,
            )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "BigComplex":
        o = self._coerce(other)
        p = min(self.precision, o.precision)
        with _ctx(p):
            d = o.re * o.re + o.im * o.im
            return BigComplex(
                (self.re * o.re + self.im * o.im) / d,
                (self.im * o.re - self.re * o.im) / d,
                p,
            )

    def __rtruediv__(self, other) -> "BigComplex":
        return self._coerce(other) / self

    def conjugate(self) -> "BigComplex":
        return BigComplex(self.re, -self.im, self.precision)

    def abs(self) -> "gmpy2.mpfr":
        with _ctx(self.precision):
            return gmpy2.sqrt(self.re * self.re + self.im * self.im)

    def is_close_to(self, other, tol) -> bool:
        return (self - self._coerce(other)).abs() <= tol

    def __str__(self) -> str:
        return f"({self.re} + {self.im}j)@{self.precision}b"


@lru_cache(maxsize=None)
def zeta3(precision: int) -> "gmpy2.mpfr":
    """zeta(3) at the given bit precision (cached per precision level)."""
    with _ctx(precision):
        return gmpy2.zeta(3)


@lru_cache(maxsize=None)
def two_pi_i(precision: int) -> BigComplex:
    with _ctx(precision):
        return BigComplex(gmpy2.mpfr(0), 2 * gmpy2.const_pi(), precision)


@lru_cache(maxsize=None)
def kappa(precision: int) -> BigComplex:
    """kappa = zeta(3)/(2*pi*i)^3 = i*zeta(3)/(8*pi^3); purely imaginary."""
    with _ctx(precision):
        pi = gmpy2.const_pi()
        return BigComplex(gmpy2.mpfr(0), gmpy2.zeta(3) / (8 * pi**3), precision)


def default_tolerance(precision: int) -> "gmpy2.mpfr":
    """Recognition tolerance: half the working bits, 2^(-precision/2)."""
    with _ctx(max(precision, 8)):
        return gmpy2.exp2(-gmpy2.mpfr(precision) / 2)


def rational_reconstruct(
    x: RealLike,
    denominator_bound: int,
    precision: int | None = None,
    tolerance=None,
) -> Fraction | None:
    """Recognize a real value as a fraction p/q with q <= denominator_bound.

    Runs the continued-fraction convergents of ``x`` and returns the last
    convergent whose denominator stays within the bound, provided it
    approximates ``x`` within the tolerance (default ``2^(-precision/2)``).
    Returns ``None`` on failure; never raises for unrecognizable input.
    """
    if denominator_bound < 1:
        raise ValueError("denominator bound must be >= 1")
    if isinstance(x, BigComplex):
        raise TypeError("pass the real part of a BigComplex, not the value itself")
    if precision is None:
        precision = x.precision if isinstance(x, type(gmpy2.mpfr(0))) else 53
    if isinstance(x, Fraction):
        xq = x
    else:
        m = gmpy2.mpq(_to_mpfr(x, precision))
        xq = Fraction(int(m.numerator), int(m.denominator))
    if tolerance is None:
        tolerance = default_tolerance(precision)
    if isinstance(tolerance, Fraction):
        tol = tolerance
    else:
        tq = gmpy2.mpq(gmpy2.mpfr(tolerance))
        tol = Fraction(int(tq.numerator), int(tq.denominator))

    # Convergents p_k/q_k of the continued fraction of xq.
    a0 = xq.numerator // xq.denominator
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a0, 1
    best = Fraction(p_cur, q_cur)
    rem = xq - a0
    while rem != 0:
        rem = 1 / rem
        a = rem.numerator // rem.denominator
        p_nxt = a * p_cur + p_prev
        q_nxt = a * q_cur + q_prev
        if q_nxt > denominator_bound:
            break
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
        best = Fraction(p_cur, q_cur)
        rem = rem - a
    if abs(xq - best) <= tol:
        return best
    return None
