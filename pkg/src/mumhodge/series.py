"""Truncated univariate power series with explicit order.

A :class:`TruncatedSeries` stores coefficients 0..order inclusive; binary
operations truncate to the smaller order instead of erroring, which is what
the Frobenius recursions naturally produce.  Coefficients are exact
``fractions.Fraction`` values in all the symbolic paths; any field with
Python arithmetic (e.g. :class:`~mumhodge.bigfloat.BigComplex`) works too.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class TruncatedSeries:
    coefficients: tuple
    order: int

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be non-negative")
        if len(self.coefficients) != self.order + 1:
            raise ValueError("coefficient list must have length order+1")

    @staticmethod
    def from_coefficients(coeffs: Sequence, order: int | None = None) -> "TruncatedSeries":
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if len(coeffs) < order + 1:
            coeffs = coeffs + [Fraction(0)] * (order + 1 - len(coeffs))
        return TruncatedSeries(tuple(coeffs[: order + 1]), order)

    @staticmethod
    def zero(order: int) -> "TruncatedSeries":
        return TruncatedSeries((Fraction(0),) * (order + 1), order)

    @staticmethod
    def one(order: int) -> "TruncatedSeries":
        return TruncatedSeries.from_coefficients([Fraction(1)], order)

    @staticmethod
    def identity(order: int) -> "TruncatedSeries":
        """The series z."""
        return TruncatedSeries.from_coefficients([Fraction(0), Fraction(1)], order)

    def __getitem__(self, n: int):
        return self.coefficients[n]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.coefficients[: order + 1], order)

    def _common_order(self, other: "TruncatedSeries") -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = list(self.coefficients)
            c[0] = c[0] + other
            return TruncatedSeries(tuple(c), self.order)
        n = self._common_order(other)
        return TruncatedSeries(
            tuple(self.coefficients[i] + other.coefficients[i] for i in range(n + 1)), n
        )

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries(tuple(c * other for c in self.coefficients), self.order)
        n = self._common_order(other)
        out = [None] * (n + 1)
        a, b = self.coefficients, other.coefficients
        for k in range(n + 1):
            s = a[0] * b[k]
            for i in range(1, k + 1):
                s += a[i] * b[k - i]
            out[k] = s
        return TruncatedSeries(tuple(out), n)

    __rmul__ = __mul__

    def scale(self, c):
        return TruncatedSeries(tuple(c * x for x in self.coefficients), self.order)

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; requires a nonzero constant term."""
        a = self.coefficients
        if a[0] == 0:
            raise ZeroDivisionError("series has zero constant term")
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, self.order + 1):
            s = sum((a[i] * out[k - i] for i in range(1, k + 1)), start=a[0] * 0)
            out.append(-inv0 * s)
        return TruncatedSeries(tuple(out), self.order)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return TruncatedSeries(tuple(c / other for c in self.coefficients), self.order)

    def derivative(self) -> "TruncatedSeries":
        """d/dz; the order drops by one (order-0 input stays order 0)."""
        if self.order == 0:
            return TruncatedSeries((self.coefficients[0] * 0,), 0)
        return TruncatedSeries(
            tuple(i * self.coefficients[i] for i in range(1, self.order + 1)),
            self.order - 1,
        )

    def theta(self) -> "TruncatedSeries":
        """z*d/dz, keeping the order."""
        return TruncatedSeries(
            tuple(i * self.coefficients[i] for i in range(self.order + 1)), self.order
        )

    def shift_up(self, j: int = 1) -> "TruncatedSeries":
        """Multiplication by z^j, keeping the order."""
        zero = self.coefficients[0] * 0
        c = (zero,) * j + self.coefficients
        return TruncatedSeries(c[: self.order + 1], self.order)

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """self(inner); requires inner constant term zero."""
        if inner.coefficients[0] != 0:
            raise ValueError("composition requires zero constant term")
        n = min(self.order, inner.order)
        acc = TruncatedSeries.from_coefficients([self.coefficients[0]], n)
        power = TruncatedSeries.one(n)
        inner_t = inner.truncate(n)
        for k in range(1, n + 1):
            power = power * inner_t
            acc = acc + power.scale(self.coefficients[k])
        return acc

    def evaluate(self, z):
        acc = self.coefficients[self.order]
        for k in range(self.order - 1, -1, -1):
            acc = acc * z + self.coefficients[k]
        return acc

    def __str__(self) -> str:
        terms = [f"{c}*z^{i}" for i, c in enumerate(self.coefficients) if c != 0]
        return " + ".join(terms) if terms else "0"


def series_exp(s: TruncatedSeries) -> TruncatedSeries:
    """exp of a series with zero constant term, to the same order.

    Uses the ODE recursion E' = s'E, so coefficient k costs O(k) ring ops.
    """
    if s.coefficients[0] != 0:
        raise ValueError("requires zero constant term")
    n = s.order
    out = [s.coefficients[0] * 0 + 1]
    for k in range(1, n + 1):
        acc = s.coefficients[0] * 0
        for j in range(1, k + 1):
            acc += j * s.coefficients[j] * out[k - j]
        out.append(acc / k)
    return TruncatedSeries(tuple(out), n)


def series_log(s: TruncatedSeries) -> TruncatedSeries:
    """log of a series with constant term 1, to the same order."""
    if s.coefficients[0] != 1:
        raise ValueError("requires constant term one")
    n = s.order
    zero = s.coefficients[0] * 0
    out = [zero]
    for k in range(1, n + 1):
        acc = s.coefficients[k] * k
        for j in range(1, k):
            acc -= j * out[j] * s.coefficients[k - j]
        out.append(acc / k)
    return TruncatedSeries(tuple(out), n)


def series_reversion(s: TruncatedSeries) -> TruncatedSeries:
    """Compositional inverse t with s(t(q)) = q up to the truncation order.

    Requires s(0) = 0 and s'(0) != 0.
    """
    a = s.coefficients
    if a[0] != 0 or len(a) < 2 or a[1] == 0:
        raise ValueError("not an invertible coordinate")
    n = s.order
    t = [a[0] * 0, 1 / a[1]]
    # Match coefficients of s(t(q)) = q order by order; the unknown t_k first
    # appears in the q^k coefficient with factor a_1.
    for k in range(2, n + 1):
        t.append(a[0] * 0)
        comp = TruncatedSeries.from_coefficients(list(a[: k + 1]), k).compose(
            TruncatedSeries.from_coefficients(list(t), k)
        )
        t[k] = -comp.coefficients[k] / a[1]
    return TruncatedSeries(tuple(t[: n + 1]), n)
