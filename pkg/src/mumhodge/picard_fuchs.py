"""Fourth-order operators in Theta = z d/dz: singular points, indicial
analysis, the normalized logarithmic Frobenius basis, and the mirror map.

Operators are stored in Theta-form, sum_i P_i(z) Theta^i with z-powers on
the left, equivalently the z-graded form sum_j z^j Q_j(Theta).  Acting on
z^(n+eps), the z^m coefficient of L applied to sum c_n z^(n+eps) is
sum_j Q_j(m - j + eps) c_(m-j), which drives every recursion here.

The Frobenius basis at a MUM point with indicial rho^4 consists of the four
solutions

    omega_3          = psi_3 = 1 + O(z)
    (2 pi i) omega_2 = psi_3 log z + psi_2
    (2 pi i)^2 omega_1 = 2 psi_2 log z + psi_3 log^2 z + psi_1
    (2 pi i)^3 omega_0 = 3 psi_1 log z + 3 psi_2 log^2 z + psi_3 log^3 z + psi_0

with psi_j(0) = 0 for j <= 2 and psi_0(0) = 0.  They are produced in one
pass by solving the recursion over the truncated ring Q[eps]/(eps^4) for a
deformed exponent z^eps and reading off eps-components.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .linalg import rational_matrix
from .polys import (
    degree,
    falling_factorial_poly,
    is_fourfold_root,
    order_at,
    poly,
    poly_add,
    poly_compose_linear,
    poly_derivative,
    poly_divmod,
    poly_eval,
    poly_scale,
    rational_roots_with_multiplicity,
)
from .series import TruncatedSeries

INFINITY = "inf"

DEFAULT_ORDER = 50

# Stirling numbers of the second kind for Theta^i = sum_k S(i,k) z^k D^k.
_STIRLING2 = {
    (0, 0): 1,
    (1, 1): 1,
    (2, 1): 1, (2, 2): 1,
    (3, 1): 1, (3, 2): 3, (3, 3): 1,
    (4, 1): 1, (4, 2): 7, (4, 3): 6, (4, 4): 1,
}


@dataclass(frozen=True)
class PFOperator:
    """sum_i P_i(z) Theta^i with P_4 not identically zero.

    A common factor z^k across all coefficients is stripped on construction
    (it does not change the solution space away from the origin), so the
    z-graded form always has Q_0 != 0.
    """

    theta_polys: tuple  # (P_0, ..., P_4) as Fraction tuples

    @staticmethod
    def from_theta_polys(polys_in) -> "PFOperator":
        ps = [poly(p) for p in polys_in]
        if len(ps) != 5:
            raise ValueError("expected exactly five Theta-coefficient polynomials")
        if not ps[4]:
            raise ValueError("P_4 must not vanish identically")
        shift = min(order_at(p, 0) for p in ps if p)
        if shift:
            z_pow = poly([0] * shift + [1])
            ps = [poly_divmod(p, z_pow)[0] if p else p for p in ps]
        return PFOperator(tuple(ps))

    @staticmethod
    def from_z_graded(q_map) -> "PFOperator":
        """Build from {z-power j: [c_0, ..., c_4]} with Q_j = sum c_i rho^i."""
        ps = [[] for _ in range(5)]
        max_j = max(int(j) for j in q_map) if q_map else 0
        for i in range(5):
            coeffs = [Fraction(0)] * (max_j + 1)
            for j, row in q_map.items():
                coeffs[int(j)] = Fraction(row[i])
            ps[i] = poly(coeffs)
        return PFOperator.from_theta_polys(ps)

    @property
    def max_z_degree(self) -> int:
        return max(degree(p) for p in self.theta_polys if p)

    def q_polynomial(self, j: int) -> tuple:
        """Q_j(rho) = sum_i [z^j] P_i(z) rho^i."""
        return poly(
            [self.theta_polys[i][j] if j < len(self.theta_polys[i]) else Fraction(0)
             for i in range(5)]
        )

    def z_graded(self) -> dict[int, tuple]:
        return {j: self.q_polynomial(j) for j in range(self.max_z_degree + 1)
                if self.q_polynomial(j)}

    def dz_coefficients(self) -> tuple:
        """A_k(z) with L = sum_k A_k(z) (d/dz)^k; A_k = z^k sum_i S(i,k) P_i."""
        out = []
        for k in range(5):
            acc: tuple = ()
            for i in range(k if k > 0 else 0, 5):
                s = _STIRLING2.get((i, k))
                if s:
                    acc = poly_add(acc, poly_scale(self.theta_polys[i], s))
            out.append(poly(tuple([Fraction(0)] * k + list(acc))) if acc else ())
        return tuple(out)

    def at_infinity(self) -> "PFOperator":
        """Pullback under w = 1/z (Theta_z = -Theta_w): Q~_k(rho) = Q_(m-k)(-rho)."""
        m = self.max_z_degree
        q_map = {}
        for j in range(m + 1):
            qj = self.q_polynomial(m - j)
            if qj:
                q_map[j] = _pad5(poly_compose_linear(qj, -1, 0))
        return PFOperator.from_z_graded(q_map)

    def shift_exponent(self, mu) -> "PFOperator":
        """Conjugate by z^mu: solutions y of the result give z^mu y for self."""
        mu = Fraction(mu)
        q_map = {}
        for j, qj in self.z_graded().items():
            q_map[j] = _pad5(poly_compose_linear(qj, 1, mu))
        return PFOperator.from_z_graded(q_map)

    def apply_series_coefficient(self, s: TruncatedSeries, m: int):
        """[z^m] of L applied to an exponent-zero power series s."""
        acc = Fraction(0)
        for j in range(min(m, self.max_z_degree) + 1):
            qj = self.q_polynomial(j)
            if qj:
                acc += poly_eval(qj, Fraction(m - j)) * s.coefficients[m - j]
        return acc


def _pad5(p) -> list:
    if degree(p) > 4:
        raise ValueError("indicial data of degree > 4")
    return [p[i] if i < len(p) else Fraction(0) for i in range(5)]


@dataclass(frozen=True)
class SingularPointReport:
    location: Union[Fraction, complex, str]
    exact: bool
    is_regular: Optional[bool] = None
    indicial: Optional[tuple] = None  # rho-polynomial, when computed
    indicial_roots: Optional[tuple] = None  # ((root, multiplicity), ...)
    is_mum: Optional[bool] = None
    mum_exponent: Optional[Fraction] = None
    multiplicity: int = 1  # multiplicity as a root of the leading coefficient


def singular_points(op: PFOperator, precision: int = 53) -> list[SingularPointReport]:
    """All singular points: roots of P_4, plus z = 0 and infinity when singular.

    Rational roots are exact; the rest are precision-tagged complex values
    with the exactness flag cleared (indicial analysis for those is out of
    scope).  Reports for exact points carry full indicial data.
    """
    reports = []
    if _is_singular_at_zero(op):
        reports.append(indicial_polynomial(op, Fraction(0)))
    p4 = op.theta_polys[4]
    rat_roots, cofactor = rational_roots_with_multiplicity(p4)
    for r, mult in rat_roots:
        if r == 0:
            continue  # z = 0 handled through its own indicial test
        rep = indicial_polynomial(op, r)
        reports.append(
            SingularPointReport(
                location=rep.location, exact=True, is_regular=rep.is_regular,
                indicial=rep.indicial, indicial_roots=rep.indicial_roots,
                is_mum=rep.is_mum, mum_exponent=rep.mum_exponent,
                multiplicity=mult,
            )
        )
    for root, mult in _numeric_roots(cofactor, precision):
        reports.append(SingularPointReport(location=root, exact=False, multiplicity=mult))
    if _is_singular_at_zero(op.at_infinity()):
        reports.append(indicial_polynomial(op, INFINITY))
    return reports


def _is_singular_at_zero(op: PFOperator) -> bool:
    # Ordinary at 0 iff A_k/A_4 is analytic at 0 for all k < 4.
    a = op.dz_coefficients()
    m4 = order_at(a[4], 0)
    return any(order_at(a[k], 0) < m4 for k in range(4))


def _numeric_roots(p, precision: int) -> list[tuple[complex, int]]:
    """Roots of p with multiplicities, via square-free decomposition plus
    numpy isolation and Newton polishing at the requested precision."""
    if degree(p) < 1:
        return []
    import gmpy2
    import numpy as np

    out = []
    for sqfree, mult in _squarefree_decomposition(p):
        if degree(sqfree) < 1:
            continue
        approx = np.roots([float(c) for c in reversed(sqfree)])
        dpd = poly_derivative(sqfree)
        with gmpy2.context(precision=precision + 32):
            for r in approx:
                x = gmpy2.mpc(r)
                for _ in range(80):
                    fx = _poly_eval_mpc(sqfree, x)
                    dfx = _poly_eval_mpc(dpd, x)
                    if dfx == 0:
                        break
                    step = fx / dfx
                    x = x - step
                    if abs(step) < gmpy2.exp2(-(precision + 16)):
                        break
                out.append((complex(x.real, x.imag), mult))
    return out


def _squarefree_decomposition(p) -> list[tuple[tuple, int]]:
    """Yun-style decomposition: p = prod s_i^i up to a constant."""
    from .polys import poly_gcd

    out = []
    cur = poly(p)
    i = 1
    while degree(cur) >= 1:
        g = poly_gcd(cur, poly_derivative(cur))
        sqfree_all = poly_divmod(cur, g)[0]
        nxt = g
        s_i = poly_divmod(sqfree_all, poly_gcd(sqfree_all, nxt))[0]
        if degree(s_i) >= 1:
            out.append((s_i, i))
        cur = nxt
        i += 1
    return out


def _poly_eval_mpc(p, x):
    import gmpy2

    acc = x * 0
    for c in reversed(p):
        acc = acc * x + gmpy2.mpq(c.numerator, c.denominator)
    return acc


def indicial_polynomial(op: PFOperator, point) -> SingularPointReport:
    """Indicial polynomial report at z = 0, infinity, or a rational root of P_4."""
    if point == INFINITY:
        inner = indicial_polynomial(op.at_infinity(), Fraction(0))
        return SingularPointReport(
            location=INFINITY,
            exact=True,
            is_regular=inner.is_regular,
            indicial=inner.indicial,
            indicial_roots=inner.indicial_roots,
            is_mum=inner.is_mum,
            mum_exponent=inner.mum_exponent,
        )
    point = Fraction(point)
    if point == 0:
        if not _is_singular_at_zero(op):
            raise ValueError("ordinary point has trivial indicial data")
        q0 = op.q_polynomial(0)
        if degree(q0) != 4:
            return SingularPointReport(
                location=Fraction(0), exact=True, is_regular=False,
            )
        return _report_from_indicial(Fraction(0), q0)
    # Finite nonzero point: must be a singular point, i.e. a root of P_4.
    if poly_eval(op.theta_polys[4], point) != 0:
        raise ValueError("ordinary point has trivial indicial data")
    a = op.dz_coefficients()
    m = order_at(a[4], point)
    ind: tuple = ()
    b4 = _shifted_value(a[4], point, m)
    for k in range(5):
        if not a[k]:
            continue
        ok = order_at(a[k], point)
        want = m - 4 + k
        if ok < want:
            return SingularPointReport(location=point, exact=True, is_regular=False)
        if ok == want:
            ck = _shifted_value(a[k], point, ok) / b4
            ind = poly_add(ind, poly_scale(falling_factorial_poly(k), ck))
    return _report_from_indicial(point, ind)


def _shifted_value(p, z0, k):
    """Value of p/(z - z0)^k at z0, requiring exact divisibility."""
    cur = poly(p)
    for _ in range(k):
        cur, rem = poly_divmod(cur, poly([-Fraction(z0), 1]))
        if rem:
            raise AssertionError("inexact division in indicial computation")
    return poly_eval(cur, Fraction(z0))


def _report_from_indicial(location, ind) -> SingularPointReport:
    mum, root = is_fourfold_root(ind)
    rr, cofactor = rational_roots_with_multiplicity(ind)
    roots = tuple((r, mult) for r, mult in rr)
    if degree(cofactor) > 0:
        roots = roots + (("non-rational factor", cofactor),)
    return SingularPointReport(
        location=location,
        exact=True,
        is_regular=True,
        indicial=ind,
        indicial_roots=roots,
        is_mum=mum,
        mum_exponent=root,
    )


# ---------------------------------------------------------------------------
# Frobenius basis via the deformed exponent
# ---------------------------------------------------------------------------


def _eps_mul(a, b):
    return (
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
        a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0],
    )


def _eps_add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def _eps_neg(a):
    return (-a[0], -a[1], -a[2], -a[3])


def _eps_inv(a):
    inv0 = 1 / a[0]
    u1 = -inv0 * a[1] * inv0
    u2 = -(a[1] * u1 + a[2] * inv0) * inv0
    u3 = -(a[1] * u2 + a[2] * u1 + a[3] * inv0) * inv0
    return (inv0, u1, u2, u3)


def frobenius_coefficients(op: PFOperator, order: int, scalar=Fraction):
    """Coefficients c_m in Q[eps]/(eps^4) of the deformed solution z^eps sum c_m z^m.

    ``scalar`` converts a Fraction into the working coefficient field, so the
    same recursion serves the exact path (Fraction) and the floating path.
    """
    q0 = op.q_polynomial(0)
    mum, root = is_fourfold_root(q0)
    if not mum or root != 0:
        raise ValueError("origin is not a MUM point with indicial rho^4")
    zero = scalar(Fraction(0))
    one = scalar(Fraction(1))
    max_j = op.max_z_degree
    q_cache = {}
    for j in range(max_j + 1):
        qj = op.q_polynomial(j)
        if qj:
            q_cache[j] = [scalar(c) for c in qj]
    c = [(one, zero, zero, zero)]
    for m in range(1, order + 1):
        rhs = (zero, zero, zero, zero)
        for j in range(1, min(m, max_j) + 1):
            if j not in q_cache:
                continue
            qj_at = _eps_eval_poly_shifted(q_cache[j], scalar(Fraction(m - j)), zero, one)
            rhs = _eps_add(rhs, _eps_mul(qj_at, c[m - j]))
        q0_at = _eps_eval_poly_shifted(q_cache[0], scalar(Fraction(m)), zero, one)
        c.append(_eps_mul(_eps_inv(q0_at), _eps_neg(rhs)))
    return c


def _eps_eval_poly_shifted(q_scaled, n, zero, one):
    """q(n + eps) by Horner: the variable is (n + eps) = (n, 1, 0, 0)."""
    var = (n, one, zero, zero)
    acc = (zero, zero, zero, zero)
    for coeff in reversed(q_scaled):
        acc = _eps_mul(acc, var)
        acc = _eps_add(acc, (coeff, zero, zero, zero))
    return acc


@dataclass(frozen=True)
class FrobeniusBasis:
    psi3: TruncatedSeries
    psi2: TruncatedSeries
    psi1: TruncatedSeries
    psi0: TruncatedSeries
    order: int

    @property
    def psis(self) -> tuple:
        return (self.psi3, self.psi2, self.psi1, self.psi0)

    def log_solutions(self) -> tuple:
        """The rationally scaled solutions y_k = (2 pi i)^k omega_k as
        log-graded series: y_k = sum_l coeff[l] * (log z)^l."""
        p3, p2, p1, p0 = self.psis
        return (
            (p3,),
            (p2, p3),
            (p1, p2.scale(2), p3),
            (p0, p1.scale(3), p2.scale(3), p3),
        )


def frobenius_basis(op: PFOperator, order: int = DEFAULT_ORDER) -> FrobeniusBasis:
    """The unique normalized logarithmic solution basis at a MUM origin."""
    c = frobenius_coefficients(op, order)
    s = [
        TruncatedSeries.from_coefficients([c[m][lvl] for m in range(order + 1)])
        for lvl in range(4)
    ]
    return FrobeniusBasis(
        psi3=s[0],
        psi2=s[1],
        psi1=s[2].scale(2),
        psi0=s[3].scale(6),
        order=order,
    )


def apply_to_log_series(op: PFOperator, log_series: Sequence[TruncatedSeries]):
    """Apply L to sum_l g_l(z) (log z)^l; returns the log-graded result.

    Theta acts by (Theta g_l) + (l+1) g_(l+1); multiplication by z^j shifts
    each graded piece.
    """
    levels = list(log_series)
    L = len(levels)

    def theta(ls):
        out = []
        for l in range(len(ls)):
            t = ls[l].theta()
            if l + 1 < len(ls):
                t = t + ls[l + 1].scale(l + 1)
            out.append(t)
        return out

    result = None
    for j, qj in op.z_graded().items():
        cur = levels
        acc_j = [s.scale(qj[0]) if len(qj) > 0 else s.scale(0) for s in levels]
        for i in range(1, len(qj)):
            cur = theta(cur)
            if qj[i] != 0:
                acc_j = [a + t.scale(qj[i]) for a, t in zip(acc_j, cur)]
        shifted = [s.shift_up(j) if j else s for s in acc_j]
        result = shifted if result is None else [a + b for a, b in zip(result, shifted)]
    return result


@dataclass(frozen=True)
class MirrorMap:
    q: TruncatedSeries
    z_of_q: TruncatedSeries


def mirror_map(fb: FrobeniusBasis, a: Fraction = Fraction(1)) -> MirrorMap:
    """The canonical coordinate q(z) = z exp(psi2/(a psi3)) and its reversion."""
    if fb.psi3.coefficients[0] != 1:
        raise ValueError("Frobenius basis must have psi3(0) = 1")
    a = Fraction(a)
    ratio = (fb.psi2 * fb.psi3.inverse()).scale(Fraction(1) / a)
    from .series import series_exp, series_reversion

    q = series_exp(ratio).shift_up(1)
    return MirrorMap(q=q, z_of_q=series_reversion(q))


def local_monodromy_mum(fb: Optional[FrobeniusBasis] = None):
    """Monodromy z -> e^(2 pi i) z on (omega_3, omega_2, omega_1, omega_0).

    The frame transforms by the Pascal lower-triangular matrix, exactly and
    independently of the operator.
    """
    return rational_matrix(
        [
            [1, 0, 0, 0],
            [1, 1, 0, 0],
            [1, 2, 1, 0],
            [1, 3, 3, 1],
        ]
    )
