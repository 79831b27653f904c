"""Normalized limit Hodge filtrations and the mirror-invariant dictionary.

The period matrix of a limit filtration adapted to a normal form (a, b, e, f)
is lower-unitriangular with parameters (pi2, pi1, pi0):

        [ 1                      0                    0    0 ]
        [ pi2                    1                    0    0 ]
        [ pi1                    (b/a) pi2 + e/a      1    0 ]
        [ pi0                    (e/a) pi2 + f/a - pi1  -pi2  1 ]

subject to the second bilinear relation <omega3, omega2> = 0, which pins

        pi1 = f/(2a) + (e/a) pi2 + (b/(2a)) pi2^2.

Multiplying by exp(-(pi2/a) N) kills pi2 and produces the normalized shape

        [ 1      0      0  0 ]
        [ 0      1      0  0 ]
        [ f/2a   e/a    1  0 ]
        [ pi     f/2a   0  1 ]

whose parameters (f/2a, e/a, pi) are the extension data of the limit mixed
Hodge structure; pi parametrizes the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import gmpy2

from .bigfloat import (
    BigComplex,
    DEFAULT_PRECISION,
    default_tolerance,
    kappa,
    rational_reconstruct,
)
from .linalg import KappaPoly, kappa_matrix, mat, mat_mul
from .symplectic import NormalForm, check_integrality_polarization


def _as_entry(x, precision):
    """Normalize an entry to Fraction (exact) or BigComplex (numeric)."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, BigComplex):
        return x
    if isinstance(x, complex):
        return BigComplex.make(x.real, x.imag, precision)
    return BigComplex.make(x, 0, precision)


def _entry_is(x, target, tol) -> bool:
    """Exact comparison when both sides are exact, tolerance otherwise."""
    if isinstance(x, Fraction) and isinstance(target, Fraction):
        return x == target
    bx = x if isinstance(x, BigComplex) else BigComplex.make(x, 0, 256)
    return bx.is_close_to(target, tol)


@dataclass(frozen=True)
class PeriodMatrix:
    """Lower-unitriangular limit period matrix in the adapted integral basis."""

    entries: tuple
    normal_form: NormalForm
    precision: int = DEFAULT_PRECISION

    @property
    def pi2(self):
        return self.entries[1][0]

    @property
    def pi1(self):
        return self.entries[2][0]

    @property
    def pi0(self):
        return self.entries[3][0]

    @staticmethod
    def from_parameters(nf: NormalForm, pi2, pi0, precision: int = DEFAULT_PRECISION) -> "PeriodMatrix":
        """Build the matrix from (pi2, pi0); pi1 is forced by the second
        bilinear relation."""
        a, b, e, f = nf.a, nf.b, nf.e, nf.f
        pi2 = _as_entry(pi2, precision)
        pi0 = _as_entry(pi0, precision)
        pi1 = f / (2 * a) + (e / a) * pi2 + (b / (2 * a)) * pi2 * pi2
        zero, one = Fraction(0), Fraction(1)
        rows = [
            [one, zero, zero, zero],
            [pi2, one, zero, zero],
            [pi1, (b / a) * pi2 + e / a, one, zero],
            [pi0, (e / a) * pi2 + f / a - pi1, -pi2, one],
        ]
        return PeriodMatrix(mat(rows), nf, precision)


@dataclass(frozen=True)
class LMHSPoint:
    """A MUM boundary point: normal form, extension classes and pi.

    ``pi_exact`` carries the exact p + q*kappa decomposition when known
    (e.g. points built from mirror invariants); ``pi`` is always available
    as a precision-tagged float.
    """

    normal_form: NormalForm
    pi: BigComplex
    f_over_2a: Fraction
    e_over_a: Fraction
    pi_exact: Optional[KappaPoly] = None

    @staticmethod
    def make(nf: NormalForm, pi, precision: int = DEFAULT_PRECISION,
             pi_exact: Optional[KappaPoly] = None) -> "LMHSPoint":
        if isinstance(pi, (int, Fraction)):
            if pi_exact is None:
                pi_exact = KappaPoly.const(pi)
            pi = BigComplex.from_rational(Fraction(pi), precision)
        elif isinstance(pi, complex):
            pi = BigComplex.make(pi.real, pi.imag, precision)
        elif not isinstance(pi, BigComplex):
            pi = BigComplex.make(pi, 0, precision)
        return LMHSPoint(
            normal_form=nf,
            pi=pi,
            f_over_2a=nf.f / (2 * nf.a),
            e_over_a=nf.e / nf.a,
            pi_exact=pi_exact,
        )

    def normalized_matrix(self):
        zero, one = Fraction(0), Fraction(1)
        return mat(
            [
                [one, zero, zero, zero],
                [zero, one, zero, zero],
                [self.f_over_2a, self.e_over_a, one, zero],
                [self.pi, self.f_over_2a, zero, one],
            ]
        )


def normalize_lhf(pm: PeriodMatrix, nf: NormalForm) -> LMHSPoint:
    """Kill pi2 by multiplying with exp(-(pi2/a) N) and read off (3.7) data."""
    _validate_shape(pm, nf)
    t = pm.pi2 * Fraction(-1, 1) / nf.a
    n = nf.matrix().entries
    e_mat = _exp_scalar_nilpotent(n, t)
    p = mat_mul(e_mat, pm.entries)
    tol = default_tolerance(pm.precision)
    if not _entry_is(p[1][0], Fraction(0), tol):
        raise AssertionError("normalization failed to kill pi2")
    f2a = nf.f / (2 * nf.a)
    ea = nf.e / nf.a
    for val, expect, name in [
        (p[2][0], f2a, "entry (3,1)"),
        (p[3][1], f2a, "entry (4,2)"),
        (p[2][1], ea, "entry (3,2)"),
        (p[3][2], Fraction(0), "entry (4,3)"),
    ]:
        if not _entry_is(val, expect, tol):
            raise AssertionError(f"normalized matrix violates the (3.7) shape at {name}")
    return LMHSPoint.make(nf, p[3][0], precision=pm.precision)


def _validate_shape(pm: PeriodMatrix, nf: NormalForm):
    a, b, e, f = nf.a, nf.b, nf.e, nf.f
    m = pm.entries
    tol = default_tolerance(pm.precision)
    zero, one = Fraction(0), Fraction(1)
    for i in range(4):
        if not _entry_is(m[i][i], one, tol):
            raise ValueError("input is not a (3.6) period matrix: diagonal not 1")
        for j in range(i + 1, 4):
            if not _entry_is(m[i][j], zero, tol):
                raise ValueError("input is not a (3.6) period matrix: not lower triangular")
    pi2, pi1 = pm.pi2, pm.pi1
    checks = [
        (m[2][1], (b / a) * pi2 + e / a, "entry (3,2)"),
        (m[3][1], (e / a) * pi2 + f / a - pi1, "entry (4,2)"),
        (m[3][2], -pi2 if isinstance(pi2, Fraction) else pi2 * Fraction(-1), "entry (4,3)"),
        # Second bilinear relation <omega3, omega2> = 0.
        (pi1, f / (2 * a) + (e / a) * pi2 + (b / (2 * a)) * pi2 * pi2, "bilinear relation"),
    ]
    for got, expect, name in checks:
        if not _entry_is(got, expect, tol):
            raise ValueError(f"input is not a (3.6) period matrix: {name}")


def _exp_scalar_nilpotent(n, t):
    """exp(t N) for nilpotent rational N and scalar t (Fraction or BigComplex)."""
    from .linalg import identity, mat_add, mat_scale

    out = identity(4, one=Fraction(1))
    power = identity(4, one=Fraction(1))
    coeff = Fraction(1)
    tk = None
    for k in range(1, 4):
        power = mat_mul(power, n)
        coeff = coeff / k
        tk = t if tk is None else tk * t
        out = mat_add(out, mat_scale(power, tk * coeff))
    return out


def lhf_vector(point: LMHSPoint) -> tuple:
    """The limit Hodge line [1, 0, f/2a, pi] in the canonical coordinate."""
    return (Fraction(1), Fraction(0), point.f_over_2a, point.pi)


@dataclass(frozen=True)
class MirrorInvariants:
    """Topological invariants of the mirror threefold: degree, c2.H, chi."""

    degree: int
    c2_h: int
    euler: int

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("degree must be a positive integer")

    @property
    def twist(self) -> Fraction:
        return Fraction(1) if self.degree % 2 == 0 else Fraction(-1, 2)


@dataclass(frozen=True)
class TorelliEvidence:
    branch: str  # "b", "pi-exact", "pi-recognized", "pi-unrecognized"
    detail: str
    recognized: Optional[Fraction] = None
    residual: Optional[str] = None


@dataclass(frozen=True)
class TorelliVerdict:
    distinguishable: bool
    evidence: TorelliEvidence

    @property
    def label(self) -> str:
        return "distinguishable" if self.distinguishable else "inconclusive"


def torelli_distinguish(
    p1: LMHSPoint,
    p2: LMHSPoint,
    denominator_bound: int = 10**6,
    precision: int = DEFAULT_PRECISION,
) -> TorelliVerdict:
    """The distinguishability criterion: b1 != b2, or pi1 - pi2 not rational.

    The pi branch is numerical evidence, not proof: a failure to recognize a
    rational only certifies distinguishability at the working precision.
    """
    for p in (p1, p2):
        if not check_integrality_polarization(p.normal_form).passed:
            raise ValueError("torelli test requires polarized integral normal forms")
    b1, b2 = p1.normal_form.b, p2.normal_form.b
    if b1 != b2:
        return TorelliVerdict(
            True,
            TorelliEvidence(branch="b", detail=f"b differs exactly: {b1} != {b2}"),
        )
    if p1.pi_exact is not None and p2.pi_exact is not None:
        diff = p1.pi_exact - p2.pi_exact
        q_part = diff - KappaPoly.const(diff.coefficient(0))
        if q_part == KappaPoly.make():
            return TorelliVerdict(
                False,
                TorelliEvidence(
                    branch="pi-exact",
                    detail="pi difference is exactly rational",
                    recognized=diff.coefficient(0),
                ),
            )
        return TorelliVerdict(
            True,
            TorelliEvidence(
                branch="pi-exact",
                detail=f"pi difference has exact irrational part {q_part}",
            ),
        )
    d = p1.pi - p2.pi
    prec = min(precision, p1.pi.precision, p2.pi.precision)
    tol = default_tolerance(prec)
    if abs(d.im) > tol:
        return TorelliVerdict(
            True,
            TorelliEvidence(
                branch="pi-unrecognized",
                detail="pi difference has nonzero imaginary part at working precision",
                residual=str(d.im),
            ),
        )
    rec = rational_reconstruct(d.re, denominator_bound, precision=prec)
    if rec is None:
        return TorelliVerdict(
            True,
            TorelliEvidence(
                branch="pi-unrecognized",
                detail=(
                    "pi difference not recognized as rational at working precision "
                    f"(bound {denominator_bound}, {prec} bits)"
                ),
                residual=str(d.re),
            ),
        )
    return TorelliVerdict(
        False,
        TorelliEvidence(
            branch="pi-recognized",
            detail=f"pi difference recognized as {rec}",
            recognized=rec,
        ),
    )


def mirror_to_hodge(mi: MirrorInvariants, precision: int = DEFAULT_PRECISION) -> LMHSPoint:
    """Prop.-5.1 dictionary: (deg, c2.H, chi) -> normal form and pi."""
    nf = NormalForm(
        a=Fraction(1),
        b=Fraction(mi.degree),
        e=mi.twist,
        f=Fraction(-mi.c2_h, 12),
    )
    pi_exact = KappaPoly.kappa_times(mi.euler)
    pi = kappa(precision) * mi.euler
    return LMHSPoint.make(nf, pi, precision=precision, pi_exact=pi_exact)


def mirror_frame_matrix(mi: MirrorInvariants):
    """The integral symplectic period frame predicted by mirror symmetry.

    Returns the exact matrix V over Q[kappa] expressing the period vector of
    the distinguished symplectic cycle basis through the normalized solution
    frame: periods = V (omega_3, omega_2, omega_1, omega_0)^T.  Conjectural
    for a general operator; consumers verify integrality of the resulting
    monodromy post hoc.
    """
    u = KappaPoly.const(Fraction(-mi.c2_h, 24))
    lam = KappaPoly.const(mi.twist)
    d = Fraction(mi.degree)
    w = KappaPoly.kappa_times(mi.euler)
    return kappa_matrix(
        [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [u, lam, d / 2, 0],
            [w, u, 0, -d / 6],
        ]
    )


def hodge_to_mirror(
    point: LMHSPoint,
    denominator_bound: int = 10**6,
) -> Optional[MirrorInvariants]:
    """Invert the dictionary; requires the a = 1, e in {1, -1/2} gauge."""
    nf = point.normal_form
    if nf.b.denominator != 1 or nf.b < 1:
        raise ValueError("not in mirror gauge")
    expected_e = Fraction(1) if int(nf.b) % 2 == 0 else Fraction(-1, 2)
    if nf.a != 1 or nf.e != expected_e:
        raise ValueError("not in mirror gauge")
    c2h = -12 * nf.f
    if c2h.denominator != 1:
        return None
    if point.pi_exact is not None:
        if point.pi_exact.degree > 1 or point.pi_exact.coefficient(0) != 0:
            return None
        chi = point.pi_exact.coefficient(1)
        if chi.denominator != 1:
            return None
        return MirrorInvariants(degree=int(nf.b), c2_h=int(c2h), euler=int(chi))
    prec = point.pi.precision
    tol = default_tolerance(prec)
    if abs(point.pi.re) > tol:
        return None
    k = kappa(prec)
    with gmpy2.context(precision=prec):
        ratio = point.pi.im / k.im
    chi = rational_reconstruct(ratio, denominator_bound, precision=prec)
    if chi is None or chi.denominator != 1:
        return None
    return MirrorInvariants(degree=int(nf.b), c2_h=int(c2h), euler=int(chi))
