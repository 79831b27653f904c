"""Exact algebra of the rank-4 symplectic lattice and MUM nilpotents.

Coordinate convention used everywhere in this package: vectors are written
in the basis order (e3, e2, e1, e0), i.e. coordinates (c3, c2, c1, c0) with
index 0 <-> e3 and index 3 <-> e0.  The fixed symplectic Gram matrix is

        [ 0  0  0  1]
        [ 0  0  1  0]
        [ 0 -1  0  0]
        [-1  0  0  0]

so that <e3, e0> = <e2, e1> = 1.  A MUM nilpotent in an adapted basis is

        [0  0  0  0]
        [a  0  0  0]
        [e  b  0  0]
        [f  e -a  0]

and the weight filtration is W0 = span{e0} in W2 = span{e0,e1} in
W4 = span{e0,e1,e2} in W6 = everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .linalg import (
    identity,
    integer_kernel_basis,
    mat,
    mat_eq,
    mat_inv,
    mat_log_unipotent,
    mat_mul,
    mat_pow_nilpotent_exp,
    mat_sub,
    mat_vec,
    primitive_integer_vector,
    rational_matrix,
    solve_integer_functional,
    transpose,
)

GRAM = rational_matrix(
    [
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, -1, 0, 0],
        [-1, 0, 0, 0],
    ]
)

BASIS_LABELS = ("e3", "e2", "e1", "e0")


@dataclass(frozen=True)
class SymplecticFrame:
    """A symplectic basis given by its column vectors in standard coordinates.

    ``change_of_basis`` maps new-frame coordinates to standard coordinates;
    the frame satisfies A^T J A = J for the fixed Gram matrix above.
    """

    change_of_basis: tuple

    def __post_init__(self):
        a = self.change_of_basis
        if not mat_eq(mat_mul(transpose(a), mat_mul(GRAM, a)), GRAM):
            raise ValueError("frame does not preserve the symplectic form")

    @staticmethod
    def standard() -> "SymplecticFrame":
        return SymplecticFrame(identity(4))

    @property
    def gram(self):
        return GRAM

    def vector(self, k: int) -> tuple:
        return tuple(self.change_of_basis[i][k] for i in range(4))


def pairing(x, y) -> Fraction:
    """The symplectic form <x, y> in standard coordinates."""
    return sum(x[i] * GRAM[i][j] * y[j] for i in range(4) for j in range(4))


@dataclass(frozen=True)
class NilpotentMatrix:
    entries: tuple

    @staticmethod
    def from_rows(rows) -> "NilpotentMatrix":
        m = rational_matrix(rows)
        n4 = mat_mul(mat_mul(m, m), mat_mul(m, m))
        if any(x != 0 for row in n4 for x in row):
            raise ValueError("matrix is not nilpotent of order <= 4")
        return NilpotentMatrix(m)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def power(self, k: int):
        acc = identity(4)
        for _ in range(k):
            acc = mat_mul(acc, self.entries)
        return acc

    def rank(self) -> int:
        return _rank(self.entries)

    def is_infinitesimally_symplectic(self) -> bool:
        # <Nx, y> + <x, Ny> = 0  <=>  N^T J + J N = 0.
        lhs = mat_mul(transpose(self.entries), GRAM)
        rhs = mat_mul(GRAM, self.entries)
        return all(lhs[i][j] + rhs[i][j] == 0 for i in range(4) for j in range(4))


@dataclass(frozen=True)
class NormalForm:
    a: Fraction
    b: Fraction
    e: Fraction
    f: Fraction

    def __post_init__(self):
        for name in ("a", "b", "e", "f"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.a == 0:
            raise ValueError("a must be nonzero for a MUM normal form")

    def matrix(self) -> NilpotentMatrix:
        a, b, e, f = self.a, self.b, self.e, self.f
        return NilpotentMatrix(
            rational_matrix(
                [
                    [0, 0, 0, 0],
                    [a, 0, 0, 0],
                    [e, b, 0, 0],
                    [f, e, -a, 0],
                ]
            )
        )

    def monodromy(self):
        """T = exp(N), exactly."""
        return mat_pow_nilpotent_exp(self.matrix().entries)

    def sign_flip(self) -> "NormalForm":
        """Basis change e3 -> -e3, e0 -> -e0 (symplectic, preserves W):
        (a, b, e, f) -> (-a, b, -e, f)."""
        return NormalForm(-self.a, self.b, -self.e, self.f)


@dataclass(frozen=True)
class WeightStabilizerElement:
    p: Fraction
    q: Fraction
    r: Fraction
    s: Fraction

    def __post_init__(self):
        for name in ("p", "q", "r", "s"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def satisfies_integrality(self) -> bool:
        p, q, r, s = self.p, self.q, self.r, self.s
        return all(
            x.denominator == 1
            for x in (p, q, r + p * q / 2, r - p * q / 2, s - p * p * q / 6)
        )

    def matrix(self):
        """exp(M) for the strictly lower triangular generator M."""
        m = rational_matrix(
            [
                [0, 0, 0, 0],
                [self.p, 0, 0, 0],
                [self.r, self.q, 0, 0],
                [self.s, self.r, -self.p, 0],
            ]
        )
        return mat_pow_nilpotent_exp(m)

    @staticmethod
    def from_matrix(a) -> "WeightStabilizerElement":
        p = a[1][0]
        q = a[2][1]
        r = (a[2][0] + a[3][1]) / 2
        s = a[3][0] + p * p * q / 6
        cand = WeightStabilizerElement(p, q, r, s)
        if not mat_eq(cand.matrix(), mat(a)):
            raise ValueError("matrix is not a weight-stabilizer exponential")
        return cand

    def compose(self, other: "WeightStabilizerElement") -> "WeightStabilizerElement":
        """self * other as group elements (matrix product of exponentials)."""
        return WeightStabilizerElement.from_matrix(
            mat_mul(self.matrix(), other.matrix())
        )


def _rank(m) -> int:
    rows = [list(r) for r in m]
    n = len(rows)
    cols = len(rows[0])
    rank = 0
    for c in range(cols):
        piv = next((r for r in range(rank, n) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(n):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def _column_span_basis(m) -> list[tuple]:
    """Basis of the column span, as primitive integer vectors."""
    cols = [tuple(m[i][j] for i in range(4)) for j in range(4)]
    basis = []
    for v in cols:
        if all(x == 0 for x in v):
            continue
        trial = basis + [v]
        if _rank(trial) > len(basis):
            basis.append(v)
    return [primitive_integer_vector(v) for v in basis]


def _in_span(v, basis) -> bool:
    if not basis:
        return all(x == 0 for x in v)
    return _rank(list(basis) + [list(v)]) == len(basis)


def weight_filtration(n: NilpotentMatrix):
    """W0 in W2 in W4 for a MUM nilpotent, as primitive integral bases.

    W0 = im N^3, W2 = im N^2, W4 = im N; these are the unique subspaces with
    graded dimensions (1,1,1,1) compatible with the powers of N.
    """
    if not n.is_infinitesimally_symplectic():
        raise ValueError("matrix is not infinitesimally symplectic")
    n3 = n.power(3)
    if all(x == 0 for row in n3 for x in row) or not _is_zero_matrix(n.power(4)):
        raise ValueError("weight filtration implemented only for MUM type")
    w0 = _column_span_basis(n3)
    w2 = _column_span_basis(n.power(2))
    w4 = _column_span_basis(n.entries)
    if (len(w0), len(w2), len(w4)) != (1, 2, 3):
        raise ValueError("weight filtration implemented only for MUM type")
    return w0, w2, w4


def _is_zero_matrix(m) -> bool:
    return all(x == 0 for row in m for x in row)


def classify_nilpotent(n: NilpotentMatrix) -> str:
    """Boundary type of a nonzero nilpotent: 'type-I', 'type-II' or 'MUM'."""
    if not _is_zero_matrix(n.power(4)):
        raise ValueError("matrix is not nilpotent of order <= 4")
    if not n.is_infinitesimally_symplectic():
        raise ValueError("matrix is not infinitesimally symplectic")
    if _is_zero_matrix(n.entries):
        raise ValueError("zero nilpotent generates no boundary type")
    if not _is_zero_matrix(n.power(3)):
        return "MUM"
    if _is_zero_matrix(n.power(2)):
        r = n.rank()
        if r == 1:
            return "type-I"
        if r == 2:
            return "type-II"
        raise ValueError("square-zero nilpotent of rank > 2 cannot be symplectic here")
    raise ValueError("nilpotent with N^2 != 0, N^3 = 0 is not a polarizable boundary type")


def log_unipotent(t) -> NilpotentMatrix:
    """N = log T for unipotent T with (T - I)^4 = 0, exactly."""
    t = rational_matrix(t)
    u = mat_sub(t, identity(4))
    if not _is_zero_matrix(mat_mul(mat_mul(u, u), mat_mul(u, u))):
        raise ValueError("matrix is not unipotent with (T - I)^4 = 0")
    n = NilpotentMatrix(mat_log_unipotent(t))
    if not mat_eq(mat_pow_nilpotent_exp(n.entries), t):
        raise AssertionError("exp(log T) failed to reproduce T")
    return n


def _check_integral_symplectic(t):
    if any(x.denominator != 1 for row in t for x in row):
        raise ValueError("matrix is not integral")
    if not mat_eq(mat_mul(transpose(t), mat_mul(GRAM, t)), GRAM):
        raise ValueError("matrix is not symplectic for the fixed Gram matrix")


def normal_form(t) -> tuple[NormalForm, SymplecticFrame]:
    """Adapted symplectic basis and (a, b, e, f) for an integral MUM unipotent.

    Returns (nf, frame) where frame.change_of_basis A is integral symplectic,
    adapted to W(log T), and A^-1 (log T) A is exactly the normal-form matrix
    of nf.  The construction: primitive generator of W0, a dual vector via the
    unimodular pairing, then the rank-2 symplectic complement, which lies
    inside W4 and meets W2 in a line.  Remaining ambiguity is the weight
    stabilizer, harmless for the invariants.
    """
    t = rational_matrix(t)
    _check_integral_symplectic(t)
    n = log_unipotent(t)
    w0, w2, w4 = weight_filtration(n)

    e0 = w0[0]
    # f3 with <f3, e0> = 1: the functional x -> <x, e0> has integer coefficients.
    func = tuple(pairing(_unit(i), e0) for i in range(4))
    f3 = solve_integer_functional([int(c) for c in func], 1)
    # Symplectic complement C of the hyperbolic pair (e0, f3); C lies in W4.
    row1 = [int(pairing(_unit(i), e0)) for i in range(4)]
    row2 = [int(pairing(_unit(i), f3)) for i in range(4)]
    c_basis = integer_kernel_basis([row1, row2])
    if len(c_basis) != 2:
        raise AssertionError("symplectic complement must have rank 2")
    c1, c2 = c_basis
    # The line C /\ W2: solve lam1*c1 + lam2*c2 in span(W2) exactly.
    lam = _intersect_line(c1, c2, w2)
    e1 = primitive_integer_vector(
        tuple(lam[0] * x + lam[1] * y for x, y in zip(c1, c2))
    )
    # e2 in C with <e2, e1> = 1, via the unimodular form restricted to C.
    alpha, beta = _coords_in_basis(e1, c1, c2)
    g = pairing(c1, c2)
    if abs(g) != 1:
        raise AssertionError("form restricted to the complement must be unimodular")
    gg, x, y = _ext_gcd_pair(int(alpha), int(beta))
    if gg != 1:
        raise AssertionError("e1 coordinates in C must be coprime")
    # u = gamma*c1 + delta*c2 with alpha*delta - beta*gamma = 1 gives <u, e1> = -g.
    gamma, delta = -y, x
    u = tuple(gamma * a + delta * b for a, b in zip(c1, c2))
    e2 = tuple(int(-g) * v for v in u)
    e3 = f3

    a_cols = mat(
        [
            [e3[i], e2[i], e1[i], e0[i]]
            for i in range(4)
        ]
    )
    a_cols = rational_matrix(a_cols)
    frame = SymplecticFrame(a_cols)  # validates A^T J A = J

    n_adapted = mat_mul(mat_inv(a_cols), mat_mul(n.entries, a_cols))
    nf = _read_normal_form(n_adapted)
    if nf.b <= 0 or nf.a * nf.a * nf.b <= 0:
        raise ValueError("not a polarizable nilpotent orbit")
    report = check_integrality_polarization(nf)
    if not report.passed:
        raise AssertionError(f"normal form violates integrality: {report.violations}")
    return nf, frame


def _unit(i: int):
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(4))


def _read_normal_form(m) -> NormalForm:
    expected_zero = [
        (0, 0), (0, 1), (0, 2), (0, 3),
        (1, 1), (1, 2), (1, 3),
        (2, 2), (2, 3),
        (3, 3),
    ]
    for i, j in expected_zero:
        if m[i][j] != 0:
            raise AssertionError("adapted matrix is not strictly lower triangular")
    if m[2][0] != m[3][1] or m[3][2] != -m[1][0]:
        raise AssertionError("adapted matrix does not have the symplectic shape")
    return NormalForm(a=m[1][0], b=m[2][1], e=m[2][0], f=m[3][0])


def _coords_in_basis(v, c1, c2):
    """Coordinates of v in the basis (c1, c2) of its plane, exactly."""
    for i in range(4):
        for j in range(i + 1, 4):
            det = Fraction(c1[i]) * c2[j] - Fraction(c1[j]) * c2[i]
            if det != 0:
                alpha = (Fraction(v[i]) * c2[j] - Fraction(v[j]) * c2[i]) / det
                beta = (Fraction(c1[i]) * v[j] - Fraction(c1[j]) * v[i]) / det
                return alpha, beta
    raise AssertionError("degenerate plane basis")


def _intersect_line(c1, c2, w2_basis):
    """Primitive (lam1, lam2) with lam1*c1 + lam2*c2 in span(w2_basis)."""
    # Solve over Q: the combination must be expressible in the w2 basis.
    # Build the 4x4 system [c1 c2 -w1 -w2] * (lam1, lam2, mu1, mu2)^T = 0.
    m = [
        [Fraction(c1[i]), Fraction(c2[i])] + [-Fraction(w[i]) for w in w2_basis]
        for i in range(4)
    ]
    sols = _rational_kernel(m)
    if len(sols) != 1:
        raise AssertionError("complement must meet W2 in exactly a line")
    lam = sols[0][:2]
    return primitive_integer_vector(lam)


def _rational_kernel(m) -> list[tuple]:
    rows = [list(r) for r in m]
    nrows, ncols = len(rows), len(rows[0])
    pivots = {}
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [x / pv for x in rows[rank]]
        for r in range(nrows):
            if r != rank and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rank])]
        pivots[c] = rank
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for c, r in pivots.items():
            v[c] = -rows[r][fc]
        basis.append(tuple(v))
    return basis


def _ext_gcd_pair(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd_pair(b, a % b)
    return g, y, x - (a // b) * y


def act_weight_stabilizer(g: WeightStabilizerElement, nf: NormalForm) -> NormalForm:
    """The weight-stabilizer action on normal forms:

    a' = a, b' = b, e' = e - b p + a q,
    f' = f - 2 e p + b p^2 - a p q + 2 a r.  (s acts trivially.)
    """
    if not g.satisfies_integrality():
        raise ValueError("stabilizer element violates the integrality condition")
    a, b, e, f = nf.a, nf.b, nf.e, nf.f
    p, q, r = g.p, g.q, g.r
    return NormalForm(
        a=a,
        b=b,
        e=e - b * p + a * q,
        f=f - 2 * e * p + b * p * p - a * p * q + 2 * a * r,
    )


@dataclass(frozen=True)
class ResidueClass:
    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __str__(self):
        return f"[{self.residue}] mod {self.modulus}"


@dataclass(frozen=True)
class Invariants:
    b: Fraction
    abs_a: Fraction
    e_class: ResidueClass


def invariants(nf: NormalForm) -> Invariants:
    """The full stabilizer-invariant data: b, |a| and the residue of e.

    With m = gcd(a, b): the class of e in Z/m if a*b is even, the class of
    2e in Z/2m if a*b is odd.  The class is computed in the a > 0 gauge
    (sign-flipping first if needed): the basis sign change that flips a also
    flips e, so only the gauge-fixed residue is a genuine orbit invariant.
    """
    if nf.a.denominator != 1 or nf.b.denominator != 1:
        raise ValueError("non-integral normal form: a, b must be integers")
    if nf.a < 0:
        nf = nf.sign_flip()
    a = int(nf.a)
    b = int(nf.b)
    m = gcd(abs(a), abs(b))
    if a * b % 2 == 0:
        if nf.e.denominator != 1:
            raise ValueError("non-integral normal form: e must be integral when ab is even")
        cls = ResidueClass(int(nf.e), m)
    else:
        two_e = nf.e * 2
        if two_e.denominator != 1:
            raise ValueError("non-integral normal form: 2e must be integral when ab is odd")
        cls = ResidueClass(int(two_e), 2 * m)
    if nf.b <= 0 or nf.a * nf.a * nf.b <= 0:
        raise ValueError("normal form is not polarized")
    return Invariants(b=nf.b, abs_a=abs(nf.a), e_class=cls)


@dataclass(frozen=True)
class IntegralityReport:
    passed: bool
    conditions: tuple
    violations: tuple


def check_integrality_polarization(nf: NormalForm) -> IntegralityReport:
    """Report on the lattice integrality and polarization inequalities."""
    a, b, e, f = nf.a, nf.b, nf.e, nf.f
    checks = [
        ("a is an integer", a.denominator == 1),
        ("b is an integer", b.denominator == 1),
        ("e + ab/2 is an integer", (e + a * b / 2).denominator == 1),
        ("e - ab/2 is an integer", (e - a * b / 2).denominator == 1),
        ("f - a^2 b/6 is an integer", (f - a * a * b / 6).denominator == 1),
        ("a^2 b > 0", a * a * b > 0),
        ("b > 0", b > 0),
    ]
    violations = tuple(name for name, ok in checks if not ok)
    return IntegralityReport(
        passed=not violations,
        conditions=tuple(name for name, _ in checks),
        violations=violations,
    )
