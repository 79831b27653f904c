"""Small exact linear algebra helpers used across the package.

Everything here works on 4x4 (or small) matrices represented as tuples of
tuples.  Exact paths use ``fractions.Fraction``; the same routines accept any
field-like entries (e.g. ``gmpy2.mpc``) for the numeric paths, except where
noted.  Also provides ``KappaPoly``, an exact polynomial in the formal symbol
kappa = zeta(3)/(2*pi*i)^3 used for frame matrices whose entries live in
Q + Q*kappa.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple


def mat(rows) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int = 4, one=Fraction(1)) -> Matrix:
    zero = one * 0
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, m, p = len(a), len(b), len(b[0])
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)) for i in range(n)
    )


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Matrix, c) -> Matrix:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_vec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) for i in range(len(a)))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def mat_inv(a: Matrix) -> Matrix:
    """Gaussian elimination with exact pivoting (first nonzero pivot)."""
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    one = a[0][0] * 0 + 1
    aug = [[one * x for x in row] for row in aug]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pval = aug[col][col]
        aug[col] = [x / pval for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


def mat_pow_nilpotent_exp(n_mat: Matrix, t=Fraction(1)) -> Matrix:
    """exp(t*N) for a 4x4 nilpotent N with N^4 = 0, exactly."""
    acc = identity(len(n_mat), one=n_mat[0][0] * 0 + 1)
    term = identity(len(n_mat), one=n_mat[0][0] * 0 + 1)
    for k in range(1, 4):
        term = mat_scale(mat_mul(term, n_mat), t * Fraction(1, k) if isinstance(t, Fraction) else t / k)
        acc = mat_add(acc, term)
    return acc


def mat_log_unipotent(t_mat: Matrix, nilpotency: int = 4) -> Matrix:
    """log(T) for unipotent T with (T-I)^nilpotency = 0, exactly."""
    n = len(t_mat)
    one = t_mat[0][0] * 0 + 1
    u = mat_sub(t_mat, identity(n, one=one))
    acc = None
    power = identity(n, one=one)
    for k in range(1, nilpotency):
        power = mat_mul(power, u)
        term = mat_scale(power, Fraction((-1) ** (k + 1), k))
        acc = term if acc is None else mat_add(acc, term)
    return acc


def rational_matrix(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# Integer lattice helpers (exact, small sizes)
# ---------------------------------------------------------------------------


def _vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector.

    Sign convention: the first nonzero entry is positive.
    """
    from math import lcm

    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = _vec_gcd(w)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    w = [x // g for x in w]
    lead = next(x for x in w if x != 0)
    if lead < 0:
        w = [-x for x in w]
    return tuple(w)


def integer_kernel_basis(rows) -> list[tuple]:
    """Basis of the saturated integer kernel {x in Z^n : rows @ x = 0}.

    Column-style Hermite reduction on the transpose; the result is a basis of
    the full kernel lattice (saturated by construction).
    """
    rows = [list(map(int, r)) for r in rows]
    m = len(rows)
    n = len(rows[0])
    # Work columns: the matrix column on top, identity tracking block below.
    # Unimodular column ops bring the top block to column echelon form; the
    # bottom blocks of the zeroed columns are then a basis of the kernel.
    cols = []
    for j in range(n):
        cols.append([rows[i][j] for i in range(m)] + [1 if k == j else 0 for k in range(n)])
    col_start = 0
    for i in range(m):
        if col_start >= n:
            break
        while True:
            nz = [j for j in range(col_start, n) if cols[j][i] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(cols[j][i]))
            cols[col_start], cols[piv] = cols[piv], cols[col_start]
            a = cols[col_start][i]
            fully_reduced = True
            for j in range(col_start + 1, n):
                b = cols[j][i]
                if b != 0:
                    q = b // a
                    cols[j] = [x - q * y for x, y in zip(cols[j], cols[col_start])]
                    if cols[j][i] != 0:
                        fully_reduced = False
            if fully_reduced:
                break
        if col_start < n and cols[col_start][i] != 0:
            col_start += 1
    return [tuple(cols[j][m:]) for j in range(n) if all(cols[j][i] == 0 for i in range(m))]


def solve_integer_functional(coeffs: Sequence[int], target: int = 1) -> tuple:
    """Integer x with sum(coeffs[i]*x[i]) = target; requires gcd | target.

    Deterministic: built from the extended gcd chain over the entries.
    """
    coeffs = [int(c) for c in coeffs]
    n = len(coeffs)
    g = 0
    combo = [0] * n
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        if g == 0:
            g = abs(c)
            combo = [0] * n
            combo[i] = 1 if c > 0 else -1
        else:
            old_g, x, y = _ext_gcd(g, abs(c))
            combo = [x * v for v in combo]
            combo[i] += y * (1 if c > 0 else -1)
            g = old_g
    if g == 0 or target % g != 0:
        raise ValueError("functional does not represent the target integer")
    scale = target // g
    return tuple(scale * v for v in combo)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


# ---------------------------------------------------------------------------
# Exact arithmetic in Q[kappa]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KappaPoly:
    """Polynomial in the formal constant kappa with Fraction coefficients.

    Used for exact frame matrices whose entries are expected to stay in
    Q + Q*kappa; products track higher powers so the expectation can be
    asserted rather than assumed.
    """

    coeffs: tuple  # coeffs[k] multiplies kappa^k; normalized, no trailing zeros

    @staticmethod
    def make(*coeffs) -> "KappaPoly":
        c = [Fraction(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return KappaPoly(tuple(c))

    @staticmethod
    def const(x) -> "KappaPoly":
        return KappaPoly.make(Fraction(x))

    @staticmethod
    def kappa_times(q) -> "KappaPoly":
        return KappaPoly.make(0, Fraction(q))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def coefficient(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def is_rational(self) -> bool:
        return self.degree <= 0

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("entry is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def as_linear(self) -> tuple[Fraction, Fraction]:
        if self.degree > 1:
            raise ValueError("entry does not lie in Q + Q*kappa")
        return self.coefficient(0), self.coefficient(1)

    def __add__(self, other):
        other = other if isinstance(other, KappaPoly) else KappaPoly.const(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return KappaPoly.make(
            *[self.coefficient(k) + other.coefficient(k) for k in range(n)]
        )

    __radd__ = __add__

    def __neg__(self):
        return KappaPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = other if isinstance(other, KappaPoly) else KappaPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = other if isinstance(other, KappaPoly) else KappaPoly.const(other)
        if not self.coeffs or not other.coeffs:
            return KappaPoly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return KappaPoly.make(*out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, KappaPoly):
            if not other.is_rational():
                raise ValueError("can only divide by rational KappaPoly entries")
            other = other.as_rational()
        return self * KappaPoly.const(Fraction(1) / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, KappaPoly):
            return self.coeffs == other.coeffs
        return self.degree <= 0 and self.coefficient(0) == other

    def __hash__(self):
        return hash(self.coeffs)

    def evaluate(self, kappa_value):
        """Numeric value given a numeric kappa (e.g. a BigComplex)."""
        acc = kappa_value * 0
        for c in reversed(self.coeffs):
            acc = acc * kappa_value + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(str(c) if k == 0 else (f"{c}*kappa" if k == 1 else f"{c}*kappa^{k}"))
        return " + ".join(parts) if parts else "0"


def kappa_matrix(rows) -> Matrix:
    out = []
    for row in rows:
        out.append(tuple(x if isinstance(x, KappaPoly) else KappaPoly.const(x) for x in row))
    return tuple(out)


def kappa_matrix_degree(a: Matrix) -> int:
    return max(x.degree for row in a for x in row)


def kappa_matrix_to_rational(a: Matrix) -> Matrix:
    return tuple(tuple(x.as_rational() for x in row) for row in a)
