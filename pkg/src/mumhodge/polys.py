"""Dense univariate polynomials over Fraction, as plain tuples.

Coefficient index = power; trailing zeros are stripped by :func:`poly`.
The zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb


def poly(coeffs) -> tuple:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(p) -> int:
    return len(p) - 1


def poly_add(p, q) -> tuple:
    n = max(len(p), len(q))
    return poly([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def poly_scale(p, c) -> tuple:
    return poly([Fraction(c) * x for x in p])


def poly_mul(p, q) -> tuple:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return poly(out)


def poly_eval(p, x):
    acc = x * 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_derivative(p) -> tuple:
    return poly([i * p[i] for i in range(1, len(p))])


def poly_compose_linear(p, a, b) -> tuple:
    """p(a*x + b) via Horner over polynomial arithmetic."""
    a, b = Fraction(a), Fraction(b)
    acc: tuple = ()
    lin = poly([b, a])
    for c in reversed(p):
        acc = poly_add(poly_mul(acc, lin), poly([c]))
    return acc


def poly_divmod(p, q) -> tuple[tuple, tuple]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    dq = degree(q)
    lead = q[-1]
    for k in range(len(rem) - 1, dq - 1, -1):
        if rem[k] == 0:
            continue
        c = rem[k] / lead
        quo[k - dq] = c
        for j in range(len(q)):
            rem[k - dq + j] -= c * q[j]
    return poly(quo), poly(rem)


def poly_gcd(p, q) -> tuple:
    a, b = poly(p), poly(q)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if a:
        a = poly_scale(a, Fraction(1) / a[-1])
    return a


ZERO_POLY_ORDER = 10**9  # stand-in for infinite vanishing order


def order_at(p, z0) -> int:
    """Vanishing order of p at the rational point z0 (sentinel if p = 0)."""
    if not poly(p):
        return ZERO_POLY_ORDER
    z0 = Fraction(z0)
    cur = poly(p)
    k = 0
    while cur and poly_eval(cur, z0) == 0:
        cur, rem = poly_divmod(cur, poly([-z0, 1]))
        assert not rem
        k += 1
    return k


def rational_roots_with_multiplicity(p) -> tuple[list[tuple[Fraction, int]], tuple]:
    """All rational roots with multiplicities, plus the rootless cofactor.

    Candidates come from the rational root theorem on the primitive integer
    form of p.
    """
    p = poly(p)
    if degree(p) < 1:
        return [], p
    from math import lcm

    def divisors(n):
        n = abs(n)
        out = set()
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.add(d)
                out.add(n // d)
            d += 1
        return sorted(out)

    # Factor out powers of z first.
    roots: list[tuple[Fraction, int]] = []
    cur = p
    k0 = order_at(cur, 0)
    if k0:
        roots.append((Fraction(0), k0))
        for _ in range(k0):
            cur = poly_divmod(cur, poly([0, 1]))[0]
    if degree(cur) >= 1:
        den2 = 1
        for c in cur:
            den2 = lcm(den2, c.denominator)
        ic = [int(c * den2) for c in cur]
        const_divs = divisors(ic[0]) if ic[0] != 0 else [1]
        lead_divs = divisors(ic[-1])
        candidates = set()
        for a in const_divs:
            for b in lead_divs:
                candidates.add(Fraction(a, b))
                candidates.add(Fraction(-a, b))
        for r in sorted(candidates):
            while degree(cur) >= 1 and poly_eval(cur, r) == 0:
                mult = 0
                while poly_eval(cur, r) == 0:
                    cur = poly_divmod(cur, poly([-r, 1]))[0]
                    mult += 1
                roots.append((r, mult))
                break
    roots.sort(key=lambda t: (t[0],))
    return roots, cur


def falling_factorial_poly(k: int) -> tuple:
    """rho*(rho-1)*...*(rho-k+1) as a polynomial in rho."""
    acc = poly([1])
    for j in range(k):
        acc = poly_mul(acc, poly([-j, 1]))
    return acc


def is_fourfold_root(p) -> tuple[bool, Fraction | None]:
    """Whether a degree-4 polynomial equals c*(rho - r)^4; returns (flag, r)."""
    p = poly(p)
    if degree(p) != 4:
        return False, None
    c = p[4]
    r = -p[3] / (4 * c)
    expanded = poly_scale(poly([comb(4, j) * (-r) ** (4 - j) for j in range(5)]), c)
    if expanded == p:
        return True, r
    return False, None
