"""Independent brute-force oracle for closed-foam values.

This is a from-scratch transcription of the colored evaluation formula for
the simplest hand-built complexes (a 1-sphere with dots), using its own
dense polynomial arithmetic over ``fractions.Fraction``.  It shares no code
with the package and exists so that worked values in the test suite are
pinned by two fully independent computations.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

Poly = dict[tuple[int, ...], Fraction]  # exponent vector over X1..XN -> coeff


def _clean(p: Poly) -> Poly:
    return {e: c for e, c in p.items() if c != 0}


def p_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return _clean(out)


def p_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            out[e] = out.get(e, Fraction(0)) + c1 * c2
    return _clean(out)


def p_scale(a: Poly, c) -> Poly:
    return _clean({e: v * Fraction(c) for e, v in a.items()})


def x_power(N: int, i: int, k: int) -> Poly:
    """The monomial X_i**k in N variables (i is 1-based)."""
    e = [0] * N
    e[i - 1] = k
    return {tuple(e): Fraction(1)}


def p_div_exact(a: Poly, b: Poly) -> Poly:
    """Exact division by repeated leading-term elimination."""
    if not a:
        return {}
    rem = dict(a)
    quo: Poly = {}
    bl = max(b)  # plain lexicographic leading term is enough here
    while rem:
        al = max(rem)
        e = tuple(x - y for x, y in zip(al, bl))
        if any(x < 0 for x in e):
            raise ArithmeticError("division not exact")
        c = rem[al] / b[bl]
        quo[e] = quo.get(e, Fraction(0)) + c
        rem = p_add(rem, p_mul({e: -c}, b))
    return _clean(quo)


def sphere_value(k: int, N: int) -> Poly:
    """Value of a thin 1-sphere carrying ``k`` dots, with ``N`` pigments.

    The sphere has one facet of thickness one and no seams.  A coloring
    picks the facet pigment i; the sign exponent is i times half the Euler
    characteristic of the pigment-i surface (the full sphere), and each
    other pigment j contributes a factor (X_i - X_j) downstairs with
    exponent half the Euler characteristic of the bichrome sphere.
    """
    # Sum the colorings over the common denominator prod_{a<b}(X_a - X_b):
    # the coloring-i denominator is the product of the ordered difference
    # factors involving pigment i, so the common denominator divided by it
    # is the product of the factors avoiding pigment i.
    def diff(a: int, b: int) -> Poly:
        return p_add(x_power(N, a, 1), p_scale(x_power(N, b, 1), -1))

    common: Poly = {(0,) * N: Fraction(1)}
    for a in range(1, N + 1):
        for b in range(a + 1, N + 1):
            common = p_mul(common, diff(a, b))
    numerator: Poly = {}
    for i in range(1, N + 1):
        sign = (-1) ** i  # i * chi(sphere) / 2 == i
        cofactor: Poly = {(0,) * N: Fraction(1)}
        for a in range(1, N + 1):
            for b in range(a + 1, N + 1):
                if a != i and b != i:
                    cofactor = p_mul(cofactor, diff(a, b))
        # the bichrome factors (X_a - X_b) are taken with a < b; converting
        # them to the coloring-centered product cancels the reordering sign
        term = p_scale(p_mul(x_power(N, i, k), cofactor), sign)
        numerator = p_add(numerator, term)
    return p_div_exact(numerator, common)


def sphere_gram(N: int, dots: list[int]) -> list[list[Poly]]:
    """Pairing matrix of dotted thin cups: entry (i, j) is a dotted sphere."""
    return [[sphere_value(a + b, N) for b in dots] for a in dots]


def elementary_poly(N: int, k: int) -> Poly:
    """Elementary symmetric polynomial of degree k in X1..XN."""
    out: Poly = {}
    for picks in product(*[range(2)] * N):
        if sum(picks) == k:
            out[tuple(picks)] = Fraction(1)
    return out
