"""Dense univariate helpers over Q: division, gcd, rational roots.

Coefficient lists are little-endian (index = power) with no trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

from ..errors import InputError
from .polynomial import Polynomial


def to_coeffs(p: Polynomial, name: str) -> list[Fraction]:
    free = p.free_variables()
    if any(v != name for v in free):
        raise InputError(f"expected a polynomial in {name!r} only, got variables {free}")
    if p.is_zero():
        return []
    k = p.index(name) if name in p.variables else None
    out = [Fraction(0)] * (p.degree(name) + 1 if k is not None else 1)
    for e, c in p.terms.items():
        out[e[k] if k is not None else 0] += c
    return _trim(out)


def from_coeffs(coeffs: list[Fraction], name: str) -> Polynomial:
    return Polynomial((name,), {(k,): c for k, c in enumerate(coeffs) if c})


def _trim(c: list[Fraction]) -> list[Fraction]:
    while c and not c[-1]:
        c.pop()
    return c


def poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    if len(a) < len(b):
        return [], _trim(a)
    quo = [Fraction(0)] * (len(a) - len(b) + 1)
    lead = b[-1]
    for shift in range(len(a) - len(b), -1, -1):
        coeff = a[shift + len(b) - 1] / lead
        quo[shift] = coeff
        if coeff:
            for k, bk in enumerate(b):
                a[shift + k] -= coeff * bk
    return _trim(quo), _trim(a[: len(b) - 1])


def coeffs_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    return [c / a[-1] for c in a]


def univariate_gcd(p: Polynomial, q: Polynomial, name: str) -> Polynomial:
    return from_coeffs(coeffs_gcd(to_coeffs(p, name), to_coeffs(q, name)), name)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _evaluate(c: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def rational_roots(coeffs: list[Fraction]) -> tuple[dict[Fraction, int], list[Fraction]]:
    """Rational roots with multiplicity, and the root-free cofactor.

    Uses the rational root theorem on the integer-scaled polynomial.
    """
    c = _trim(list(coeffs))
    if not c:
        raise InputError("the zero polynomial has no well-defined roots")
    roots: dict[Fraction, int] = {}
    while len(c) > 1 and not c[0]:
        c = c[1:]
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    changed = True
    while changed and len(c) > 1:
        changed = False
        den_lcm = 1
        for x in c:
            den_lcm = den_lcm * x.denominator // gcd(den_lcm, x.denominator)
        ints = [int(x * den_lcm) for x in c]
        for p in _divisors(ints[0]):
            for q in _divisors(ints[-1]):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if not _evaluate(c, cand):
                        quo, rem = poly_divmod(c, [-cand, Fraction(1)])
                        assert not rem
                        c = quo
                        roots[cand] = roots.get(cand, 0) + 1
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return roots, c
