"""Buchberger completion and ideal membership over Q.

Polynomials are handled as ``{exponent tuple: Fraction}`` dicts over one
fixed variable list for the duration of a computation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import InputError
from .polynomial import Polynomial, merge_variables

Monomial = tuple[int, ...]
Terms = dict[Monomial, Fraction]


def _lex(e: Monomial):
    return e


def _grlex(e: Monomial):
    return (sum(e), e)


def _grevlex(e: Monomial):
    return (sum(e), tuple(-x for x in reversed(e)))


ORDERS: dict[str, Callable[[Monomial], object]] = {
    "lex": _lex,
    "grlex": _grlex,
    "grevlex": _grevlex,
}


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class _Ring:
    def __init__(self, variables: Sequence[str], order: str):
        if order not in ORDERS:
            raise InputError(f"unknown monomial order {order!r}")
        self.variables = tuple(variables)
        self.key = ORDERS[order]

    def lead(self, f: Terms) -> Monomial:
        return max(f, key=self.key)

    def reduce(self, f: Terms, basis: list[tuple[Monomial, Terms]]) -> Terms:
        """Full normal form of ``f`` modulo a list of (lead monomial, monic poly)."""
        f = dict(f)
        rem: Terms = {}
        key = self.key
        while f:
            m = max(f, key=key)
            c = f[m]
            for lm, g in basis:
                if _divides(lm, m):
                    q = tuple(x - y for x, y in zip(m, lm))
                    for ge, gc in g.items():
                        e = tuple(x + y for x, y in zip(ge, q))
                        s = f.get(e, 0) - c * gc
                        if s:
                            f[e] = s
                        else:
                            f.pop(e, None)
                    break
            else:
                rem[m] = c
                del f[m]
        return rem

    def monic(self, f: Terms) -> tuple[Monomial, Terms]:
        lm = self.lead(f)
        inv = 1 / f[lm]
        return lm, {e: c * inv for e, c in f.items()}

    def spoly(self, a: tuple[Monomial, Terms], b: tuple[Monomial, Terms]) -> Terms:
        (la, fa), (lb, fb) = a, b
        l = _lcm(la, lb)
        qa = tuple(x - y for x, y in zip(l, la))
        qb = tuple(x - y for x, y in zip(l, lb))
        out: Terms = {}
        for e, c in fa.items():
            out[tuple(x + y for x, y in zip(e, qa))] = c
        for e, c in fb.items():
            k = tuple(x + y for x, y in zip(e, qb))
            s = out.get(k, 0) - c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return out


def _terms(p: Polynomial, variables: tuple[str, ...]) -> Terms:
    return dict(p.with_variables(variables).terms)


class GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``."""

    def __init__(
        self,
        generators: Iterable[Polynomial],
        variables: Sequence[str] | None = None,
        order: str = "grevlex",
    ):
        gens = [g for g in generators if not g.is_zero()]
        if variables is None:
            variables = merge_variables(*(g.free_variables() for g in gens))
        self.variables = tuple(variables)
        self.order = order
        self._ring = _Ring(self.variables, order)
        self._basis = self._complete([_terms(g, self.variables) for g in gens])

    def _complete(self, polys: list[Terms]) -> list[tuple[Monomial, Terms]]:
        ring = self._ring
        basis: list[tuple[Monomial, Terms]] = []
        for f in polys:
            r = ring.reduce(f, basis)
            if r:
                basis.append(ring.monic(r))
        pairs = {(i, j) for j in range(len(basis)) for i in range(j)}
        while pairs:
            i, j = min(pairs, key=lambda p: (ring.key(_lcm(basis[p[0]][0], basis[p[1]][0])), p))
            pairs.discard((i, j))
            li, lj = basis[i][0], basis[j][0]
            lij = _lcm(li, lj)
            if all(not (x and y) for x, y in zip(li, lj)):
                continue
            if any(
                k not in (i, j)
                and _divides(basis[k][0], lij)
                and (min(i, k), max(i, k)) not in pairs
                and (min(j, k), max(j, k)) not in pairs
                for k in range(len(basis))
            ):
                continue
            r = ring.reduce(ring.spoly(basis[i], basis[j]), basis)
            if r:
                basis.append(ring.monic(r))
                n = len(basis) - 1
                pairs |= {(k, n) for k in range(n)}
        return self._interreduce(basis)

    def _interreduce(self, basis: list[tuple[Monomial, Terms]]) -> list[tuple[Monomial, Terms]]:
        ring = self._ring
        minimal = []
        for k, (lm, f) in enumerate(basis):
            if any(
                _divides(other, lm) and (other != lm or j < k)
                for j, (other, _) in enumerate(basis)
                if j != k
            ):
                continue
            minimal.append((lm, f))
        reduced = []
        for k, (lm, f) in enumerate(minimal):
            others = minimal[:k] + minimal[k + 1 :]
            tail = {e: c for e, c in f.items() if e != lm}
            r = ring.reduce(tail, others)
            r[lm] = Fraction(1)
            reduced.append((lm, r))
        reduced.sort(key=lambda item: ring.key(item[0]))
        return reduced

    @property
    def polynomials(self) -> list[Polynomial]:
        return [Polynomial._raw(self.variables, dict(f)) for _, f in self._basis]

    def is_unit_ideal(self) -> bool:
        return any(not any(lm) for lm, _ in self._basis)

    def normal_form(self, f: Polynomial) -> Polynomial:
        extra = [v for v in f.free_variables() if v not in self.variables]
        if extra:
            # a variable outside the ring is free modulo the ideal
            ring = self.variables + tuple(extra)
            nf = _Ring(ring, self.order).reduce(
                _terms(f, ring), [(lm + (0,) * len(extra), {e + (0,) * len(extra): c for e, c in g.items()}) for lm, g in self._basis]
            )
            return Polynomial._raw(ring, nf)
        return Polynomial._raw(self.variables, self._ring.reduce(_terms(f, self.variables), self._basis))

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def __len__(self) -> int:
        return len(self._basis)


def ideal_contains(generators: Iterable[Polynomial], f: Polynomial, order: str = "grevlex") -> bool:
    gens = list(generators)
    variables = merge_variables(*(g.free_variables() for g in gens), f.free_variables())
    return GroebnerBasis(gens, variables, order).contains(f)


def exact_quotient(g: Polynomial, f: Polynomial, order: str = "grevlex") -> Polynomial:
    """g / f when f divides g; InputError otherwise."""
    ring = merge_variables(g.variables, f.variables)
    r = _Ring(ring, order)
    rem, div = _terms(g, ring), _terms(f, ring)
    if not div:
        raise ZeroDivisionError("division by the zero polynomial")
    lf = r.lead(div)
    quotient: Terms = {}
    while rem:
        lg = r.lead(rem)
        if not _divides(lf, lg):
            raise InputError("polynomial division is not exact")
        q = tuple(x - y for x, y in zip(lg, lf))
        c = rem[lg] / div[lf]
        quotient[q] = c
        for e, d in div.items():
            k = tuple(x + y for x, y in zip(e, q))
            s = rem.get(k, 0) - c * d
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return Polynomial._raw(ring, quotient)


def intersect_ideals(a: Iterable[Polynomial], b: Iterable[Polynomial], variables: Sequence[str]) -> list[Polynomial]:
    """Generators of (a) meet (b), by eliminating an auxiliary variable."""
    ring = tuple(variables)
    aux = "_s"
    while aux in ring:
        aux += "_"
    big = (aux,) + ring
    s = Polynomial.variable(aux, big)
    gens = [s * g for g in a] + [(1 - s) * h for h in b]
    basis = GroebnerBasis(gens, big, "lex")
    return [p.with_variables(ring) for p in basis.polynomials if not p.degree(aux)]


def ideal_quotient(generators: Iterable[Polynomial], f: Polynomial, variables: Sequence[str]) -> list[Polynomial]:
    """Generators of (I : f) for f nonzero."""
    if f.is_zero():
        raise InputError("quotient by the zero polynomial")
    ring = tuple(variables)
    return [exact_quotient(g, f).with_variables(ring) for g in intersect_ideals(generators, [f], ring)]
