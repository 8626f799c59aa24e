"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

from ..errors import InputError

Scalar = Union[int, Fraction]

_RATIONAL = re.compile(r"[-+]?\d+(/\d+)?")


def as_fraction(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused so that binary rounding never leaks into exact data.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL.fullmatch(value.strip()):
            raise InputError(f"not a rational literal of the form p/q: {value!r}")
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not an exact rational: {value!r}")


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def merge_variables(*rings: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    seen: set[str] = set()
    for ring in rings:
        for name in ring:
            if name not in seen:
                seen.add(name)
                out.append(name)
    return tuple(out)


_NATURAL = re.compile(r"(\d+)")


def natural_key(name: str):
    """Sort key under which ``x2 < x10``."""
    return [int(part) if part.isdigit() else part for part in _NATURAL.split(name)]


class Polynomial:
    """Polynomial over Q in an ordered list of named variables.

    ``terms`` maps exponent tuples (one entry per variable) to nonzero
    Fractions. Instances are treated as immutable. Equality is semantic:
    two polynomials are equal when they agree after discarding variables
    that do not occur, regardless of variable order.
    """

    __slots__ = ("variables", "terms", "_index")

    def __init__(self, variables: Iterable[str] = (), terms: Mapping | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise InputError(f"duplicate variables in {variables}")
        n = len(variables)
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise InputError(f"bad exponent vector {exps} for variables {variables}")
            coeff = as_fraction(coeff)
            if coeff:
                clean[exps] = clean.get(exps, 0) + coeff
                if not clean[exps]:
                    del clean[exps]
        self.variables = variables
        self.terms = clean
        self._index = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._index = None
        return obj

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, value, variables: Iterable[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        value = as_fraction(value)
        terms = {(0,) * len(variables): value} if value else {}
        return cls._raw(variables, terms)

    @classmethod
    def variable(cls, name: str, variables: Iterable[str] | None = None) -> "Polynomial":
        variables = (name,) if variables is None else tuple(variables)
        if name not in variables:
            raise InputError(f"{name!r} not among {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, powers: Mapping[str, int], coeff=1, variables: Iterable[str] | None = None):
        variables = tuple(powers) if variables is None else tuple(variables)
        exps = tuple(int(powers.get(v, 0)) for v in variables)
        return cls(variables, {exps: coeff})

    # -- ring bookkeeping -----------------------------------------------

    def index(self, name: str) -> int:
        if self._index is None:
            self._index = {v: k for k, v in enumerate(self.variables)}
        return self._index[name]

    def free_variables(self) -> tuple[str, ...]:
        """Variables that actually occur, in ring order."""
        used = [False] * len(self.variables)
        for exps in self.terms:
            for k, e in enumerate(exps):
                if e:
                    used[k] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def with_variables(self, variables: Iterable[str]) -> "Polynomial":
        """Re-embed into another variable list containing every occurring variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: k for k, v in enumerate(variables)}
        for v in self.free_variables():
            if v not in pos:
                raise InputError(f"variable {v!r} missing from target ring {variables}")
        perm = [(pos[v], k) for k, v in enumerate(self.variables) if v in pos]
        n = len(variables)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for dst, src in perm:
                new[dst] = exps[src]
            terms[tuple(new)] = c
        return Polynomial._raw(variables, terms)

    def _coerce(self, other) -> tuple["Polynomial", "Polynomial"]:
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(other, self.variables)
        if other.variables == self.variables:
            return self, other
        ring = merge_variables(self.variables, other.variables)
        return self.with_variables(ring), other.with_variables(ring)

    # -- predicates and accessors ----------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, name: str) -> int:
        if name not in self.variables:
            return 0 if self.terms else -1
        k = self.index(name)
        return max((e[k] for e in self.terms), default=-1)

    def min_degree(self, name: str) -> int:
        if name not in self.variables:
            return 0
        k = self.index(name)
        return min((e[k] for e in self.terms), default=0)

    def monomials(self) -> list[tuple[dict[str, int], Fraction]]:
        return [
            ({v: e for v, e in zip(self.variables, exps) if e}, c)
            for exps, c in self.sorted_terms()
        ]

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    def _canonical(self) -> dict:
        out = {}
        for exps, c in self.terms.items():
            key = tuple(sorted((v, e) for v, e in zip(self.variables, exps) if e))
            out[key] = c
        return out

    # -- arithmetic -----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        if other.variables == self.variables:
            return self.terms == other.terms
        return self._canonical() == other._canonical()

    def __hash__(self) -> int:
        return hash(frozenset(self._canonical().items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return Polynomial._raw(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            if not other:
                return Polynomial._raw(self.variables, {})
            return Polynomial._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = self._coerce(other)
        terms: dict = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                e = tuple(x + y for x, y in zip(ea, eb))
                s = terms.get(e, 0) + ca * cb
                if s:
                    terms[e] = s
                else:
                    terms.pop(e, None)
        return Polynomial._raw(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if not isinstance(n, int) or n < 0:
            raise InputError(f"polynomial exponent must be a nonnegative integer, got {n!r}")
        result = Polynomial.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        return self * as_fraction(c)

    # -- calculus and substitution ---------------------------------------

    def diff(self, name: str) -> "Polynomial":
        if name not in self.variables:
            return Polynomial._raw(self.variables, {})
        k = self.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[k]:
                new = list(e)
                new[k] -= 1
                terms[tuple(new)] = c * e[k]
        return Polynomial._raw(self.variables, terms)

    def collect(self, name: str) -> dict[int, "Polynomial"]:
        """Split by powers of ``name``; coefficients keep the ring with that exponent zeroed."""
        if name not in self.variables:
            return {0: self} if self.terms else {}
        k = self.index(name)
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            d = e[k]
            rest = e[:k] + (0,) + e[k + 1 :]
            parts.setdefault(d, {})[rest] = c
        return {d: Polynomial._raw(self.variables, t) for d, t in parts.items()}

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Evaluate at a full assignment of the occurring variables."""
        missing = [v for v in self.free_variables() if v not in values]
        if missing:
            raise InputError(f"no value for {missing}")
        total = Fraction(0)
        vals = [as_fraction(values[v]) if v in values else Fraction(0) for v in self.variables]
        for e, c in self.terms.items():
            term = c
            for x, k in zip(vals, e):
                if k:
                    term *= x**k
            total += term
        return total

    def substitute(self, bindings: Mapping[str, object], retain=()) -> "Polynomial":
        """Simultaneous substitution of variables by polynomials or scalars.

        Every occurring variable must be bound or listed in ``retain``;
        ``retain=True`` keeps all unbound variables.
        """
        images: dict[str, Polynomial] = {}
        for name, img in bindings.items():
            images[name] = img if isinstance(img, Polynomial) else Polynomial.constant(img)
        unbound = [v for v in self.free_variables() if v not in images]
        if unbound and retain is not True:
            kept = set(retain)
            bad = [v for v in unbound if v not in kept]
            if bad:
                raise InputError(f"unbound variables {bad} in substitution")
        for v in unbound:
            images[v] = Polynomial.variable(v)
        needed = [v for v in self.variables if v in images]
        ring = merge_variables(*(images[v].variables for v in needed))
        images = {v: images[v].with_variables(ring) for v in needed}
        one = Polynomial.constant(1, ring)
        powers: dict[tuple[str, int], Polynomial] = {}

        def power(v: str, k: int) -> Polynomial:
            key = (v, k)
            if key not in powers:
                powers[key] = images[v] if k == 1 else power(v, k - 1) * images[v]
            return powers[key]

        result: dict = {}
        for e, c in self.terms.items():
            term = one
            for v, k in zip(self.variables, e):
                if k:
                    term = term * power(v, k)
            for te, tc in term.terms.items():
                s = result.get(te, 0) + c * tc
                if s:
                    result[te] = s
                else:
                    result.pop(te, None)
        return Polynomial._raw(ring, result)

    def drop_unused(self) -> "Polynomial":
        return self.with_variables(self.free_variables())

    def truncate(self, name: str, order: int) -> "Polynomial":
        """Drop every term whose ``name``-degree is at least ``order``."""
        if name not in self.variables:
            return self if order > 0 else Polynomial._raw(self.variables, {})
        k = self.index(name)
        return Polynomial._raw(self.variables, {e: c for e, c in self.terms.items() if e[k] < order})

    # -- printing -------------------------------------------------------

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def _format_monomial(variables, exps) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(p: Polynomial) -> str:
    """Canonical text form: graded-lex descending terms, ``p/q`` coefficients.

    The output is accepted by the expression parser and reparses to ``p``.
    """
    if not p.terms:
        return "0"
    chunks: list[str] = []
    for exps, c in p.sorted_terms():
        mono = _format_monomial(p.variables, exps)
        mag = abs(c)
        if not mono:
            body = format_fraction(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_fraction(mag)}*{mono}"
        if not chunks:
            chunks.append(f"-{body}" if c < 0 else body)
        else:
            chunks.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(chunks)


def symbols(*names: str) -> tuple[Polynomial, ...]:
    """Generators of the polynomial ring on ``names``."""
    return tuple(Polynomial.variable(n, names) for n in names)
