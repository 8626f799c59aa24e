"""Quotients of polynomials, kept unreduced."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from ..errors import InputError
from .polynomial import Polynomial, as_fraction, format_polynomial


def _as_poly(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(as_fraction(value))


class RationalFunction:
    """``numerator / denominator`` with a nonzero polynomial denominator.

    No gcd cancellation happens on construction or arithmetic; equality is
    decided by cross-multiplication.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=1):
        num, den = _as_poly(numerator), _as_poly(denominator)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        num, den = num._coerce(den)
        self.numerator = num
        self.denominator = den

    @property
    def variables(self) -> tuple[str, ...]:
        return self.numerator.variables

    def free_variables(self) -> tuple[str, ...]:
        used = set(self.numerator.free_variables()) | set(self.denominator.free_variables())
        return tuple(v for v in self.variables if v in used)

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator.is_constant()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    __hash__ = None

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def _lift(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.numerator * other.denominator, self.denominator * other.numerator)

    def __rtruediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RationalFunction":
        if not isinstance(n, int):
            raise InputError(f"exponent must be an integer, got {n!r}")
        if n >= 0:
            return RationalFunction(self.numerator**n, self.denominator**n)
        if self.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFunction(self.denominator ** (-n), self.numerator ** (-n))

    def substitute(self, bindings: Mapping[str, object], retain=True) -> "RationalFunction":
        """Substitute polynomials, scalars or rational functions for variables."""
        if all(not isinstance(b, RationalFunction) for b in bindings.values()):
            num = self.numerator.substitute(bindings, retain)
            den = self.denominator.substitute(bindings, retain)
            return RationalFunction(num, den)
        return substitute_rational(self.numerator, bindings) / substitute_rational(
            self.denominator, bindings
        )

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        den = self.denominator.evaluate(values)
        if not den:
            raise ZeroDivisionError(f"denominator vanishes at {dict(values)}")
        return self.numerator.evaluate(values) / den

    def cancel_monomial(self) -> "RationalFunction":
        """Divide numerator and denominator by their common monomial factor."""
        if self.numerator.is_zero():
            return RationalFunction(0, 1)
        ring = self.variables
        common = []
        for k in range(len(ring)):
            common.append(
                min(
                    min(e[k] for e in self.numerator.terms),
                    min(e[k] for e in self.denominator.terms),
                )
            )
        if not any(common):
            return self

        def shift(p: Polynomial) -> Polynomial:
            return Polynomial._raw(
                ring, {tuple(x - y for x, y in zip(e, common)): c for e, c in p.terms.items()}
            )

        return RationalFunction(shift(self.numerator), shift(self.denominator))

    def normalized(self) -> "RationalFunction":
        """Presentation for output: common monomials and, for univariate
        functions, the polynomial gcd cancelled; denominator made monic."""
        from .univariate import univariate_gcd

        rf = self.cancel_monomial()
        free = rf.free_variables()
        if len(free) == 1:
            g = univariate_gcd(rf.numerator, rf.denominator, free[0])
            if g.total_degree() > 0:
                rf = RationalFunction(
                    exact_divide(rf.numerator, g, free[0]), exact_divide(rf.denominator, g, free[0])
                )
        lead = rf.denominator.sorted_terms()[0][1]
        if lead != 1:
            rf = RationalFunction(rf.numerator * (1 / lead), rf.denominator * (1 / lead))
        return RationalFunction(rf.numerator.drop_unused(), rf.denominator.drop_unused())

    def __str__(self) -> str:
        rf = self
        if rf.denominator.is_constant():
            return format_polynomial(rf.numerator * (1 / rf.denominator.constant_term()))
        num, den = format_polynomial(rf.numerator), format_polynomial(rf.denominator)
        if " " in num:
            num = f"({num})"
        if " " in den or "*" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RationalFunction({str(self)!r})"


def exact_divide(p: Polynomial, q: Polynomial, name: str) -> Polynomial:
    from .univariate import from_coeffs, to_coeffs, poly_divmod

    quo, rem = poly_divmod(to_coeffs(p, name), to_coeffs(q, name))
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return from_coeffs(quo, name)


def substitute_rational(p: Polynomial, bindings: Mapping[str, object]) -> RationalFunction:
    """Substitute rational functions into a polynomial (unbound variables kept)."""
    images = {}
    for v in p.variables:
        if v in bindings:
            b = bindings[v]
            images[v] = b if isinstance(b, RationalFunction) else RationalFunction(b)
        else:
            images[v] = RationalFunction(Polynomial.variable(v))
    total = RationalFunction(0)
    for exps, c in p.terms.items():
        term = RationalFunction(Polynomial.constant(c))
        for v, k in zip(p.variables, exps):
            if k:
                term = term * images[v] ** k
        total = total + term
    return total


def as_rational_function(value) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    return RationalFunction(value)
