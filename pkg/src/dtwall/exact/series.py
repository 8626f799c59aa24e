"""Laurent expansion of rational functions and residue extraction.

Expansion at ``v = c`` shifts ``v -> v + c``, factors the largest power
``v^m`` out of the denominator and inverts the cofactor as a power series
(its constant term is nonzero by construction), so no factorization is
ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import InputError, UnsupportedInputError
from .polynomial import Polynomial, as_fraction, format_fraction
from .ratfunc import RationalFunction, as_rational_function
from .univariate import coeffs_gcd, poly_divmod, rational_roots, to_coeffs


def _is_zero(c) -> bool:
    if isinstance(c, RationalFunction):
        return c.is_zero()
    return not c


def _simplify_coeff(c):
    """Fraction when no variable survives, otherwise a RationalFunction."""
    if isinstance(c, RationalFunction):
        c = c.cancel_monomial()
        if not c.free_variables():
            return c.numerator.constant_term() / c.denominator.constant_term()
        return c
    if isinstance(c, Polynomial):
        if not c.free_variables():
            return c.constant_term()
        return RationalFunction(c)
    return Fraction(c)


@dataclass(frozen=True)
class LaurentSeries:
    """``sum_k coefficients[k] * v^(min_degree + k)  +  O(v^truncation_order)``.

    ``truncation_order=None`` marks an exact Laurent polynomial. Coefficients
    are Fractions, or RationalFunctions in the remaining variables.
    """

    variable: str
    min_degree: int
    coefficients: tuple
    truncation_order: int | None = None

    def __post_init__(self):
        coeffs = list(self.coefficients)
        low = self.min_degree
        while coeffs and _is_zero(coeffs[0]):
            coeffs.pop(0)
            low += 1
        if self.truncation_order is None:
            while coeffs and _is_zero(coeffs[-1]):
                coeffs.pop()
        else:
            coeffs = coeffs[: max(0, self.truncation_order - low)]
        if not coeffs:
            low = self.truncation_order if self.truncation_order is not None else 0
        object.__setattr__(self, "coefficients", tuple(coeffs))
        object.__setattr__(self, "min_degree", low)

    @property
    def exact(self) -> bool:
        return self.truncation_order is None

    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def max_degree(self) -> int | None:
        """Highest degree with a nonzero known coefficient (None if none)."""
        for k in range(len(self.coefficients) - 1, -1, -1):
            if not _is_zero(self.coefficients[k]):
                return self.min_degree + k
        return None

    def coefficient(self, k: int):
        if self.truncation_order is not None and k >= self.truncation_order:
            raise InputError(
                f"coefficient of {self.variable}^{k} lies beyond truncation O({self.variable}^{self.truncation_order})"
            )
        idx = k - self.min_degree
        if 0 <= idx < len(self.coefficients):
            return self.coefficients[idx]
        return Fraction(0)

    def terms(self) -> list[tuple[int, object]]:
        return [
            (self.min_degree + k, c) for k, c in enumerate(self.coefficients) if not _is_zero(c)
        ]

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.variable, self.min_degree, tuple(-c for c in self.coefficients), self.truncation_order)

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        self._check(other)
        trunc = _min_trunc(self.truncation_order, other.truncation_order)
        lo = min(self.min_degree, other.min_degree)
        hi = max(self.min_degree + len(self.coefficients), other.min_degree + len(other.coefficients))
        if trunc is not None:
            hi = min(hi, trunc)
        coeffs = tuple(self._get(k) + other._get(k) for k in range(lo, hi))
        return LaurentSeries(self.variable, lo, coeffs, trunc)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return LaurentSeries(
                self.variable, self.min_degree, tuple(c * other for c in self.coefficients), self.truncation_order
            )
        self._check(other)
        lo = self.min_degree + other.min_degree
        trunc = _min_trunc(
            None if self.truncation_order is None else self.truncation_order + other.min_degree,
            None if other.truncation_order is None else other.truncation_order + self.min_degree,
        )
        n = len(self.coefficients) + len(other.coefficients) - 1
        if trunc is not None:
            n = min(n, trunc - lo)
        out = [Fraction(0)] * max(n, 0)
        for i, a in enumerate(self.coefficients):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coefficients):
                if i + j < len(out):
                    out[i + j] = out[i + j] + a * b
        return LaurentSeries(self.variable, lo, tuple(out), trunc)

    __rmul__ = __mul__

    def _get(self, k: int):
        idx = k - self.min_degree
        if 0 <= idx < len(self.coefficients):
            return self.coefficients[idx]
        return Fraction(0)

    def _check(self, other: "LaurentSeries") -> None:
        if other.variable != self.variable:
            raise InputError(f"series in {self.variable!r} and {other.variable!r} do not combine")

    def __str__(self) -> str:
        v = self.variable
        chunks = []
        for k, c in self.terms():
            power = "" if k == 0 else (v if k == 1 else f"{v}^{k}")
            if isinstance(c, Fraction):
                sign, mag = ("-" if c < 0 else "+"), abs(c)
                coeff = "" if mag == 1 and power else format_fraction(mag)
            else:
                coeff = str(c.normalized())
                if (" " in coeff or coeff.startswith("-")) and not coeff.startswith("("):
                    coeff = f"({coeff})"
                sign = "+"
            body = "*".join(x for x in (coeff, power) if x)
            chunks.append((sign, body))
        if not chunks:
            out = "0"
        else:
            out = ("-" if chunks[0][0] == "-" else "") + chunks[0][1]
            out += "".join(f" {sign} {body}" for sign, body in chunks[1:])
        if self.truncation_order is not None:
            out += f" + O({v}^{self.truncation_order})"
        return out


def _min_trunc(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def expand_series(f, variable: str, center=0, order: int | None = None) -> LaurentSeries:
    """Laurent expansion of ``f`` in ``(variable - center)``.

    Terms up to and including degree ``order`` are returned. With
    ``order=None`` the expansion must terminate (the shifted denominator is
    a monomial in ``variable``) and is returned exactly.
    """
    f = as_rational_function(f)
    center = as_fraction(center)
    num, den = f.numerator, f.denominator
    if center:
        shift = {variable: Polynomial.variable(variable) + center}
        num = num.substitute(shift, retain=True)
        den = den.substitute(shift, retain=True)
    ncoef = num.collect(variable)
    dcoef = den.collect(variable)
    if not dcoef:
        raise ZeroDivisionError(f"denominator vanishes identically in {variable!r}")
    m = min(dcoef)
    dtop = max(dcoef)
    d = [dcoef.get(m + i) for i in range(dtop - m + 1)]
    d0 = d[0]
    monomial_den = dtop == m
    if order is None:
        if not monomial_den:
            raise InputError(
                f"expansion in {variable!r} does not terminate; pass a finite order"
            )
        top = (max(ncoef) if ncoef else 0) - m
        trunc = None
    else:
        top = order
        trunc = order + 1
        if monomial_den and ncoef and max(ncoef) - m <= order:
            trunc = None
    count = top + m + 1
    if count <= 0:
        return LaurentSeries(variable, -m, (), trunc if trunc is not None else -m)

    coeffs: list = []
    if d0.is_constant():
        inv = 1 / d0.constant_term()
        for k in range(count):
            acc = ncoef.get(k)
            acc = acc if acc is not None else Polynomial.constant(0, num.variables)
            for i in range(1, min(k, len(d) - 1) + 1):
                if d[i] is not None and not coeffs[k - i].is_zero():
                    acc = acc - d[i] * coeffs[k - i]
            coeffs.append(acc * inv)
        out = [_simplify_coeff(c) for c in coeffs]
    else:
        # c_k = p_k / d0^(k+1) with p_k = N_k d0^k - sum_i D_i p_{k-i} d0^(i-1)
        d0_pows = [Polynomial.constant(1, d0.variables)]
        for _ in range(count):
            d0_pows.append(d0_pows[-1] * d0)
        ps: list[Polynomial] = []
        for k in range(count):
            nk = ncoef.get(k)
            acc = nk * d0_pows[k] if nk is not None else Polynomial.constant(0, d0.variables)
            for i in range(1, min(k, len(d) - 1) + 1):
                if d[i] is not None and not ps[k - i].is_zero():
                    acc = acc - d[i] * ps[k - i] * d0_pows[i - 1]
            ps.append(acc)
        out = [_simplify_coeff(RationalFunction(p, d0_pows[k + 1])) for k, p in enumerate(ps)]
    return LaurentSeries(variable, -m, tuple(out), trunc)


def pole_order(f, variable: str, center=0) -> int:
    """Order of the pole of ``f`` at ``variable = center`` (0 if analytic)."""
    f = as_rational_function(f)
    center = as_fraction(center)
    num, den = f.numerator, f.denominator
    if center:
        shift = {variable: Polynomial.variable(variable) + center}
        num = num.substitute(shift, retain=True)
        den = den.substitute(shift, retain=True)
    if num.is_zero():
        return 0
    return max(0, den.min_degree(variable) - num.min_degree(variable))


def residue(f, variable: str, pole=0):
    """Coefficient of ``(variable - pole)^-1`` in the Laurent expansion of ``f``."""
    return expand_series(f, variable, pole, order=-1).coefficient(-1)


def _univariate(f: RationalFunction, variable: str) -> tuple[list[Fraction], list[Fraction]]:
    free = f.free_variables()
    if any(v != variable for v in free):
        raise InputError(f"expected a rational function of {variable!r} only, got {free}")
    return to_coeffs(f.numerator, variable), to_coeffs(f.denominator, variable)


def finite_poles(f, variable: str) -> dict[Fraction, int]:
    """Poles of a univariate rational function with their orders.

    Raises UnsupportedInputError when a pole is not rational.
    """
    f = as_rational_function(f)
    num, den = _univariate(f, variable)
    if not num:
        return {}
    g = coeffs_gcd(num, den)
    den, _ = poly_divmod(den, g)
    roots, rest = rational_roots(den)
    if len(rest) > 1:
        raise UnsupportedInputError(
            f"denominator has irrational poles (unfactored part of degree {len(rest) - 1})"
        )
    return roots


def residue_sum_check(f, variable: str) -> Fraction:
    """Sum of the residues at every finite pole of a univariate rational function.

    Under ``deg(den) >= deg(num) + 2`` the residue at infinity vanishes and
    the sum is zero; the value is returned so callers can assert on it.
    """
    f = as_rational_function(f)
    num, den = _univariate(f, variable)
    if num and len(den) < len(num) + 2:
        raise InputError("residue sum check needs deg(denominator) >= deg(numerator) + 2")
    total = Fraction(0)
    for pole in sorted(finite_poles(f, variable)):
        total += residue(f, variable, pole)
    return total

