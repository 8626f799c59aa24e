"""Equivariant classes on the fixed components P(V_j) and their integrals.

All classes live in Q(t, zeta): ``t`` is the equivariant parameter of C*
and ``zeta`` the hyperplane class of P(V_j), normalized so that
zeta^(n_j - 1) integrates to 1.
"""

from __future__ import annotations

from collections.abc import Mapping
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InputError, NonEquivariantPoleError
from .exact import LaurentSeries, Polynomial, RationalFunction, expand_series, residue
from .exact.polynomial import as_fraction, format_fraction
from .exact.ratfunc import as_rational_function

T = "t"
ZETA = "zeta"
RING = (T, ZETA)

EquivariantClass = RationalFunction


class WeightVector(Mapping):
    """Weights of the moving tangent directions at an isolated fixed point.

    Maps each nonzero rational weight ``j`` to its multiplicity ``n_j >= 1``.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping | Iterable = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        out: dict[Fraction, int] = {}
        for weight, mult in items:
            w = as_fraction(weight)
            if not w:
                raise InputError("weight 0 is not a moving direction")
            if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
                raise InputError(f"multiplicity of weight {format_fraction(w)} must be a positive integer, got {mult!r}")
            if w in out:
                raise InputError(f"duplicate weight {format_fraction(w)}")
            out[w] = mult
        if not out:
            raise InputError("empty weight vector")
        self._entries = dict(sorted(out.items()))

    def __getitem__(self, weight) -> int:
        return self._entries[as_fraction(weight)]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __hash__(self) -> int:
        return hash(tuple(self._entries.items()))

    def __eq__(self, other) -> bool:
        if isinstance(other, WeightVector):
            return self._entries == other._entries
        return NotImplemented

    def __repr__(self) -> str:
        body = ", ".join(f"{format_fraction(w)}: {n}" for w, n in self._entries.items())
        return f"WeightVector({{{body}}})"

    def multiplicity(self, weight) -> int:
        return self._entries.get(as_fraction(weight), 0)

    @property
    def total(self) -> int:
        return sum(self._entries.values())

    def negated(self) -> "WeightVector":
        return WeightVector({-w: n for w, n in self._entries.items()})

    def scaled(self, factor) -> "WeightVector":
        factor = as_fraction(factor)
        return WeightVector({w * factor: n for w, n in self._entries.items()})

    def pairs(self) -> list[list]:
        return [[format_fraction(w), n] for w, n in self._entries.items()]


def _linear(t_coeff, zeta_coeff=1) -> Polynomial:
    return Polynomial(RING, {(1, 0): t_coeff, (0, 1): zeta_coeff})


def _check_weight(j, W: WeightVector) -> Fraction:
    j = as_fraction(j)
    if not j:
        raise InputError("weight 0 has no fixed component")
    if j not in W:
        raise InputError(f"weight {format_fraction(j)} does not occur in {W!r}")
    return j


def euler_virtual_normal(j, W: WeightVector) -> EquivariantClass:
    """Euler class of the virtual normal bundle of P(V_j):

    (jt - zeta) prod_{i != j} ((i - j)t + zeta)^{n_i}  /  prod_{i != -j} ((-i - j)t + zeta)^{n_i}
    """
    j = _check_weight(j, W)
    num = _linear(j, -1)
    den = Polynomial.constant(1, RING)
    for i, n in W.items():
        if i != j:
            num = num * _linear(i - j) ** n
        if i != -j:
            den = den * _linear(-i - j) ** n
    return RationalFunction(num, den)


def numerator_twist(j, W: WeightVector) -> EquivariantClass:
    """e(V_{-j}^dual(1)) restricted to P(V_j), i.e. zeta^(n_{-j})."""
    j = _check_weight(j, W)
    return RationalFunction(Polynomial(RING, {(0, W.multiplicity(-j)): 1}))


def c1_twice_exceptional(j) -> EquivariantClass:
    """c_1(O(-2E)) on P(V_j): 2(zeta - jt)."""
    j = as_fraction(j)
    if not j:
        raise InputError("weight 0 has no fixed component")
    return RationalFunction(_linear(-2 * j, 2))


def component_integrand(j, W: WeightVector) -> EquivariantClass:
    """numerator_twist / (euler_virtual_normal * c1_twice_exceptional)."""
    return numerator_twist(j, W) / (euler_virtual_normal(j, W) * c1_twice_exceptional(j))


def integrate_projective(c, n_j: int, t_order: int = 0) -> LaurentSeries:
    """Integrate a class over P^(n_j - 1): the zeta^(n_j - 1) coefficient, as a Laurent series in t.

    The coefficient is expanded exactly when its denominator is a monomial
    in t (always the case for the fixed-component integrands); otherwise
    it is truncated after ``t^t_order``.
    """
    if isinstance(n_j, bool) or not isinstance(n_j, int) or n_j < 1:
        raise InputError(f"n_j must be a positive integer, got {n_j!r}")
    c = as_rational_function(c).cancel_monomial()
    den_at_zero = c.denominator.substitute({ZETA: 0}, retain=True)
    if den_at_zero.is_zero():
        raise NonEquivariantPoleError(
            "denominator vanishes at zeta = 0; the fixed-component model is ill-posed"
        )
    zeta_series = expand_series(c, ZETA, 0, order=n_j - 1)
    coeff = as_rational_function(zeta_series.coefficient(n_j - 1)).cancel_monomial()
    try:
        return expand_series(coeff, T, 0, order=None)
    except InputError:
        return expand_series(coeff, T, 0, order=t_order)


def residue_delta(contributions: Iterable[LaurentSeries]) -> Fraction:
    """Sum of the t^-1 coefficients of the per-component contributions."""
    total = Fraction(0)
    for series in contributions:
        coeff = series.coefficient(-1)
        if isinstance(coeff, RationalFunction):
            raise InputError("contribution still depends on other variables")
        total += coeff
    return total


def component_contributions(W: WeightVector) -> dict[Fraction, LaurentSeries]:
    """Projective integral of each fixed component P(V_j), keyed by weight."""
    return {j: integrate_projective(component_integrand(j, W), n) for j, n in W.items()}


def component_constant_by_substitution(j, W: WeightVector) -> Fraction:
    """Per-component constant via zeta = x t: res_{x=0} x^(-n_j) G(x).

    G is the integrand at t = 1; homogeneity of degree n_j - 2 makes this
    equal to the t^-1 coefficient of the direct zeta-expansion.
    """
    j = _check_weight(j, W)
    g = component_integrand(j, W).substitute({T: 1, ZETA: Polynomial.variable("x")})
    shifted = g / RationalFunction(Polynomial(("x",), {(W[j],): 1}))
    return residue(shifted, "x", 0)
