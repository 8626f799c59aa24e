"""Wall-crossing numbers for simple C*-flips.

Closed form, the localization pipeline that must reproduce it, the DT
evaluator for simple wall crossings and the smooth linear-flip oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Iterator

from .equivariant import (
    WeightVector,
    component_constant_by_substitution,
    component_contributions,
    residue_delta,
)
from .errors import InputError, VerificationError
from .exact import Polynomial, RationalFunction, residue
from .exact.polynomial import as_fraction


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def lambda_closed(W: WeightVector) -> Fraction:
    """(-1)^(n-1) * sum_j n_j / j with n the total multiplicity."""
    return _sign(W.total - 1) * sum((Fraction(n) / j for j, n in W.items()), Fraction(0))


def lambda_localized(W: WeightVector) -> Fraction:
    """Sum over fixed components P(V_j) of res_{t=0} of the projective integral."""
    return residue_delta(component_contributions(W).values())


def lambda_by_substitution(W: WeightVector) -> Fraction:
    """Same sum, each component evaluated through zeta = x t and a residue at x = 0."""
    return sum((component_constant_by_substitution(j, W) for j in W), Fraction(0))


def _z_product(W: WeightVector) -> RationalFunction:
    z = Polynomial.variable("z")
    num = Polynomial.constant(1, ("z",))
    den = Polynomial.constant(1, ("z",))
    for i, n in W.items():
        num = num * (z - i) ** n
        den = den * (z + i) ** n
    return RationalFunction(num, den)


def lambda_residue_chain(W: WeightVector) -> tuple[Fraction, Fraction]:
    """The last steps of the localization computation, in the variable z = x - j.

    Returns ``(-sum_j res_{z=-j} R, res_{z=0} R)`` with
    R(z) = prod_i ((z - i)/(z + i))^(n_i) / (2 z^2). The two agree because
    R has no residue at infinity.
    """
    z2 = RationalFunction(Polynomial(("z",), {(2,): 2}))
    r = _z_product(W) / z2
    moving = -sum((residue(r, "z", -j) for j in W), Fraction(0))
    at_zero = residue(r, "z", 0)
    return moving, at_zero


def lambda_derivative_form(W: WeightVector) -> Fraction:
    """1/2 d/dz at z = 0 of prod_i ((z - i)/(z + i))^(n_i), by the quotient rule."""
    p = _z_product(W)
    num, den = p.numerator, p.denominator
    at0 = {"z": 0}
    n0, d0 = num.evaluate(at0), den.evaluate(at0)
    n1, d1 = num.diff("z").evaluate(at0), den.diff("z").evaluate(at0)
    return (n1 * d0 - n0 * d1) / (2 * d0 * d0)


def enumerate_weight_vectors(weight_range: int, max_total: int) -> Iterator[WeightVector]:
    """Every WeightVector with integer weights in +-1..+-weight_range and total multiplicity <= max_total."""
    if weight_range < 1 or max_total < 1:
        raise InputError("weight_range and max_total must be positive")
    weights = [w for k in range(1, weight_range + 1) for w in (-k, k)]
    weights.sort()
    for mults in product(range(max_total + 1), repeat=len(weights)):
        total = sum(mults)
        if 1 <= total <= max_total:
            yield WeightVector({w: n for w, n in zip(weights, mults) if n})


@dataclass(frozen=True)
class FixedLocusData:
    """Virtual class of the fixed locus as a list of (a_k, W_k)."""

    points: tuple[tuple[Fraction, WeightVector], ...]

    def __init__(self, points: Iterable):
        pts = []
        for a, W in points:
            if not isinstance(W, WeightVector):
                W = WeightVector(W)
            pts.append((as_fraction(a), W))
        object.__setattr__(self, "points", tuple(pts))

    @property
    def degree(self) -> Fraction:
        return sum((a for a, _ in self.points), Fraction(0))


def wallcross_total(data: FixedLocusData, method: str = "closed") -> Fraction:
    """deg[M+]^vir - deg[M-]^vir = sum_k a_k lambda_k.

    ``method`` is ``"closed"``, ``"localized"`` or ``"both"``; the last
    evaluates every lambda_k both ways and raises VerificationError on any
    disagreement.
    """
    if method not in ("closed", "localized", "both"):
        raise InputError(f"unknown method {method!r}")
    lambdas = []
    for _, W in data.points:
        if method == "closed":
            lam = lambda_closed(W)
        elif method == "localized":
            lam = lambda_localized(W)
        else:
            lam = lambda_closed(W)
            loc = lambda_localized(W)
            if lam != loc:
                raise VerificationError(f"lambda mismatch for {W!r}: closed {lam}, localized {loc}")
        lambdas.append(lam)
    total = sum((a * lam for (a, _), lam in zip(data.points, lambdas)), Fraction(0))
    if lambdas and all(lam == lambdas[0] for lam in lambdas):
        if total != lambdas[0] * data.degree:
            raise VerificationError("uniform-lambda shortcut disagrees with the component sum")
    return total


@dataclass(frozen=True)
class CorollaryInput:
    ext21: int
    ext12: int
    nu: int
    degM1: Fraction = Fraction(1)
    degM2: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("ext21", "ext12", "nu"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise InputError(f"{name} must be a nonnegative integer, got {value!r}")
        if self.nu < 1:
            raise InputError("nu must be positive")
        if self.ext21 == 0 and self.ext12 == 0:
            raise InputError("ext21 = ext12 = 0 leaves no moving weights")
        object.__setattr__(self, "degM1", as_fraction(self.degM1))
        object.__setattr__(self, "degM2", as_fraction(self.degM2))

    @property
    def chi(self) -> int:
        return self.ext21 - self.ext12

    @property
    def weights(self) -> WeightVector:
        w = Fraction(1, self.nu)
        return WeightVector([(w, n) for w, n in ((w, self.ext21), (-w, self.ext12)) if n])


@dataclass(frozen=True)
class CorollaryResult:
    engine_side: Fraction
    closed_side: Fraction

    @property
    def match(self) -> bool:
        return self.engine_side == self.closed_side


def corollary_dt(c: CorollaryInput, method: str = "closed") -> CorollaryResult:
    """DT wall crossing at a simple wall, computed two ways.

    Engine side: the fixed locus M1 x M2 carries degree d1 d2 / nu and
    moving weights +1/nu (ext21 times) and -1/nu (ext12 times). Closed side:
    (-1)^(chi - 1) chi d1 d2 with chi = ext21 - ext12.
    """
    lam = lambda_localized(c.weights) if method == "localized" else lambda_closed(c.weights)
    engine = c.degM1 * c.degM2 / c.nu * lam
    closed = _sign(c.chi - 1) * c.chi * c.degM1 * c.degM2
    return CorollaryResult(engine, Fraction(closed))


def euler_omega_degree(dims: Iterable[int]) -> Fraction:
    """Degree of e(Omega) on a product of projective spaces of the given dimensions."""
    dims = list(dims)
    if any(isinstance(d, bool) or not isinstance(d, int) or d < 0 for d in dims):
        raise InputError(f"dimensions must be nonnegative integers, got {dims}")
    return Fraction(prod(_sign(d) * (d + 1) for d in dims))


@dataclass(frozen=True)
class LinearFlipInput:
    n_plus: int
    n_minus: int
    n_zero: int

    def __post_init__(self):
        for name in ("n_plus", "n_minus", "n_zero"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InputError(f"{name} must be a positive integer, got {value!r}")


@dataclass(frozen=True)
class LinearFlipResult:
    degMplus: Fraction
    degMminus: Fraction
    degXT: Fraction
    delta: Fraction
    predicted: Fraction

    @property
    def match(self) -> bool:
        return self.delta == self.predicted


def linear_flip_oracle(inp: LinearFlipInput) -> LinearFlipResult:
    """Weights 1, -1, 0 on V+, V-, V0: M+ = P(V+) x P(V0 + V-), M- = P(V-) x P(V0 + V+).

    ``delta`` comes from Euler characteristics of the two sides;
    ``predicted`` is lambda_closed({1: n+, -1: n-}) times deg e(Omega_{P(V0)}).
    """
    plus = euler_omega_degree([inp.n_plus - 1, inp.n_zero + inp.n_minus - 1])
    minus = euler_omega_degree([inp.n_minus - 1, inp.n_zero + inp.n_plus - 1])
    fixed = euler_omega_degree([inp.n_zero - 1])
    lam = lambda_closed(WeightVector({1: inp.n_plus, -1: inp.n_minus}))
    return LinearFlipResult(plus, minus, fixed, plus - minus, lam * fixed)
