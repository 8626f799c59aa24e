"""Cosection numerator, almost-closed 1-forms and arc order bounds.

A C*-invariant 1-form on the graded affine space with invariant
coordinates ``u`` and moving coordinates ``x_j`` (weights ``l_j``) is
``omega = sum_k alpha_k du_k + sum_j f_j dx_j``; its zero locus X has ideal
``I_X = (alpha_k, f_j)``. The cosection numerator is
``F = sum_j l_j x_j f_j``. Along any arc the order bound
``ord F >= a + b + 1`` holds, with ``(t^a)`` the pullback of ``I_X`` and
``(t^b)`` that of the moving coordinates. Everything here is local at the
origin: arcs start there and memberships are over the power-series ring.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import inf
from typing import Iterable, Mapping, Sequence

from .blowup import ZETA, GradedAffineData, blowup_chart, chart_coordinate, is_weight_homogeneous
from .errors import InputError, TruncationInconclusive, UnsupportedInputError
from .exact import GroebnerBasis, LaurentSeries, Polynomial
from .exact.groebner import ideal_quotient
from .exact.polynomial import as_fraction, format_polynomial

T = "t"
DEFAULT_ARC_TRUNCATION = 32
DEFAULT_MARGIN = 8
DEFAULT_IDEAL_TRUNCATION = 16


@dataclass(frozen=True)
class OneForm:
    """``sum alpha_k du_k + sum f_j dx_j`` on ``ambient`` (its generators are ignored)."""

    ambient: GradedAffineData
    alpha: tuple[Polynomial, ...]
    f: tuple[Polynomial, ...]

    def __post_init__(self):
        amb = self.ambient
        alpha = tuple(_poly(a) for a in self.alpha)
        f = tuple(_poly(g) for g in self.f)
        if len(alpha) != len(amb.invariant_vars):
            raise InputError(f"expected {len(amb.invariant_vars)} alpha coefficients, got {len(alpha)}")
        if len(f) != len(amb.moving_vars):
            raise InputError(f"expected {len(amb.moving_vars)} f coefficients, got {len(f)}")
        weights = amb.weights
        for name, p in zip(amb.invariant_vars, alpha):
            _check_vars(p, amb.variables)
            if not is_weight_homogeneous(p, weights, 0):
                raise InputError(f"du-coefficient for {name!r} is not invariant: {format_polynomial(p)}")
        for (name, l), p in zip(amb.moving_vars, f):
            _check_vars(p, amb.variables)
            if not is_weight_homogeneous(p, weights, -l):
                raise InputError(
                    f"dx-coefficient for {name!r} must have weight {-l}: {format_polynomial(p)}"
                )
        ring = amb.variables
        object.__setattr__(self, "ambient", GradedAffineData(amb.invariant_vars, amb.moving_vars))
        object.__setattr__(self, "alpha", tuple(p.with_variables(ring) for p in alpha))
        object.__setattr__(self, "f", tuple(p.with_variables(ring) for p in f))

    @classmethod
    def exact(cls, ambient: GradedAffineData, g: Polynomial) -> "OneForm":
        """dg for an invariant polynomial g."""
        g = _poly(g)
        if not is_weight_homogeneous(g, ambient.weights, 0):
            raise InputError(f"{format_polynomial(g)} is not invariant")
        return cls(
            ambient,
            tuple(g.diff(u) for u in ambient.invariant_vars),
            tuple(g.diff(x) for x in ambient.moving_names),
        )

    @property
    def variables(self) -> tuple[str, ...]:
        return self.ambient.variables

    @property
    def coefficients(self) -> tuple[Polynomial, ...]:
        """Coefficients in the order of ``variables``."""
        return self.alpha + self.f

    def ideal_generators(self) -> list[Polynomial]:
        return [p for p in self.coefficients if not p.is_zero()]

    def ideal_data(self) -> GradedAffineData:
        """The graded presentation of X = (omega = 0)."""
        return self.ambient.with_generators(self.ideal_generators())

    def rescaled(self, m: int) -> "OneForm":
        """Same form with every weight multiplied by the positive integer m."""
        if isinstance(m, bool) or not isinstance(m, int) or m < 1:
            raise InputError(f"rescale factor must be a positive integer, got {m!r}")
        amb = GradedAffineData(self.ambient.invariant_vars, tuple((x, w * m) for x, w in self.ambient.moving_vars))
        return OneForm(amb, self.alpha, self.f)

    def exterior_derivative(self) -> dict[tuple[str, str], Polynomial]:
        """Components of d(omega) on da ^ db for a before b in ``variables``."""
        names, coeffs = self.variables, self.coefficients
        out = {}
        for p in range(len(names)):
            for q in range(p + 1, len(names)):
                out[(names[p], names[q])] = coeffs[q].diff(names[p]) - coeffs[p].diff(names[q])
        return out


def _poly(p) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial.constant(p)


def _check_vars(p: Polynomial, ring: Sequence[str]) -> None:
    stray = [v for v in p.free_variables() if v not in ring]
    if stray:
        raise InputError(f"{format_polynomial(p)} uses undeclared variables {stray}")


def cosection_numerator(w: OneForm) -> Polynomial:
    """F = sum_j l_j x_j f_j."""
    ring = w.variables
    total = Polynomial.constant(0, ring)
    for (x, l), f in zip(w.ambient.moving_vars, w.f):
        total = total + (Polynomial.variable(x, ring) * f).scale(l)
    return total


def _power_of_maximal_ideal(ring: Sequence[str], n: int) -> list[Polynomial]:
    out = []
    for combo in combinations_with_replacement(range(len(ring)), n):
        exps = [0] * len(ring)
        for k in combo:
            exps[k] += 1
        out.append(Polynomial(ring, {tuple(exps): 1}))
    return out


def local_contains(
    generators: Iterable[Polynomial], f: Polynomial, ring: Sequence[str], truncation: int, exact: bool = True
) -> bool:
    """Membership of f in the ideal over the power-series ring at the origin.

    Polynomial membership certifies True and failure modulo m^N certifies
    False. Otherwise f is a local member iff the ideal quotient (I : f)
    contains an element not vanishing at the origin; with ``exact=False``
    that last step is skipped and TruncationInconclusive is raised instead.
    """
    gens = [g.with_variables(ring) for g in generators]
    f = f.with_variables(ring)
    if GroebnerBasis(gens, ring).contains(f):
        return True
    mod_n = GroebnerBasis(gens + _power_of_maximal_ideal(ring, truncation), ring)
    if not mod_n.contains(f):
        return False
    if exact:
        return any(q.constant_term() for q in ideal_quotient(gens, f, ring))
    raise TruncationInconclusive(
        f"{format_polynomial(f)} lies in the ideal modulo order {truncation} but is not certified; increase truncation"
    )


def almost_closed_check(w: OneForm, truncation: int = DEFAULT_IDEAL_TRUNCATION, exact: bool = True) -> bool:
    """d(omega) restricted to X vanishes: every component lies in I_X."""
    gens = w.ideal_generators()
    return all(
        local_contains(gens, comp, w.variables, truncation, exact)
        for comp in w.exterior_derivative().values()
        if not comp.is_zero()
    )


@dataclass(frozen=True)
class Arc:
    """Formal arc: each coordinate a power series in t known modulo t^N."""

    coordinates: Mapping[str, tuple[Fraction, ...]]
    truncation: int = DEFAULT_ARC_TRUNCATION

    def __post_init__(self):
        n = self.truncation
        if isinstance(n, bool) or not isinstance(n, int) or n < 4:
            raise InputError(f"arc truncation must be an integer >= 4, got {n!r}")
        coords = {}
        for name, coeffs in self.coordinates.items():
            coeffs = [as_fraction(c) for c in coeffs]
            if len(coeffs) > n:
                if any(coeffs[n:]):
                    raise InputError(f"coordinate {name!r} has terms at or beyond t^{n}")
                coeffs = coeffs[:n]
            coords[name] = tuple(coeffs + [Fraction(0)] * (n - len(coeffs)))
        object.__setattr__(self, "coordinates", dict(sorted(coords.items())))

    @classmethod
    def random(
        cls,
        variables: Sequence[str],
        seed: int,
        index: int,
        truncation: int = DEFAULT_ARC_TRUNCATION,
        max_valuation: int = 3,
        free: Iterable[str] = (),
    ) -> "Arc":
        """Dense small rational coefficients from a generator split per arc index.

        Coordinates in ``free`` may have a nonzero constant term; the others
        start at a random order in 1..max_valuation.
        """
        rng = random.Random(seed * 1_000_003 + index)
        free = set(free)
        coords = {}
        for name in variables:
            start = rng.randint(0, max_valuation) if name in free else rng.randint(1, max_valuation)
            coeffs = [Fraction(0)] * truncation
            for k in range(start, truncation):
                coeffs[k] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            while not coeffs[start]:
                coeffs[start] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            coords[name] = tuple(coeffs)
        return cls(coords, truncation)

    def series(self, name: str) -> LaurentSeries:
        if name not in self.coordinates:
            raise InputError(f"arc has no coordinate {name!r}")
        return LaurentSeries(T, 0, self.coordinates[name], self.truncation)

    def require(self, names: Iterable[str], vanishing: Iterable[str] = ()) -> None:
        missing = [v for v in names if v not in self.coordinates]
        if missing:
            raise InputError(f"arc is missing coordinates {missing}")
        for v in vanishing:
            if self.coordinates[v][0]:
                raise UnsupportedInputError(f"arc coordinate {v!r} must vanish at t = 0")

    def to_json(self) -> dict:
        from .exact.polynomial import format_fraction

        return {name: [format_fraction(c) for c in coeffs] for name, coeffs in self.coordinates.items()}


def series_order(s: LaurentSeries):
    """t-adic order; math.inf when nothing nonzero is known."""
    return s.min_degree if s.coefficients else inf


def compose(p: Polynomial, images: Mapping[str, LaurentSeries], truncation: int) -> LaurentSeries:
    """p evaluated on power series, modulo t^truncation."""
    powers: dict[tuple[str, int], LaurentSeries] = {}

    def power(name: str, e: int) -> LaurentSeries:
        key = (name, e)
        if key not in powers:
            powers[key] = images[name] if e == 1 else power(name, e - 1) * images[name]
        return powers[key]

    total = LaurentSeries(T, 0, (), truncation)
    for exps, c in p.terms.items():
        term = LaurentSeries(T, 0, (c,), truncation)
        for name, e in zip(p.variables, exps):
            if e:
                term = term * power(name, e)
        total = total + term
    return total


@dataclass(frozen=True)
class ArcOrderReport:
    ordF: object
    a: object
    b: object
    bound_ok: bool
    caveat: bool

    def as_dict(self) -> dict:
        show = lambda v: "inf" if v == inf else v  # noqa: E731
        return {"ordF": show(self.ordF), "a": show(self.a), "b": show(self.b), "bound_ok": self.bound_ok, "caveat": self.caveat}


def arc_order_test(w: OneForm, arc: Arc, margin: int = DEFAULT_MARGIN) -> ArcOrderReport:
    """Check ord F(arc) >= a + b + 1.

    Orders at or past the arc truncation are reported as inf; ``caveat``
    flags such orders and bounds a + b + 1 + margin that reach the truncation.
    """
    n = arc.truncation
    arc.require(w.variables, vanishing=w.variables)
    images = {v: arc.series(v) for v in w.variables}
    ordF = series_order(compose(cosection_numerator(w), images, n))
    gens = w.ideal_generators()
    a = min((series_order(compose(g, images, n)) for g in gens), default=inf)
    b = min((series_order(images[x]) for x in w.ambient.moving_names), default=inf)
    bound = a + b + 1
    caveat = inf in (ordF, a, b) or bound + margin > n
    return ArcOrderReport(ordF, a, b, ordF >= bound, caveat)


@dataclass(frozen=True)
class ChartArcReport:
    ordQ: object
    ideal_order: object
    zeta_order: int
    passed: bool
    caveat: bool

    @property
    def margin(self):
        return self.ordQ - self.ideal_order

    def as_dict(self) -> dict:
        show = lambda v: "inf" if v == inf else v  # noqa: E731
        return {
            "ordQ": show(self.ordQ),
            "ideal_order": show(self.ideal_order),
            "zeta_order": self.zeta_order,
            "margin": show(self.margin) if self.ordQ != inf or self.ideal_order != inf else "inf",
            "passed": self.passed,
            "caveat": self.caveat,
        }


def chart_cosection_report(
    w: OneForm,
    arc: Arc,
    chart: int,
    data: GradedAffineData | None = None,
    zeta_truncation: int = DEFAULT_IDEAL_TRUNCATION,
    margin: int = DEFAULT_MARGIN,
) -> ChartArcReport:
    """Order test on chart ``chart`` of the blow-up of X.

    Q = zeta^-2 F pulled back along the arc must lie in t times the pullback
    of the chart ideal: ord Q >= (least order among the pulled-back chart
    ideal generators) + 1.
    """
    data = w.ideal_data() if data is None else data
    ideal = blowup_chart(data, chart, zeta_truncation)
    ring = ideal.chart_vars
    arc.require(ring, vanishing=data.invariant_vars + (ZETA,))
    n = arc.truncation
    images = {v: arc.series(v) for v in ring}
    zeta_order = series_order(images[ZETA])
    if zeta_order == inf:
        raise UnsupportedInputError("arc lies in the exceptional divisor (zeta pulls back to 0)")
    zeta = images[ZETA]
    ambient = dict((u, images[u]) for u in data.invariant_vars)
    for k, name in enumerate(data.moving_names, start=1):
        ambient[name] = zeta if k == chart else images[chart_coordinate(k)] * zeta
    ordF = series_order(compose(cosection_numerator(w), ambient, n))
    ordQ = ordF - 2 * zeta_order
    ideal_order = min((series_order(compose(g, images, n)) for g in ideal.full_generators), default=inf)
    caveat = inf in (ordF, ideal_order) or ideal_order + 1 + margin + 2 * zeta_order > n
    return ChartArcReport(ordQ, ideal_order, zeta_order, ordQ >= ideal_order + 1, caveat)


def chart_cosection_test(
    data: GradedAffineData | None,
    w: OneForm,
    arc: Arc,
    chart: int,
    zeta_truncation: int = DEFAULT_IDEAL_TRUNCATION,
) -> bool:
    return chart_cosection_report(w, arc, chart, data, zeta_truncation).passed


def arc_harness(
    w: OneForm, samples: int, seed: int, truncation: int = DEFAULT_ARC_TRUNCATION, margin: int = DEFAULT_MARGIN
) -> list[tuple[int, ArcOrderReport]]:
    """Order bound on ``samples`` seeded random arcs (index, report)."""
    out = []
    for index in range(samples):
        arc = Arc.random(w.variables, seed, index, truncation)
        out.append((index, arc_order_test(w, arc, margin)))
    return out


def chart_arc_harness(
    w: OneForm,
    chart: int,
    samples: int,
    seed: int,
    truncation: int = DEFAULT_ARC_TRUNCATION,
    zeta_truncation: int = DEFAULT_IDEAL_TRUNCATION,
) -> list[tuple[int, ChartArcReport]]:
    data = w.ideal_data()
    ring = data.chart_variables(chart)
    free = [v for v in ring if v != ZETA and v not in data.invariant_vars]
    out = []
    for index in range(samples):
        arc = Arc.random(ring, seed, index, truncation, free=free)
        out.append((index, chart_cosection_report(w, arc, chart, data, zeta_truncation)))
    return out
