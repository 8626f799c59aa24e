"""C*-intrinsic blow-up of graded polynomial ideals, chart by chart.

A graded affine presentation has invariant variables (weight 0) and moving
variables ``x_k`` of nonzero weight ``l_k``. Chart ``i`` of the blow-up of
the fixed locus ``x = 0`` has coordinates: the invariant variables,
``v_k`` for ``k != i``, and ``zeta``, with ``x_k = v_k * zeta`` and
``v_i = 1``. The chart ideal is generated by the substituted invariant
components of the generators together with the substituted
nonzero-weight components divided once by ``zeta``.

Chart rings are power series in ``zeta``; computations run in the
polynomial ring and use ``zeta^N`` truncation only to refute membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import InputError, MalformedChartError, TruncationInconclusive
from .exact import GroebnerBasis, Polynomial, RationalFunction
from .exact.groebner import ideal_quotient
from .exact.polynomial import as_fraction, format_polynomial, merge_variables
from .exact.ratfunc import substitute_rational

ZETA = "zeta"
DEFAULT_TRUNCATION = 16


def chart_coordinate(k: int) -> str:
    return f"v{k}"


@dataclass(frozen=True)
class GradedAffineData:
    """Graded polynomial presentation of a C*-invariant ideal."""

    invariant_vars: tuple[str, ...]
    moving_vars: tuple[tuple[str, Fraction], ...]
    generators: tuple[Polynomial, ...] = ()

    def __post_init__(self):
        inv = tuple(self.invariant_vars)
        moving = tuple((str(name), as_fraction(w)) for name, w in self.moving_vars)
        names = inv + tuple(name for name, _ in moving)
        if len(set(names)) != len(names):
            raise InputError(f"duplicate variable names in {names}")
        for name, w in moving:
            if not w:
                raise InputError(f"moving variable {name!r} has weight 0")
        gens = tuple(self.generators)
        for g in gens:
            stray = [v for v in g.free_variables() if v not in names]
            if stray:
                raise InputError(f"generator {format_polynomial(g)} uses undeclared variables {stray}")
        object.__setattr__(self, "invariant_vars", inv)
        object.__setattr__(self, "moving_vars", moving)
        object.__setattr__(self, "generators", tuple(g.with_variables(names) for g in gens))

    @property
    def variables(self) -> tuple[str, ...]:
        return self.invariant_vars + self.moving_names

    @property
    def moving_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.moving_vars)

    @property
    def weights(self) -> dict[str, Fraction]:
        return dict(self.moving_vars)

    def chart_variables(self, i: int) -> tuple[str, ...]:
        self._check_chart(i)
        return (
            self.invariant_vars
            + tuple(chart_coordinate(k) for k in range(1, len(self.moving_vars) + 1) if k != i)
            + (ZETA,)
        )

    def _check_chart(self, i: int) -> None:
        if not 1 <= i <= len(self.moving_vars):
            raise InputError(f"chart index {i} outside 1..{len(self.moving_vars)}")
        clash = {ZETA, *(chart_coordinate(k) for k in range(1, len(self.moving_vars) + 1))}
        clash &= set(self.variables)
        if clash:
            raise InputError(f"variable names {sorted(clash)} collide with chart coordinates")

    def with_generators(self, generators: Iterable[Polynomial]) -> "GradedAffineData":
        return GradedAffineData(self.invariant_vars, self.moving_vars, tuple(generators))


def monomial_weight(exps: Sequence[int], variables: Sequence[str], weights: Mapping[str, Fraction]) -> Fraction:
    return sum((e * weights[v] for v, e in zip(variables, exps) if e and v in weights), Fraction(0))


def weight_decompose(p: Polynomial, data: GradedAffineData) -> dict[Fraction, Polynomial]:
    """Split ``p`` into weight-homogeneous components, keyed by weight."""
    weights = data.weights
    parts: dict[Fraction, dict] = {}
    for exps, c in p.terms.items():
        w = monomial_weight(exps, p.variables, weights)
        parts.setdefault(w, {})[exps] = c
    return {w: Polynomial._raw(p.variables, t) for w, t in sorted(parts.items())}


def is_weight_homogeneous(p: Polynomial, weights: Mapping[str, Fraction], weight=None) -> bool:
    found = {monomial_weight(e, p.variables, weights) for e in p.terms}
    if not found:
        return True
    if weight is None:
        return len(found) == 1
    return found == {as_fraction(weight)}


def chart_substitution(data: GradedAffineData, i: int) -> dict[str, Polynomial]:
    """x_k -> v_k zeta (k != i), x_i -> zeta, invariant variables fixed."""
    ring = data.chart_variables(i)
    zeta = Polynomial.variable(ZETA, ring)
    out = {u: Polynomial.variable(u, ring) for u in data.invariant_vars}
    for k, name in enumerate(data.moving_names, start=1):
        out[name] = zeta if k == i else Polynomial.variable(chart_coordinate(k), ring) * zeta
    return out


def divide_by_zeta(p: Polynomial, context: str = "") -> Polynomial:
    if ZETA not in p.variables:
        if p.is_zero():
            return p
        raise MalformedChartError(f"cannot divide {format_polynomial(p)} by zeta{context}")
    k = p.index(ZETA)
    terms = {}
    for e, c in p.terms.items():
        if not e[k]:
            raise MalformedChartError(f"cannot divide {format_polynomial(p)} by zeta{context}")
        terms[e[:k] + (e[k] - 1,) + e[k + 1 :]] = c
    return Polynomial._raw(p.variables, terms)


def bl(g: Polynomial, data: GradedAffineData, i: int) -> Polynomial:
    """zeta^-1 g(x_k -> v_k zeta)|_{v_i = 1} for g with no invariant monomials."""
    ring = data.chart_variables(i)
    image = g.substitute(chart_substitution(data, i), retain=()).with_variables(ring)
    return divide_by_zeta(image, f" in chart {i}")


def chart_generator_images(g: Polynomial, data: GradedAffineData, i: int, strict_local: bool = False) -> list[Polynomial]:
    ring = data.chart_variables(i)
    sub = chart_substitution(data, i)
    if strict_local:
        return [bl(g, data, i)] if not g.is_zero() else []
    out = []
    for w, part in weight_decompose(g, data).items():
        image = part.substitute(sub, retain=()).with_variables(ring)
        if w:
            image = divide_by_zeta(image, f" (weight {w} component, chart {i})")
        if not image.is_zero():
            out.append(image)
    return out


@dataclass(frozen=True)
class ChartIdeal:
    """Ideal of the blow-up in chart ``chart_index``.

    ``generators`` are stored modulo zeta^N; ``full_generators`` keep the
    untruncated polynomial images and are used to certify membership.
    """

    chart_index: int
    chart_vars: tuple[str, ...]
    generators: tuple[Polynomial, ...]
    zeta_truncation: int
    full_generators: tuple[Polynomial, ...] = field(repr=False, compare=False, default=())
    exact: bool = field(compare=False, default=True)

    @cached_property
    def _truncated_basis(self) -> GroebnerBasis:
        zeta_n = Polynomial(self.chart_vars, {_zeta_exps(self.chart_vars, self.zeta_truncation): 1})
        return GroebnerBasis(list(self.generators) + [zeta_n], self.chart_vars)

    @cached_property
    def _full_basis(self) -> GroebnerBasis:
        return GroebnerBasis(self.full_generators, self.chart_vars)

    @cached_property
    def _zeta_power_certified(self) -> bool:
        # zeta^N in J + (zeta^(N+1)) forces zeta^N in J over the power-series ring
        n = self.zeta_truncation
        zeta_n1 = Polynomial(self.chart_vars, {_zeta_exps(self.chart_vars, n + 1): 1})
        basis = GroebnerBasis(list(self.full_generators) + [zeta_n1], self.chart_vars)
        return basis.contains(Polynomial(self.chart_vars, {_zeta_exps(self.chart_vars, n): 1}))

    def contains(self, f: Polynomial) -> bool:
        """Membership over the chart ring with power series in zeta.

        False is certain once ``f`` fails modulo zeta^N. True is certified by
        polynomial membership, or by zeta^N lying in the ideal. Otherwise
        the ideal quotient (J : f) decides: f is a member iff (J : f) + (zeta)
        is the unit ideal. With ``exact=False`` that step is replaced by
        TruncationInconclusive.
        """
        f = _into(f, self.chart_vars)
        if not self._truncated_basis.contains(f.truncate(ZETA, self.zeta_truncation)):
            return False
        if self._full_basis.contains(f):
            return True
        if self._zeta_power_certified:
            return True
        if self.exact:
            quotient = ideal_quotient(self.full_generators, f, self.chart_vars)
            zeta = Polynomial.variable(ZETA, self.chart_vars)
            return GroebnerBasis(quotient + [zeta], self.chart_vars).is_unit_ideal()
        raise TruncationInconclusive(
            f"membership of {format_polynomial(f)} in chart {self.chart_index} holds modulo "
            f"zeta^{self.zeta_truncation} but is not certified; increase truncation"
        )

    def contains_all(self, polys: Iterable[Polynomial]) -> bool:
        return all(self.contains(p) for p in polys)

    def same_ideal(self, other: "ChartIdeal") -> bool:
        return self.contains_all(other.full_generators) and other.contains_all(self.full_generators)

    def with_extra(self, extra: Iterable[Polynomial]) -> "ChartIdeal":
        extra = [_into(p, self.chart_vars) for p in extra]
        return ChartIdeal(
            self.chart_index,
            self.chart_vars,
            self.generators + tuple(p.truncate(ZETA, self.zeta_truncation) for p in extra),
            self.zeta_truncation,
            self.full_generators + tuple(extra),
            self.exact,
        )

    def canonical_generators(self) -> list[str]:
        """Reduced Groebner basis of the truncated ideal, printed and sorted."""
        return sorted(format_polynomial(p) for p in self._truncated_basis.polynomials)

    def generator_strings(self) -> list[str]:
        return sorted(format_polynomial(p) for p in self.generators)


def _zeta_exps(ring: Sequence[str], n: int) -> tuple[int, ...]:
    return tuple(n if v == ZETA else 0 for v in ring)


def _into(p: Polynomial, ring: Sequence[str]) -> Polynomial:
    if not isinstance(p, Polynomial):
        p = Polynomial.constant(p)
    stray = [v for v in p.free_variables() if v not in ring]
    if stray:
        raise InputError(f"{format_polynomial(p)} uses variables {stray} outside the chart ring {tuple(ring)}")
    return p.with_variables(ring)


def blowup_chart(
    data: GradedAffineData,
    i: int,
    truncation: int = DEFAULT_TRUNCATION,
    strict_local: bool = False,
    exact: bool = True,
) -> ChartIdeal:
    """Chart ``i`` (1-based) of the C*-intrinsic blow-up.

    ``strict_local`` divides every generator by zeta once instead of
    splitting off invariant components first. ``exact=False`` turns
    uncertified truncated memberships into TruncationInconclusive.
    """
    if truncation < 1:
        raise InputError("truncation must be positive")
    ring = data.chart_variables(i)
    full: list[Polynomial] = []
    for g in data.generators:
        full.extend(chart_generator_images(g, data, i, strict_local))
    truncated = tuple(t for t in (p.truncate(ZETA, truncation) for p in full) if not t.is_zero())
    return ChartIdeal(i, ring, truncated, truncation, tuple(full), exact)


@dataclass(frozen=True)
class EmbeddingMap:
    """A minimal presentation ``source`` (m moving variables) inside a
    larger one ``target`` (n >= m moving variables).

    ``substitution`` sends every target moving variable to a polynomial in
    the source variables; the first m go to the source moving variables in
    order, the rest to weight-homogeneous ``h_k`` of the same weight.
    """

    source: GradedAffineData
    target: GradedAffineData
    substitution: Mapping[str, Polynomial]

    def __post_init__(self):
        src, tgt = self.source, self.target
        m, n = len(src.moving_vars), len(tgt.moving_vars)
        if n < m:
            raise InputError("target must have at least as many moving variables as the source")
        if src.invariant_vars != tgt.invariant_vars:
            raise InputError("source and target must share their invariant variables")
        sub = {}
        for k, (name, weight) in enumerate(tgt.moving_vars):
            if name not in self.substitution:
                raise InputError(f"substitution does not cover target variable {name!r}")
            img = self.substitution[name]
            img = img if isinstance(img, Polynomial) else Polynomial.constant(img)
            stray = [v for v in img.free_variables() if v not in src.variables]
            if stray:
                raise InputError(f"image of {name!r} uses non-source variables {stray}")
            if k < m:
                src_name, src_weight = src.moving_vars[k]
                if img != Polynomial.variable(src_name) or src_weight != weight:
                    raise InputError(
                        f"target variable {name!r} must map to source variable {src_name!r} of the same weight"
                    )
            if img.is_zero() or not is_weight_homogeneous(img, src.weights, weight):
                raise InputError(f"image of {name!r} is not weight-homogeneous of weight {weight}")
            sub[name] = img.with_variables(src.variables)
        object.__setattr__(self, "substitution", sub)

    @classmethod
    def from_relations(
        cls,
        source: GradedAffineData,
        extra: Sequence[tuple[str, object, Polynomial]],
        target_names: Sequence[str] | None = None,
    ) -> "EmbeddingMap":
        """Target generated by the renamed source ideal and y_{m+k} - h_k(y).

        ``extra`` lists ``(name, weight, h_k)`` with ``h_k`` in source variables.
        """
        m = len(source.moving_vars)
        names = list(target_names) if target_names is not None else [f"y{k}" for k in range(1, m + len(extra) + 1)]
        if len(names) != m + len(extra):
            raise InputError("target_names must name every target moving variable")
        rename = {x: Polynomial.variable(y) for (x, _), y in zip(source.moving_vars, names)}
        moving = [(y, w) for (_, w), y in zip(source.moving_vars, names)]
        moving += [(y, as_fraction(w)) for y, (_, w, _) in zip(names[m:], extra)]
        gens = [g.substitute(rename, retain=True) for g in source.generators]
        for y, (_, _, h) in zip(names[m:], extra):
            gens.append(Polynomial.variable(y) - h.substitute(rename, retain=True))
        target = GradedAffineData(source.invariant_vars, tuple(moving), tuple(gens))
        sub = {y: Polynomial.variable(x) for (x, _), y in zip(source.moving_vars, names)}
        sub.update({y: h for y, (_, _, h) in zip(names[m:], extra)})
        return cls(source, target, sub)

    @property
    def m(self) -> int:
        return len(self.source.moving_vars)

    @property
    def n(self) -> int:
        return len(self.target.moving_vars)

    def redundant_images(self) -> list[tuple[int, Polynomial]]:
        """(target chart index, h_k) for the redundant target variables."""
        names = self.target.moving_names
        return [(k + 1, self.substitution[names[k]]) for k in range(self.m, self.n)]


def chart_map_images(emb: EmbeddingMap, i: int) -> dict[str, Polynomial]:
    """Images of the target chart coordinates in source chart ``i``: v_j -> v_j
    for j <= m, v_{m+k} -> bl_i(h_k), zeta -> zeta."""
    ring = emb.source.chart_variables(i)
    out = {v: Polynomial.variable(v, ring) for v in ring}
    for idx, h in emb.redundant_images():
        out[chart_coordinate(idx)] = bl(h, emb.source, i)
    return out


def embedding_inclusions(
    emb: EmbeddingMap, i: int, truncation: int = DEFAULT_TRUNCATION, exact: bool = True
) -> tuple[bool, bool]:
    """(source chart ideal inside target chart ideal, target chart ideal
    pulled back inside source chart ideal) for chart ``i <= m``."""
    if not 1 <= i <= emb.m:
        raise InputError(f"chart {i} is not one of the source charts 1..{emb.m}")
    src = blowup_chart(emb.source, i, truncation, exact=exact)
    tgt = blowup_chart(emb.target, i, truncation, exact=exact)
    forward = tgt.contains_all(
        g.with_variables(merge_variables(g.variables, tgt.chart_vars)).drop_unused() for g in src.full_generators
    )
    images = chart_map_images(emb, i)
    pulled = [g.substitute(images, retain=()) for g in tgt.full_generators]
    backward = src.contains_all(pulled)
    return forward, backward


def embedding_independence_check(emb: EmbeddingMap, i: int, truncation: int = DEFAULT_TRUNCATION) -> bool:
    """Chart ``i`` of the blow-up does not depend on the chosen embedding."""
    forward, backward = embedding_inclusions(emb, i, truncation)
    return forward and backward


def chart_cover_check(emb: EmbeddingMap, truncation: int = DEFAULT_TRUNCATION, exact: bool = True) -> bool:
    """The redundant charts m+1..n add nothing: each chart ideal plus
    (v_1, ..., v_m) is the unit ideal."""
    for idx in range(emb.m + 1, emb.n + 1):
        chart = blowup_chart(emb.target, idx, truncation, exact=exact)
        ring = chart.chart_vars
        extra = [Polynomial.variable(chart_coordinate(k), ring) for k in range(1, emb.m + 1)]
        if not chart.with_extra(extra).contains(Polynomial.constant(1, ring)):
            return False
    return True


def chart_transition(p, data: GradedAffineData, source_chart: int, target_chart: int) -> RationalFunction:
    """Rewrite a function on chart ``source_chart`` in the coordinates of
    ``target_chart`` on their overlap: v'_k = v_k / v_j, zeta' = v_j zeta
    (j = source_chart), with v_i = 1 for i = target_chart."""
    j, i = source_chart, target_chart
    ring = data.chart_variables(i)
    vj = Polynomial.variable(chart_coordinate(j), ring)
    bindings: dict[str, object] = {u: Polynomial.variable(u, ring) for u in data.invariant_vars}
    for k in range(1, len(data.moving_vars) + 1):
        if k == j:
            continue
        if k == i:
            bindings[chart_coordinate(k)] = RationalFunction(1, vj)
        else:
            bindings[chart_coordinate(k)] = RationalFunction(Polynomial.variable(chart_coordinate(k), ring), vj)
    bindings[ZETA] = vj * Polynomial.variable(ZETA, ring)
    if isinstance(p, RationalFunction):
        return substitute_rational(p.numerator, bindings) / substitute_rational(p.denominator, bindings)
    return substitute_rational(p, bindings)
