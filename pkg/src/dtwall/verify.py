"""Verification sweeps shared by the CLI ``verify`` command and the test suite.

Every case function is a top-level callable on plain data, so sweeps can be
fanned out to worker processes and collected in case order.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .blowup import blowup_chart, chart_cover_check, embedding_inclusions
from .cosection import (
    DEFAULT_ARC_TRUNCATION,
    almost_closed_check,
    arc_harness,
    chart_arc_harness,
)
from .equivariant import WeightVector, component_contributions
from .exact import Polynomial, RationalFunction, residue_sum_check
from .exact.polynomial import format_fraction
from .wallcross import (
    CorollaryInput,
    LinearFlipInput,
    corollary_dt,
    enumerate_weight_vectors,
    euler_omega_degree,
    lambda_closed,
    lambda_localized,
    linear_flip_oracle,
)

COROLLARY_DEGREES = (Fraction(1), Fraction(-2), Fraction(3, 2))


def map_cases(fn: Callable, cases: Sequence, workers: int | None = None) -> list:
    """``[fn(c) for c in cases]``, optionally on a process pool (order kept)."""
    if not workers or workers <= 1 or len(cases) < 2:
        return [fn(c) for c in cases]
    from concurrent.futures import ProcessPoolExecutor

    chunk = max(1, len(cases) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cases, chunksize=chunk))


def weight_cases(weight_range: int, max_total: int) -> list[tuple[tuple[int, int], ...]]:
    return [tuple((int(w), n) for w, n in W.items()) for W in enumerate_weight_vectors(weight_range, max_total)]


def lambda_agreement_case(pairs) -> dict:
    W = WeightVector(pairs)
    closed, localized = lambda_closed(W), lambda_localized(W)
    return {"weights": W.pairs(), "closed": closed, "localized": localized, "ok": closed == localized}


def homogeneity_case(pairs) -> dict:
    """Each component integral is an exact single term c_j / t."""
    W = WeightVector(pairs)
    bad = []
    for j, series in component_contributions(W).items():
        if not series.exact or any(deg != -1 for deg, _ in series.terms()):
            bad.append(format_fraction(j))
    return {"weights": W.pairs(), "bad_components": bad, "ok": not bad}


def two_weight_case(pair: tuple[int, int]) -> dict:
    n_plus, n_minus = pair
    W = WeightVector({1: n_plus, -1: n_minus})
    expected = Fraction((-1) ** (n_plus + n_minus - 1) * (n_plus - n_minus))
    closed, localized = lambda_closed(W), lambda_localized(W)
    return {"weights": W.pairs(), "expected": expected, "closed": closed, "localized": localized,
            "ok": closed == expected == localized}


def linear_flip_case(triple: tuple[int, int, int]) -> dict:
    res = linear_flip_oracle(LinearFlipInput(*triple))
    # the identity is checked against an independent evaluation of the right side
    rhs = lambda_closed(WeightVector({1: triple[0], -1: triple[1]})) * euler_omega_degree([triple[2] - 1])
    return {"n": list(triple), "delta": res.delta, "predicted": rhs, "ok": res.delta == rhs == res.predicted}


def corollary_case(args) -> dict:
    ext21, ext12, nu, d1, d2 = args
    res = corollary_dt(CorollaryInput(ext21, ext12, nu, d1, d2))
    return {"input": [ext21, ext12, nu, format_fraction(d1), format_fraction(d2)],
            "engine": res.engine_side, "closed": res.closed_side, "ok": res.match}


def corollary_grid() -> list[tuple]:
    return [
        (e21, e12, nu, d1, d2)
        for e21 in range(6)
        for e12 in range(6)
        if e21 or e12
        for nu in range(1, 7)
        for d1 in COROLLARY_DEGREES
        for d2 in COROLLARY_DEGREES
    ]


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_rational_function(rng: random.Random, variable: str = "z") -> RationalFunction:
    """Numerator of degree <= deg(denominator) - 2, poles in -3..3."""
    ring = (variable,)
    z = Polynomial.variable(variable, ring)
    den = Polynomial.constant(random_rational(rng) or 1, ring)
    degree = 0
    for pole in rng.sample(range(-3, 4), rng.randint(1, 4)):
        mult = rng.randint(1, 3)
        den = den * (z - pole) ** mult
        degree += mult
    if degree < 2:
        den = den * (z - rng.randint(-3, 3))
        degree += 1
    num = Polynomial(ring, {(k,): random_rational(rng) for k in range(degree - 1)})
    return RationalFunction(num, den)


def residue_sum_case(seed_index: tuple[int, int]) -> dict:
    seed, index = seed_index
    rng = random.Random(seed * 1_000_003 + index)
    f = random_rational_function(rng)
    total = residue_sum_check(f, "z")
    return {"index": index, "function": str(f), "sum": total, "ok": total == 0}


PARSER_VARIABLES = ("u", "x1", "x2", "x3", "x10")


def random_polynomial(rng: random.Random, variables: Sequence[str] = PARSER_VARIABLES) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0, 6)):
        exps = tuple(rng.choice((0, 0, 0, 1, 2, 3, 7)) for _ in variables)
        terms[exps] = terms.get(exps, 0) + random_rational(rng, 12)
    return Polynomial(variables, terms)


def parser_roundtrip_case(seed_index: tuple[int, int]) -> dict:
    from .cli.parser import parse_expression, print_expression

    seed, index = seed_index
    p = random_polynomial(random.Random(seed * 1_000_003 + index))
    text = print_expression(p, PARSER_VARIABLES)
    back = parse_expression(text, PARSER_VARIABLES)
    again = print_expression(back, PARSER_VARIABLES)
    return {"index": index, "text": text, "ok": back == p and again == text}


def embedding_fixture_case(name: str, truncation: int = 16) -> dict:
    from .fixtures import embedding_fixtures

    emb = embedding_fixtures()[name]
    charts = {i: embedding_inclusions(emb, i, truncation) for i in range(1, emb.m + 1)}
    cover = chart_cover_check(emb, truncation)
    ok = all(f and b for f, b in charts.values()) and cover
    return {"fixture": name, "charts": {i: list(v) for i, v in charts.items()}, "cover": cover, "ok": ok}


def redundant_presentation_case(name: str, truncation: int = 16) -> dict:
    """A generator from the ideal added to the presentation leaves every chart ideal unchanged."""
    from .fixtures import redundant_presentations

    data, redundant = redundant_presentations()[name]
    same = [
        blowup_chart(data, i, truncation).same_ideal(blowup_chart(redundant, i, truncation))
        for i in range(1, len(data.moving_vars) + 1)
    ]
    return {"fixture": name, "charts_equal": same, "ok": all(same)}


def cosection_fixture_case(args) -> dict:
    from .fixtures import CHART_FIXTURE, CHART_INDEX, almost_closed_fixtures

    name, seed, samples, truncation = args
    w = almost_closed_fixtures()[name]
    closed = almost_closed_check(w)
    reports = arc_harness(w, samples, seed, truncation)
    violations = [i for i, r in reports if not r.bound_ok]
    out = {"fixture": name, "almost_closed": closed, "arcs": samples, "violations": violations,
           "caveats": sum(r.caveat for _, r in reports)}
    if name == CHART_FIXTURE:
        chart_reports = chart_arc_harness(w, CHART_INDEX, samples, seed, truncation)
        out["chart_violations"] = [i for i, r in chart_reports if not r.passed]
    out["ok"] = closed and not violations and not out.get("chart_violations")
    return out


def cosection_cases(seed: int, samples: int = 100, truncation: int = DEFAULT_ARC_TRUNCATION) -> list[tuple]:
    from .fixtures import almost_closed_fixtures

    return [(name, seed, samples, truncation) for name in almost_closed_fixtures()]


def summarize(results: Iterable[dict]) -> tuple[int, list[dict]]:
    results = list(results)
    return len(results), [r for r in results if not r["ok"]]
