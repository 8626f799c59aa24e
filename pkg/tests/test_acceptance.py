"""Acceptance criteria, all exact with zero tolerance.

Each test prints one ``[criterion N] PASS|FAIL`` line, also when output
capture is on.
"""

from __future__ import annotations

import json
import os
import re
from fractions import Fraction

import jsonschema
import pytest

from dtwall import verify as sweeps
from dtwall.blowup import chart_cover_check, embedding_independence_check
from dtwall.cli import run, validate_job
from dtwall.cli.run import load_schema
from dtwall.cosection import chart_arc_harness
from dtwall.equivariant import WeightVector
from dtwall.exact import RationalFunction, format_polynomial, residue, symbols
from dtwall.fixtures import (
    CHART_FIXTURE,
    CHART_INDEX,
    almost_closed_fixtures,
    embedding_fixtures,
    redundant_presentations,
)
from dtwall.wallcross import lambda_closed, lambda_residue_chain

SEED = 20240601
WORKERS = min(4, os.cpu_count() or 1)


@pytest.fixture
def announce(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {title} ({detail})")

    return emit


def test_criterion_1_localization_matches_closed_form(announce):
    cases = sweeps.weight_cases(3, 6)
    total, failures = sweeps.summarize(sweeps.map_cases(sweeps.lambda_agreement_case, cases, WORKERS))
    ok = total == 923 and not failures
    announce(1, "localized = closed form, weights in +-1..+-3, total <= 6", ok,
             f"{total - len(failures)}/{total} cases agree")
    assert total == 923
    assert failures == []


def test_criterion_2_two_weight_specialization(announce):
    cases = [(a, b) for a in range(1, 7) for b in range(1, 7)]
    total, failures = sweeps.summarize(sweeps.two_weight_case(c) for c in cases)
    announce(2, "two-weight formula, 1 <= n+, n- <= 6", not failures, f"{total - len(failures)}/{total} cases")
    assert total == 36 and failures == []


def test_criterion_3_linear_flip_identity(announce):
    cases = [(a, b, c) for a in range(1, 5) for b in range(1, 5) for c in range(1, 5)]
    total, failures = sweeps.summarize(sweeps.linear_flip_case(c) for c in cases)
    example = sweeps.linear_flip_case((2, 1, 1))
    ok = not failures and example["delta"] == example["predicted"] == 1
    announce(3, "linear flip delta = lambda * Euler degree, n <= 4", ok, f"{total - len(failures)}/{total} cases")
    assert total == 64 and failures == []
    assert example["delta"] == 1


def test_criterion_4_corollary_identity(announce):
    cases = sweeps.corollary_grid()
    total, failures = sweeps.summarize(sweeps.map_cases(sweeps.corollary_case, cases, WORKERS))
    announce(4, "corollary engine side = closed side", not failures, f"{total - len(failures)}/{total} cases")
    assert total == 35 * 6 * 9
    assert failures == []


def test_criterion_5_component_integrals_are_single_poles(announce):
    cases = sweeps.weight_cases(3, 6)
    total, failures = sweeps.summarize(sweeps.map_cases(sweeps.homogeneity_case, cases, WORKERS))
    announce(5, "each component integral is exactly c_j / t", not failures, f"{total - len(failures)}/{total} cases")
    assert total == 923 and failures == []


def test_criterion_6_blowup_embedding_independence(announce):
    fixtures = embedding_fixtures()
    checks = {}
    for name, emb in fixtures.items():
        charts = [embedding_independence_check(emb, i, 16) for i in range(1, emb.m + 1)]
        checks[name] = all(charts) and chart_cover_check(emb, 16)
    redundant = {name: sweeps.redundant_presentation_case(name)["ok"] for name in redundant_presentations()}
    double_point = fixtures["double-point"]
    pair = sorted(format_polynomial(g) for g in double_point.target.generators)
    ok = len(fixtures) == 3 and all(checks.values()) and all(redundant.values()) and pair == ["-y1 + y2", "y1^2"]
    announce(6, "embedding independence and chart cover at truncation 16", ok,
             f"{sum(checks.values())}/{len(checks)} embeddings, {sum(redundant.values())}/{len(redundant)} presentations")
    assert len(fixtures) == 3
    assert checks == {name: True for name in fixtures}
    assert redundant == {name: True for name in redundant}
    assert [format_polynomial(g) for g in double_point.source.generators] == ["x1^2"]
    assert pair == ["-y1 + y2", "y1^2"]


def test_criterion_7_cosection_order_bound(announce):
    fixtures = almost_closed_fixtures()
    results = sweeps.map_cases(sweeps.cosection_fixture_case, sweeps.cosection_cases(SEED, 100, 32), WORKERS)
    arcs = sum(r["arcs"] for r in results)
    violations = sum(len(r["violations"]) for r in results)
    closed = all(r["almost_closed"] for r in results)
    chart = chart_arc_harness(fixtures[CHART_FIXTURE], CHART_INDEX, 100, SEED, 32)
    chart_failures = [k for k, r in chart if not r.passed]
    ok = closed and violations == 0 and len(chart) == 100 and not chart_failures
    announce(7, "ordF >= a + b + 1 on 100 arcs per fixture, chart test on 100 arcs", ok,
             f"{arcs} arcs, {violations} violations, {len(chart_failures)} chart failures")
    assert closed
    assert arcs == 100 * len(fixtures)
    assert violations == 0
    assert len(chart) == 100 and chart_failures == []


def test_criterion_8_residue_calculus(announce):
    results = [sweeps.residue_sum_case((SEED, k)) for k in range(50)]
    sums_ok = all(r["ok"] for r in results)
    (z,) = symbols("z")
    r = residue(RationalFunction(z - 1, 2 * z**2 * (z + 1)), "z", -1)
    moving, at_zero = lambda_residue_chain(WeightVector({1: 1}))
    lam = lambda_closed(WeightVector({1: 1}))
    ok = sums_ok and r == -1 and moving == at_zero == lam == 1
    announce(8, "residue sums vanish, res_{z=-1} = -1, chain total = lambda = 1", ok,
             f"{sum(x['ok'] for x in results)}/50 sums, res = {r}, chain = {moving}")
    assert sums_ok
    assert r == Fraction(-1)
    assert moving == at_zero == lam == 1


def _strip_timing(text: str) -> str:
    return re.sub(r"^timing: .*$", "", text, flags=re.M)


def test_criterion_9_cli_round_trips_and_determinism(announce):
    jsonschema.Draft202012Validator.check_schema(load_schema())
    jobs = [
        {"command": "lambda", "weights": [["1", 2], ["-1", 1]]},
        {"command": "corollary", "ext21": 2, "ext12": 1, "nu": 3, "degM1": "1", "degM2": "1"},
        {"command": "blowup", "variables": {"moving": [["x1", 1]]}, "generators": ["x1^2"],
         "embedding": {"extra": [["y2", "1", "x1"]]}},
        {"command": "cosection", "variables": {"moving": [["x1", 1], ["x2", -1]]},
         "f": ["2*x1*x2^2 + x1^2*x2^3", "2*x1^2*x2"], "samples": 10, "seed": SEED, "chart": 1},
    ]
    schema_ok = all(validate_job(json.loads(json.dumps(job))) == job for job in jobs)
    reports = [(run(job), run(json.loads(json.dumps(job)))) for job in jobs]
    echo_ok = all(json.loads(a.fields["input"]) == job for job, (a, _) in zip(jobs, reports))
    deterministic = all(
        a.exit_code == b.exit_code == 0 and _strip_timing(a.text()) == _strip_timing(b.text()) for a, b in reports
    )
    parser = [sweeps.parser_roundtrip_case((SEED, k)) for k in range(200)]
    parser_ok = all(p["ok"] for p in parser)
    ok = schema_ok and echo_ok and deterministic and parser_ok
    announce(9, "schema round trip, 200 parser round trips, deterministic reports", ok,
             f"{sum(p['ok'] for p in parser)}/200 polynomials")
    assert schema_ok and echo_ok
    assert deterministic
    assert parser_ok
