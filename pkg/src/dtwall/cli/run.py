"""Job validation, dispatch and report rendering."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

import jsonschema

from .. import verify as sweeps
from ..blowup import (
    DEFAULT_TRUNCATION,
    ZETA,
    EmbeddingMap,
    GradedAffineData,
    blowup_chart,
    chart_cover_check,
    embedding_inclusions,
)
from ..cosection import (
    DEFAULT_ARC_TRUNCATION,
    DEFAULT_MARGIN,
    Arc,
    OneForm,
    almost_closed_check,
    arc_order_test,
    chart_cosection_report,
    cosection_numerator,
)
from ..equivariant import WeightVector, component_contributions
from ..errors import DTWallError, InputError, TruncationInconclusive, VerificationError
from ..exact.polynomial import as_fraction, format_fraction
from ..exact.series import LaurentSeries
from ..wallcross import (
    CorollaryInput,
    FixedLocusData,
    LinearFlipInput,
    corollary_dt,
    lambda_by_substitution,
    lambda_closed,
    lambda_derivative_form,
    lambda_localized,
    lambda_residue_chain,
    linear_flip_oracle,
    wallcross_total,
)
from .parser import parse_expression, print_expression

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_TRUNCATION = 3

SCHEMA_FILE = "job.schema.json"


@lru_cache(maxsize=1)
def load_schema() -> dict:
    return json.loads(resources.files(__package__).joinpath(SCHEMA_FILE).read_text(encoding="utf-8"))


def _location(error: jsonschema.ValidationError) -> str:
    path = "$"
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def validate_job(doc: Any) -> dict:
    """Schema validation; raises InputError naming the offending location."""
    validator = jsonschema.Draft202012Validator(load_schema())
    error = jsonschema.exceptions.best_match(validator.iter_errors(doc))
    if error is not None:
        raise InputError(f"schema violation at {_location(error)}: {error.message}")
    return doc


def render_value(value) -> Any:
    """JSON-safe rendering with exact rationals as 'p/q' strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, float):
        return "inf" if value == float("inf") else repr(value)
    if isinstance(value, LaurentSeries):
        return str(value)
    if isinstance(value, dict):
        return {str(k): render_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render_value(v) for v in value]
    return value


def _text(value) -> str:
    value = render_value(value)
    if isinstance(value, str):
        return value
    return json.dumps(value, separators=(", ", ": "))


@dataclass
class Report:
    command: str
    fields: dict = field(default_factory=dict)
    exit_code: int = EXIT_OK
    timing: float = 0.0

    def status(self) -> str:
        return {EXIT_OK: "ok", EXIT_INPUT: "invalid-input", EXIT_VERIFY: "verification-failure",
                EXIT_TRUNCATION: "truncation-inconclusive"}[self.exit_code]

    def text(self) -> str:
        lines = [f"command: {self.command}"]
        lines += [f"{k}: {_text(v)}" for k, v in self.fields.items()]
        lines.append(f"status: {self.status()}")
        lines.append(f"exit_code: {self.exit_code}")
        lines.append(f"timing: {self.timing:.6f}s")
        return "\n".join(lines)

    def as_json(self) -> dict:
        return {
            "command": self.command,
            "result": render_value(self.fields),
            "status": self.status(),
            "exit_code": self.exit_code,
            "timing_seconds": round(self.timing, 6),
        }


@dataclass(frozen=True)
class Context:
    seed: int = 0
    truncation: int | None = None
    workers: int | None = None


@contextmanager
def _at(where: str):
    """Prefix input errors raised while reading a field with its JSON location."""
    try:
        yield
    except TruncationInconclusive:
        raise
    except (DTWallError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid input at {where}: {exc}") from exc


def _weights(pairs, where: str = "$.weights") -> WeightVector:
    with _at(where):
        return WeightVector([(as_fraction(w), n) for w, n in pairs])


def _expressions(texts, names, where: str) -> tuple:
    out = []
    for k, text in enumerate(texts):
        with _at(f"{where}[{k}]"):
            out.append(parse_expression(text, names))
    return tuple(out)


def _verdict(ok: bool) -> int:
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_lambda(job: dict, ctx: Context) -> tuple[dict, int]:
    W = _weights(job["weights"])
    method = job.get("method", "both")
    out: dict = {"weights": W.pairs(), "method": method}
    if method == "closed":
        out["lambda"] = lambda_closed(W)
        return out, EXIT_OK
    if method == "localized":
        out["lambda"] = lambda_localized(W)
        return out, EXIT_OK
    closed, localized = lambda_closed(W), lambda_localized(W)
    out.update({"lambda": closed, "closed": closed, "localized": localized,
                "verdict": "agree" if closed == localized else "disagree"})
    return out, _verdict(closed == localized)


def cmd_lambda_residue(job: dict, ctx: Context) -> tuple[dict, int]:
    W = _weights(job["weights"])
    contributions = component_contributions(W)
    moving, at_zero = lambda_residue_chain(W)
    values = {
        "closed": lambda_closed(W),
        "localized": sum((s.coefficient(-1) for s in contributions.values()), Fraction(0)),
        "substitution": lambda_by_substitution(W),
        "residue_chain_moving": moving,
        "residue_chain_at_zero": at_zero,
        "derivative": lambda_derivative_form(W),
    }
    ok = len(set(values.values())) == 1
    out = {"weights": W.pairs(),
           "contributions": {format_fraction(j): str(s) for j, s in contributions.items()}}
    out.update(values)
    out["verdict"] = "agree" if ok else "disagree"
    return out, _verdict(ok)


def cmd_wallcross(job: dict, ctx: Context) -> tuple[dict, int]:
    points = []
    for k, p in enumerate(job["points"]):
        with _at(f"$.points[{k}].a"):
            a = as_fraction(p["a"])
        points.append((a, _weights(p["weights"], f"$.points[{k}].weights")))
    with _at("$.points"):
        data = FixedLocusData(points)
    method = job.get("method", "closed")
    total = wallcross_total(data, method)
    lambdas = [lambda_closed(W) for _, W in data.points]
    return {"points": len(data.points), "degree": data.degree, "lambdas": lambdas, "method": method,
            "delta": total}, EXIT_OK


def cmd_corollary(job: dict, ctx: Context) -> tuple[dict, int]:
    with _at("$"):
        c = CorollaryInput(job["ext21"], job["ext12"], job["nu"], job.get("degM1", 1), job.get("degM2", 1))
    res = corollary_dt(c, job.get("method", "closed"))
    return {"chi": c.chi, "weights": c.weights.pairs(), "engine": res.engine_side, "closed": res.closed_side,
            "verdict": "match" if res.match else "mismatch"}, _verdict(res.match)


def cmd_linear_flip(job: dict, ctx: Context) -> tuple[dict, int]:
    with _at("$"):
        inp = LinearFlipInput(job["n_plus"], job["n_minus"], job["n_zero"])
    res = linear_flip_oracle(inp)
    return {"degMplus": res.degMplus, "degMminus": res.degMminus, "degXT": res.degXT, "delta": res.delta,
            "predicted": res.predicted, "verdict": "match" if res.match else "mismatch"}, _verdict(res.match)


def _graded_data(variables: dict, generators=()) -> GradedAffineData:
    invariant = tuple(variables.get("invariant", ()))
    with _at("$.variables"):
        moving = tuple((name, as_fraction(w)) for name, w in variables["moving"])
        GradedAffineData(invariant, moving)
    names = invariant + tuple(name for name, _ in moving)
    gens = _expressions(generators, names, "$.generators")
    with _at("$.generators"):
        return GradedAffineData(invariant, moving, gens)


def _truncation(ctx: Context, job: dict, default: int) -> int:
    if ctx.truncation is not None:
        return ctx.truncation
    return job.get("truncation", default)


def cmd_blowup(job: dict, ctx: Context) -> tuple[dict, int]:
    data = _graded_data(job["variables"], job["generators"])
    n = _truncation(ctx, job, DEFAULT_TRUNCATION)
    charts = job.get("charts") or list(range(1, len(data.moving_vars) + 1))
    for k, i in enumerate(charts):
        if i > len(data.moving_vars):
            raise InputError(f"invalid input at $.charts[{k}]: chart {i} exceeds the {len(data.moving_vars)} moving coordinates")
    strict = job.get("strict_local", False)
    exact = job.get("membership", "exact") == "exact"
    out: dict = {"variables": list(data.variables), "truncation": n, "strict_local": strict}
    for i in charts:
        ideal = blowup_chart(data, i, n, strict, exact)
        out[f"chart {i} variables"] = list(ideal.chart_vars)
        out[f"chart {i}"] = sorted(print_expression(g, ideal.chart_vars) for g in ideal.generators)
    code = EXIT_OK
    if "embedding" in job:
        embedding = job["embedding"]
        extra = []
        for k, (name, w, h) in enumerate(embedding["extra"]):
            with _at(f"$.embedding.extra[{k}]"):
                extra.append((name, as_fraction(w), parse_expression(h, data.variables)))
        with _at("$.embedding"):
            emb = EmbeddingMap.from_relations(data, extra, embedding.get("target_names"))
        inclusions = {i: embedding_inclusions(emb, i, n, exact) for i in range(1, emb.m + 1)}
        cover = chart_cover_check(emb, n, exact)
        ok = cover and all(a and b for a, b in inclusions.values())
        out["embedding target"] = list(emb.target.moving_names)
        out["embedding independence"] = {i: list(v) for i, v in inclusions.items()}
        out["chart cover"] = cover
        out["verdict"] = "pass" if ok else "fail"
        code = _verdict(ok)
    return out, code


def _arc_location(k: int, given: int) -> str:
    return f"$.arcs[{k}]" if k < given else f"random arc {k - given}"


def cmd_cosection(job: dict, ctx: Context) -> tuple[dict, int]:
    data = _graded_data(job["variables"])
    names = data.variables
    alpha = _expressions(job.get("alpha", ()), names, "$.alpha")
    f = _expressions(job["f"], names, "$.f")
    with _at("$"):
        w = OneForm(data, alpha, f)
    n = _truncation(ctx, job, 16)
    arc_n = job.get("arc_truncation", DEFAULT_ARC_TRUNCATION)
    margin = job.get("margin", DEFAULT_MARGIN)
    chart = job.get("chart")
    closed = almost_closed_check(w, n, job.get("membership", "exact") == "exact")
    out: dict = {"variables": list(names), "F": print_expression(cosection_numerator(w), names),
                 "almost_closed": closed}
    arcs = []
    for k, a in enumerate(job.get("arcs", ())):
        with _at(f"$.arcs[{k}]"):
            arcs.append(Arc(a, arc_n))
    samples = job.get("samples", 0)
    given = len(arcs)
    if chart is not None:
        ideal_data = w.ideal_data()
        with _at("$.chart"):
            if chart > len(ideal_data.moving_vars):
                raise InputError(f"chart {chart} exceeds the {len(ideal_data.moving_vars)} moving coordinates")
            ring = ideal_data.chart_variables(chart)
        free = [v for v in ring if v != ZETA and v not in ideal_data.invariant_vars]
        arcs += [Arc.random(ring, ctx.seed, k, arc_n, free=free) for k in range(samples)]
        reports = []
        for k, arc in enumerate(arcs):
            with _at(_arc_location(k, given)):
                reports.append(chart_cosection_report(w, arc, chart, ideal_data, n, margin))
        rows = [r.as_dict() for r in reports]
        failures = [k for k, r in enumerate(reports) if not r.passed]
    else:
        arcs += [Arc.random(names, ctx.seed, k, arc_n) for k in range(samples)]
        reports = []
        for k, arc in enumerate(arcs):
            with _at(_arc_location(k, given)):
                reports.append(arc_order_test(w, arc, margin))
        rows = [r.as_dict() for r in reports]
        failures = [k for k, r in enumerate(reports) if not r.bound_ok]
    out["seed"] = ctx.seed
    for k, row in enumerate(rows):
        out[f"arc {k}"] = row
    out["arcs"] = len(rows)
    out["violations"] = failures
    ok = closed and not failures
    out["verdict"] = "pass" if ok else ("not almost closed" if not closed else "order bound violated")
    return out, _verdict(ok)


def _verify_cases(job: dict, ctx: Context) -> tuple[Callable, list]:
    mode = job["mode"]
    if mode == "lambda-agreement":
        return sweeps.lambda_agreement_case, sweeps.weight_cases(job.get("weight_range", 3), job.get("max_total", 6))
    if mode == "homogeneity":
        return sweeps.homogeneity_case, sweeps.weight_cases(job.get("weight_range", 3), job.get("max_total", 6))
    if mode == "two-weight":
        n = job.get("n_max", 6)
        return sweeps.two_weight_case, [(a, b) for a in range(1, n + 1) for b in range(1, n + 1)]
    if mode == "linear-flip":
        n = job.get("n_max", 4)
        return sweeps.linear_flip_case, [(a, b, c) for a in range(1, n + 1) for b in range(1, n + 1) for c in range(1, n + 1)]
    if mode == "corollary":
        return sweeps.corollary_case, sweeps.corollary_grid()
    if mode == "residue-sum":
        return sweeps.residue_sum_case, [(ctx.seed, k) for k in range(job.get("samples", 50))]
    if mode == "parser-roundtrip":
        return sweeps.parser_roundtrip_case, [(ctx.seed, k) for k in range(job.get("samples", 200))]
    if mode == "embedding-fixtures":
        from ..fixtures import embedding_fixtures

        return sweeps.embedding_fixture_case, sorted(embedding_fixtures())
    if mode == "cosection-fixtures":
        return sweeps.cosection_fixture_case, sweeps.cosection_cases(ctx.seed, job.get("samples", 100))
    raise InputError(f"unknown verify mode {mode!r}")


def cmd_verify(job: dict, ctx: Context) -> tuple[dict, int]:
    fn, cases = _verify_cases(job, ctx)
    results = sweeps.map_cases(fn, cases, ctx.workers)
    total, failures = sweeps.summarize(results)
    out: dict = {"mode": job["mode"], "seed": ctx.seed, "cases": total, "failures": len(failures)}
    if failures:
        out["result"] = f"{len(failures)} of {total} cases disagree"
        out["first failures"] = failures[:5]
    else:
        out["result"] = f"all {total} cases agree"
    return out, _verdict(not failures)


COMMANDS: dict[str, Callable[[dict, Context], tuple[dict, int]]] = {
    "lambda": cmd_lambda,
    "lambda-residue": cmd_lambda_residue,
    "wallcross": cmd_wallcross,
    "corollary": cmd_corollary,
    "linear-flip": cmd_linear_flip,
    "blowup": cmd_blowup,
    "cosection": cmd_cosection,
    "verify": cmd_verify,
}


def run(job: Any, seed: int | None = None, truncation: int | None = None, workers: int | None = None) -> Report:
    """Validate and execute one job document. Never raises for bad input;
    the outcome is encoded in ``Report.exit_code``."""
    start = time.perf_counter()
    command = job.get("command", "?") if isinstance(job, dict) else "?"
    report = Report(str(command))
    try:
        report.fields["input"] = json.dumps(job, sort_keys=True, separators=(",", ":"))
    except (TypeError, ValueError):
        report.fields["input"] = repr(job)
    try:
        validate_job(job)
        ctx = Context(seed if seed is not None else job.get("seed", 0), truncation, workers)
        fields, report.exit_code = COMMANDS[job["command"]](job, ctx)
        report.fields.update(fields)
    except TruncationInconclusive as exc:
        report.fields["error"] = str(exc)
        report.exit_code = EXIT_TRUNCATION
    except VerificationError as exc:
        report.fields["error"] = str(exc)
        report.exit_code = EXIT_VERIFY
    except (DTWallError, ValueError, ZeroDivisionError) as exc:
        report.fields["error"] = str(exc)
        report.exit_code = EXIT_INPUT
    report.timing = time.perf_counter() - start
    return report
