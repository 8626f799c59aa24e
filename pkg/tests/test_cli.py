from __future__ import annotations

import json
import random
import re
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtwall.cli import ExpressionError, parse_expression, print_expression, run, validate_job
from dtwall.cli.__main__ import main
from dtwall.cli.run import load_schema
from dtwall.errors import InputError
from dtwall.exact import Polynomial, symbols
from dtwall.verify import PARSER_VARIABLES, parser_roundtrip_case, random_polynomial

NEGATIVE = json.loads((Path(__file__).parent / "data" / "negative_jobs.json").read_text())
x1, x2 = symbols("x1", "x2")


def strip_timing(text: str) -> str:
    return re.sub(r"^timing: .*$", "timing: -", text, flags=re.M)


# -- parser ----------------------------------------------------------------


def test_parser_examples():
    assert parse_expression("x1^2 + x2^3") == x1**2 + x2**3
    assert parse_expression("1/2 * x1*x2 - x1*x2") == (x1 * x2).scale(Fraction(-1, 2))
    with pytest.raises(ExpressionError, match="integer literal"):
        parse_expression("x1^(2)")


def test_parser_precedence():
    assert parse_expression("-x1^2") == -(x1**2)
    assert parse_expression("2^3^2") == Polynomial.constant(2**9)
    assert parse_expression("(x1 + 1)^2 * 3") == (x1 + 1) ** 2 * 3
    assert parse_expression("x1 - x2 - x1") == -x2
    assert parse_expression("- -x1") == x1


@pytest.mark.parametrize(
    "text, position, message",
    [
        ("x1 + ", 5, "end of input"),
        ("x1^-1", 3, "negative exponent"),
        ("x1^1/2", 3, "non-integer exponent"),
        ("3/0", 0, "zero denominator"),
        ("x1 $ x2", 3, "unexpected character"),
        ("(x1 + x2", 8, "expected ')'"),
        ("x1 x2", 3, "unexpected 'x2'"),
        ("", 0, "empty expression"),
        ("x1^99999", 3, "too large"),
    ],
)
def test_parser_errors_carry_position(text, position, message):
    with pytest.raises(ExpressionError, match=re.escape(message)) as info:
        parse_expression(text)
    assert info.value.position == position


def test_undeclared_identifier():
    with pytest.raises(ExpressionError, match="undeclared identifier 'y'"):
        parse_expression("x1 + y", ("x1",))
    with pytest.raises(InputError):
        parse_expression(3)


def test_printing_is_canonical():
    p = parse_expression("x1 + x2^3 + 3 + x1^2*x2 - 1/2*x1*x2 + x1*x2")
    assert print_expression(p) == "x1^2*x2 + x2^3 + 1/2*x1*x2 + x1 + 3"
    assert print_expression(Polynomial.constant(0)) == "0"
    with pytest.raises(InputError):
        print_expression(p, ("x1",))


coefficients = st.fractions(max_denominator=20).filter(lambda c: abs(c) < 1000)
monomials = st.tuples(*[st.integers(0, 4) for _ in PARSER_VARIABLES])


@given(st.dictionaries(monomials, coefficients, max_size=6))
def test_print_parse_fixed_point(terms):
    p = Polynomial(PARSER_VARIABLES, terms)
    text = print_expression(p, PARSER_VARIABLES)
    back = parse_expression(text, PARSER_VARIABLES)
    assert back == p
    assert print_expression(back, PARSER_VARIABLES) == text


def test_generated_polynomials_roundtrip():
    results = [parser_roundtrip_case((3, k)) for k in range(50)]
    assert all(r["ok"] for r in results)
    p = random_polynomial(random.Random(1))
    assert parse_expression(print_expression(p, PARSER_VARIABLES), PARSER_VARIABLES) == p


# -- schema and run ---------------------------------------------------------


VALID_JOBS = [
    {"command": "lambda", "weights": [["1", 2], ["-1", 1]]},
    {"command": "lambda-residue", "weights": [["2", 1], ["-1", 2]]},
    {"command": "wallcross", "points": [{"a": "1/2", "weights": [["1", 1], ["-1", 1]]}], "method": "both"},
    {"command": "corollary", "ext21": 2, "ext12": 1, "nu": 3, "degM1": "1", "degM2": "1"},
    {"command": "linear-flip", "n_plus": 2, "n_minus": 1, "n_zero": 1},
    {"command": "blowup", "variables": {"moving": [["x1", 1]]}, "generators": ["x1^2"],
     "embedding": {"extra": [["y2", "1", "x1"]]}},
    {"command": "cosection", "variables": {"moving": [["x1", 1], ["x2", -1]]},
     "f": ["2*x1*x2^2 + x1^2*x2^3", "2*x1^2*x2"], "samples": 5, "seed": 4},
    {"command": "verify", "mode": "two-weight", "n_max": 3},
]


def test_schema_is_valid_draft_2020_12():
    jsonschema.Draft202012Validator.check_schema(load_schema())
    assert load_schema()["version"] == "1.0.0"


@pytest.mark.parametrize("job", VALID_JOBS, ids=[j["command"] for j in VALID_JOBS])
def test_schema_round_trip(job):
    text = json.dumps(job)
    assert validate_job(json.loads(text)) == job
    report = run(json.loads(text))
    assert report.exit_code == 0, report.text()
    assert json.loads(report.fields["input"]) == job
    assert validate_job(json.loads(report.fields["input"])) == job


def test_lambda_example():
    report = run({"command": "lambda", "weights": [["1", 2], ["-1", 1]]})
    assert report.exit_code == 0
    assert "\nlambda: 1\n" in report.text()
    assert report.as_json()["result"]["lambda"] == "1"


def test_corollary_example():
    report = run({"command": "corollary", "ext21": 2, "ext12": 1, "nu": 3, "degM1": "1", "degM2": "1"})
    assert (report.fields["engine"], report.fields["closed"], report.fields["verdict"]) == (1, 1, "match")
    assert report.exit_code == 0


def test_verify_example():
    report = run({"command": "verify", "max_total": 6, "weight_range": 3, "mode": "lambda-agreement"}, workers=2)
    assert report.exit_code == 0
    assert report.fields["result"] == "all 923 cases agree"


def test_rationals_render_as_strings():
    report = run({"command": "wallcross", "points": [{"a": "1/3", "weights": [["1", 1], ["-1", 2]]}]})
    assert report.exit_code == 0
    assert report.as_json()["result"]["delta"] == "-1/3"
    assert "delta: -1/3" in report.text()


def test_report_layout():
    lines = run({"command": "linear-flip", "n_plus": 2, "n_minus": 1, "n_zero": 1}).text().splitlines()
    assert lines[0] == "command: linear-flip"
    assert lines[1].startswith("input: ")
    assert lines[-3:-1] == ["status: ok", "exit_code: 0"]
    assert lines[-1].startswith("timing: ")


def test_verification_failure_exits_2():
    job = {"command": "cosection", "variables": {"moving": [["x", 1], ["y", -1]]}, "f": ["x^2*y^3", "0"]}
    report = run(job)
    assert report.exit_code == 2
    assert report.fields["verdict"] == "not almost closed"


def test_truncation_inconclusive_exits_3():
    job = {"command": "cosection", "variables": {"moving": [["x", 1], ["y", -1]]}, "f": ["x^2*y^3", "0"],
           "truncation": 4, "membership": "truncated"}
    report = run(job)
    assert report.exit_code == 3
    assert "increase truncation" in report.fields["error"]
    assert run(job, truncation=6).exit_code == 2


def test_blowup_reports_chart_generators():
    job = {"command": "blowup", "variables": {"invariant": ["u"], "moving": [["x1", 1], ["x2", -1]]},
           "generators": ["x1*x2 - u^2"], "charts": [1]}
    report = run(job)
    assert report.exit_code == 0
    assert report.fields["chart 1 variables"] == ["u", "v2", "zeta"]
    assert report.fields["chart 1"] == ["v2*zeta^2 - u^2"]


@pytest.mark.parametrize("case", NEGATIVE, ids=[c["name"] for c in NEGATIVE])
def test_negative_corpus_exits_1_with_location(case):
    report = run(case["job"])
    assert report.exit_code == 1
    assert f"at {case['where']}" in report.fields["error"]


@pytest.mark.parametrize(
    "job",
    [
        {"command": "cosection", "variables": {"moving": [["x1", 1], ["x2", -1]]},
         "f": ["x2 + x1^2*x2^3", "x1"], "samples": 6, "seed": 9},
        {"command": "cosection", "variables": {"moving": [["x1", 1], ["x2", -1]]},
         "f": ["2*x1*x2^2 + x1^2*x2^3", "2*x1^2*x2"], "samples": 4, "seed": 2, "chart": 1},
        {"command": "verify", "mode": "residue-sum", "samples": 10, "seed": 5},
    ],
)
def test_reports_are_deterministic(job):
    first, second = run(job), run(json.loads(json.dumps(job)))
    assert first.exit_code == 0
    assert strip_timing(first.text()) == strip_timing(second.text())
    a, b = first.as_json(), second.as_json()
    a.pop("timing_seconds"), b.pop("timing_seconds")
    assert a == b


def test_seed_changes_random_arcs():
    job = {"command": "cosection", "variables": {"moving": [["x1", 1], ["x2", -1]]},
           "f": ["x2 + x1^2*x2^3", "x1"], "samples": 8}

    def rows(report):
        return [report.fields[f"arc {k}"] for k in range(8)]

    assert rows(run(job, seed=1)) != rows(run(job, seed=2))
    assert rows(run(dict(job, seed=1))) == rows(run(job, seed=1))
    assert run(dict(job, seed=2), seed=1).fields["seed"] == 1


def test_workers_do_not_change_reports():
    job = {"command": "verify", "mode": "linear-flip", "n_max": 3}
    assert strip_timing(run(job).text()) == strip_timing(run(job, workers=2).text())


# -- entry point -------------------------------------------------------------


def test_main_reads_file_and_prints_json(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text(json.dumps({"command": "lambda", "weights": [["1", 2], ["-1", 1]]}))
    assert main(["--input", str(path), "--json"]) == 0
    out = capsys.readouterr().out
    text, _, block = out.partition("\n{")
    assert "lambda: 1" in text
    doc = json.loads("{" + block)
    assert doc["exit_code"] == 0 and doc["result"]["lambda"] == "1"


def test_main_reports_bad_json(tmp_path, capsys):
    path = tmp_path / "job.json"
    path.write_text('{"command": "lambda",\n "weights": }')
    assert main(["--input", str(path)]) == 1
    assert "invalid JSON at line 2" in capsys.readouterr().out


def test_main_rejects_bad_flags(capsys):
    assert main(["--input", "/nonexistent/job.json"]) == 1
    assert main(["--truncation", "0", "--input", "/dev/null"]) == 1
    assert "cannot read input" in capsys.readouterr().out


def test_module_entry_point_reads_stdin():
    job = json.dumps({"command": "linear-flip", "n_plus": 2, "n_minus": 1, "n_zero": 1})
    proc = subprocess.run([sys.executable, "-m", "dtwall.cli"], input=job, capture_output=True, text=True)
    assert proc.returncode == 0
    assert "delta: 1" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "dtwall.cli"], input="[]", capture_output=True, text=True)
    assert proc.returncode == 1
