"""``python3 -m dtwall.cli``: run one JSON job document."""

from __future__ import annotations

import argparse
import json
import sys

from .run import EXIT_INPUT, Report, run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dtwall", description="Exact wall-crossing computations from a JSON job document.")
    p.add_argument("--input", metavar="PATH", help="job document (default: stdin)")
    p.add_argument("--json", action="store_true", help="also print a machine-readable JSON block")
    p.add_argument("--seed", type=int, help="seed for randomized arcs and sweeps (overrides the job)")
    p.add_argument("--truncation", type=int, help="truncation order for ideal membership (overrides the job)")
    p.add_argument("--workers", type=int, help="worker processes for verify sweeps")
    return p


def _read(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.truncation is not None and args.truncation < 1:
        report = Report("?", {"error": "--truncation must be positive"}, EXIT_INPUT)
    elif args.workers is not None and args.workers < 1:
        report = Report("?", {"error": "--workers must be positive"}, EXIT_INPUT)
    else:
        try:
            doc = json.loads(_read(args.input))
        except OSError as exc:
            report = Report("?", {"error": f"cannot read input: {exc}"}, EXIT_INPUT)
        except json.JSONDecodeError as exc:
            report = Report("?", {"error": f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"}, EXIT_INPUT)
        else:
            report = run(doc, seed=args.seed, truncation=args.truncation, workers=args.workers)
    print(report.text())
    if args.json:
        print(json.dumps(report.as_json(), indent=2, sort_keys=True))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
