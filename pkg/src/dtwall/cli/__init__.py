"""Command-line front end: expression grammar, job schema and dispatch."""

from .parser import ExpressionError, parse_expression, print_expression
from .run import Report, run, validate_job

__all__ = ["ExpressionError", "Report", "parse_expression", "print_expression", "run", "validate_job"]
