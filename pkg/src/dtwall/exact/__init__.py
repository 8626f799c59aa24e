"""Exact scalar/polynomial arithmetic, Laurent series and residues."""

from .groebner import GroebnerBasis, ideal_contains
from .polynomial import Polynomial, as_fraction, format_fraction, format_polynomial, symbols
from .ratfunc import RationalFunction, as_rational_function
from .series import LaurentSeries, expand_series, finite_poles, pole_order, residue, residue_sum_check


def substitute(p: Polynomial, bindings, retain=()) -> Polynomial:
    """Simultaneous substitution; see :meth:`Polynomial.substitute`."""
    return p.substitute(bindings, retain)


__all__ = [
    "GroebnerBasis",
    "LaurentSeries",
    "Polynomial",
    "RationalFunction",
    "as_fraction",
    "as_rational_function",
    "expand_series",
    "finite_poles",
    "format_fraction",
    "format_polynomial",
    "ideal_contains",
    "pole_order",
    "residue",
    "residue_sum_check",
    "substitute",
    "symbols",
]
