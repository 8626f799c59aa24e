from __future__ import annotations

from fractions import Fraction

import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from dtwall.exact import GroebnerBasis, Polynomial, ideal_contains, symbols

VARS = ("x", "y", "z")
x, y, z = symbols(*VARS)


@st.composite
def small_polys(draw):
    terms = draw(
        st.dictionaries(
            st.tuples(*[st.integers(0, 2) for _ in VARS]),
            st.fractions(min_value=-3, max_value=3, max_denominator=2),
            min_size=1,
            max_size=3,
        )
    )
    p = Polynomial(VARS, terms)
    assume(not p.is_zero())
    return p


def _sympy(p: Polynomial):
    syms = sympy.symbols(VARS)
    expr = sympy.Integer(0)
    for exps, c in p.with_variables(VARS).terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, exps):
            term *= s**e
        expr += term
    return expr


def _from_sympy(expr) -> Polynomial:
    poly = sympy.Poly(expr, *sympy.symbols(VARS), domain="QQ")
    return Polynomial(VARS, {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def _groebner(gens, order):
    return sympy.groebner([_sympy(g) for g in gens], *sympy.symbols(VARS), order=order, domain="QQ")


def test_basic_membership():
    assert ideal_contains([x**2, y - x], y**2)
    assert not ideal_contains([x**2, y - x], y)
    assert GroebnerBasis([x + 1, x]).is_unit_ideal()


def test_reduced_basis_of_twisted_cubic():
    basis = GroebnerBasis([y - x**2, z - x**3], VARS, "lex")
    expected = _groebner([y - x**2, z - x**3], "lex")
    assert set(map(_key, basis.polynomials)) == {_key(_from_sympy(e)) for e in expected.exprs}


def _key(p: Polynomial):
    return frozenset(p.with_variables(VARS).terms.items())


@given(st.lists(small_polys(), min_size=1, max_size=3), st.sampled_from(["lex", "grlex", "grevlex"]))
def test_reduced_basis_matches_sympy(gens, order):
    mine = GroebnerBasis(gens, VARS, order)
    theirs = _groebner(gens, order)
    assert {_key(p) for p in mine.polynomials} == {_key(_from_sympy(e)) for e in theirs.exprs}


@given(st.lists(small_polys(), min_size=1, max_size=3), small_polys(), small_polys())
def test_combinations_are_members(gens, a, b):
    combo = a * gens[0] + b * gens[-1]
    assert GroebnerBasis(gens, VARS).contains(combo)


@given(st.lists(small_polys(), min_size=1, max_size=3), small_polys())
def test_membership_matches_sympy(gens, f):
    theirs = _groebner(gens, "grevlex")
    assert GroebnerBasis(gens, VARS).contains(f) == theirs.contains(_sympy(f))
