from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtwall.equivariant import (
    WeightVector,
    c1_twice_exceptional,
    component_constant_by_substitution,
    component_contributions,
    component_integrand,
    euler_virtual_normal,
    integrate_projective,
    numerator_twist,
    residue_delta,
)
from dtwall.errors import InputError, NonEquivariantPoleError
from dtwall.exact import LaurentSeries, Polynomial, RationalFunction, symbols

t, zeta = symbols("t", "zeta")


def rf(num, den=1):
    return RationalFunction(num, den)


weight_vectors = st.dictionaries(
    st.sampled_from([-3, -2, -1, 1, 2, 3, Fraction(1, 2), Fraction(-2, 3)]), st.integers(1, 3), min_size=1, max_size=4
).map(WeightVector)


def test_weight_vector_validation():
    with pytest.raises(InputError):
        WeightVector({0: 1})
    with pytest.raises(InputError):
        WeightVector({1: 0})
    with pytest.raises(InputError):
        WeightVector({})
    with pytest.raises(InputError):
        WeightVector([(1, 1), ("1", 2)])
    W = WeightVector({"1/2": 2, -1: 1})
    assert W.total == 3 and W[Fraction(1, 2)] == 2 and W.multiplicity(5) == 0


def test_euler_virtual_normal_examples():
    assert euler_virtual_normal(1, WeightVector({1: 1})) == rf(t - zeta, zeta - 2 * t)
    assert euler_virtual_normal(1, WeightVector({1: 1, -1: 1})) == rf(t - zeta)
    assert euler_virtual_normal(2, WeightVector({2: 3})) == rf(2 * t - zeta, (zeta - 4 * t) ** 3)
    with pytest.raises(InputError):
        euler_virtual_normal(3, WeightVector({1: 1}))
    with pytest.raises(InputError):
        euler_virtual_normal(0, WeightVector({1: 1}))


def test_numerator_twist_examples():
    assert numerator_twist(1, WeightVector({1: 2})) == 1
    assert numerator_twist(1, WeightVector({1: 1, -1: 1})) == rf(zeta)
    assert numerator_twist(-1, WeightVector({1: 3, -1: 2})) == rf(zeta**3)


def test_c1_examples():
    assert c1_twice_exceptional(1) == rf(2 * (zeta - t))
    assert c1_twice_exceptional(-1) == rf(2 * (zeta + t))
    assert c1_twice_exceptional(Fraction(1, 2)) == rf(2 * zeta - t)


def test_integrate_projective_examples():
    assert integrate_projective(rf(zeta**2), 3) == LaurentSeries("t", 0, (Fraction(1),))
    one = Polynomial.constant(1, ("t", "zeta"))
    assert integrate_projective(rf(one, t - zeta), 2).terms() == [(-2, 1)]
    assert integrate_projective(rf((zeta - 2 * t) ** 2, -2 * (t - zeta) ** 2), 2).terms() == [(-1, -2)]


def test_non_equivariant_pole():
    with pytest.raises(NonEquivariantPoleError):
        integrate_projective(rf(Polynomial.constant(1, ("t", "zeta")), zeta), 1)


def test_residue_delta_examples():
    assert residue_delta([LaurentSeries("t", -1, (Fraction(5),))]) == 5
    assert residue_delta([LaurentSeries("t", 0, (Fraction(1), Fraction(2)))]) == 0
    assert residue_delta([LaurentSeries("t", -1, (Fraction(-2),)), LaurentSeries("t", -1, (Fraction(1),))]) == -1


def test_contributions_of_small_cases():
    assert component_contributions(WeightVector({1: 1}))[1].terms() == [(-1, 1)]
    assert component_contributions(WeightVector({1: 2}))[1].terms() == [(-1, -2)]
    assert all(s.is_zero() for s in component_contributions(WeightVector({1: 1, -1: 1})).values())


@given(weight_vectors)
def test_integrand_is_homogeneous(W):
    # degree n_j - 2, so the zeta^(n_j - 1) coefficient has t-degree -1
    for j, n in W.items():
        c = component_integrand(j, W)
        scaled = c.substitute({"t": 3 * t, "zeta": 3 * zeta})
        assert scaled == c * Fraction(3) ** (n - 2)


@given(weight_vectors)
def test_contribution_is_single_inverse_t_term(W):
    for series in component_contributions(W).values():
        assert series.exact
        assert all(k == -1 for k, _ in series.terms())


@given(weight_vectors)
def test_substitution_route_agrees(W):
    contributions = component_contributions(W)
    for j in W:
        assert component_constant_by_substitution(j, W) == contributions[j].coefficient(-1)


@given(st.fractions(min_value=-5, max_value=5, max_denominator=4), st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_integration_is_linear(a, b):
    one = Polynomial.constant(1, ("t", "zeta"))
    f, g = rf(one, t - zeta), rf(zeta, (t + zeta) ** 2)
    lhs = integrate_projective(f * a + g * b, 2)
    rhs = integrate_projective(f, 2) * a + integrate_projective(g, 2) * b
    assert lhs.terms() == rhs.terms()
