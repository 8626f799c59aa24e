from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dtwall.equivariant import WeightVector
from dtwall.errors import InputError, VerificationError
from dtwall.wallcross import (
    CorollaryInput,
    FixedLocusData,
    LinearFlipInput,
    corollary_dt,
    enumerate_weight_vectors,
    euler_omega_degree,
    lambda_by_substitution,
    lambda_closed,
    lambda_derivative_form,
    lambda_localized,
    lambda_residue_chain,
    linear_flip_oracle,
    wallcross_total,
)

weight_vectors = st.dictionaries(
    st.sampled_from([-3, -2, -1, 1, 2, 3, Fraction(1, 3), Fraction(-3, 2)]), st.integers(1, 3), min_size=1, max_size=4
).map(WeightVector)


def test_lambda_closed_examples():
    assert lambda_closed(WeightVector({2: 3, -2: 3})) == 0
    assert lambda_closed(WeightVector({1: 2, -1: 1})) == 1
    assert lambda_closed(WeightVector({1: 4, -1: 1})) == (-1) ** 4 * 3


def test_lambda_localized_examples():
    assert lambda_localized(WeightVector({1: 1})) == 1
    assert lambda_localized(WeightVector({1: 2})) == -2
    assert lambda_localized(WeightVector({1: 1, -1: 1})) == 0


def test_wallcross_examples():
    assert wallcross_total(FixedLocusData([(1, {1: 1})])) == 1
    assert wallcross_total(FixedLocusData([("1/2", {3: 2, -3: 2})])) == 0
    data = FixedLocusData([(2, {1: 2, -1: 1}), (-1, {1: 1})])
    assert wallcross_total(data) == 1
    assert wallcross_total(data, "both") == 1
    with pytest.raises(InputError):
        wallcross_total(data, "fast")


def test_wallcross_both_detects_mismatch(monkeypatch):
    import dtwall.wallcross as wc

    monkeypatch.setattr(wc, "lambda_localized", lambda W: Fraction(99))
    with pytest.raises(VerificationError):
        wc.wallcross_total(FixedLocusData([(1, {1: 1})]), "both")


def test_corollary_examples():
    for nu in range(1, 5):
        r = corollary_dt(CorollaryInput(1, 1, nu))
        assert r.engine_side == r.closed_side == 0
    r = corollary_dt(CorollaryInput(2, 1, 3))
    assert (r.engine_side, r.closed_side) == (1, 1)
    r = corollary_dt(CorollaryInput(1, 3, 2, 2, 5))
    assert r.closed_side == 20 and r.match
    assert corollary_dt(CorollaryInput(1, 3, 2, 2, 5), "localized").engine_side == 20
    with pytest.raises(InputError):
        CorollaryInput(0, 0, 1)
    with pytest.raises(InputError):
        CorollaryInput(1, 0, 0)


def test_euler_omega_degree_examples():
    assert euler_omega_degree([0]) == 1
    assert euler_omega_degree([2]) == 3
    assert euler_omega_degree([1, 1]) == 4
    with pytest.raises(InputError):
        euler_omega_degree([-1])


def test_linear_flip_examples():
    r = linear_flip_oracle(LinearFlipInput(2, 1, 1))
    assert (r.degMplus, r.degMminus, r.degXT, r.delta, r.predicted) == (4, 3, 1, 1, 1)
    for k in range(1, 5):
        assert linear_flip_oracle(LinearFlipInput(1, 1, k)).delta == 0
    r = linear_flip_oracle(LinearFlipInput(3, 1, 2))
    assert (r.degMplus, r.degMminus, r.delta, r.predicted) == (9, 5, 4, 4)
    with pytest.raises(InputError):
        LinearFlipInput(0, 1, 1)


def test_enumeration_count_and_uniqueness():
    cases = list(enumerate_weight_vectors(3, 6))
    assert len(cases) == len(set(cases)) == 923
    assert all(W.total <= 6 for W in cases)


@given(weight_vectors)
def test_localized_equals_closed(W):
    assert lambda_localized(W) == lambda_closed(W)


@given(weight_vectors)
def test_all_routes_agree(W):
    lam = lambda_closed(W)
    moving, at_zero = lambda_residue_chain(W)
    assert lambda_by_substitution(W) == moving == at_zero == lambda_derivative_form(W) == lam


@given(weight_vectors)
def test_antisymmetry_under_flipping_the_action(W):
    assert lambda_closed(W.negated()) == -lambda_closed(W)
    assert lambda_localized(W.negated()) == -lambda_localized(W)


@given(weight_vectors, st.integers(1, 5))
def test_rescaling_weights(W, m):
    assert lambda_closed(W.scaled(m)) == lambda_closed(W) / m


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8))
def test_linear_flip_pipelines_agree(a, b, c):
    assert linear_flip_oracle(LinearFlipInput(a, b, c)).match


@given(st.integers(0, 7), st.integers(0, 7), st.integers(1, 9), st.fractions(max_denominator=5), st.fractions(max_denominator=5))
def test_corollary_sides_agree(e21, e12, nu, d1, d2):
    if e21 == e12 == 0:
        return
    c = CorollaryInput(e21, e12, nu, d1, d2)
    assert corollary_dt(c).match
    n = e21 + e12
    assert (-1) ** (n - 1) == (-1) ** (c.chi - 1)


@given(st.lists(st.tuples(st.fractions(max_denominator=4), weight_vectors), min_size=1, max_size=4))
def test_wallcross_is_linear(points):
    data = FixedLocusData(points)
    assert wallcross_total(data) == sum(a * lambda_closed(W) for a, W in points)
    assert wallcross_total(data, "localized") == wallcross_total(data)
