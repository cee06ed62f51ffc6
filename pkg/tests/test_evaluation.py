import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import classical_bruteforce, qmpl_bruteforce
from qmpl import (
    Composition,
    DivergentSeriesError,
    DomainError,
    InvalidParameterError,
    ModeMismatchError,
    Verdict,
    auto_cutoff,
    check_derivative_relation,
    classical_limit_check,
    eval_classical_mpl,
    eval_qmpl,
    eval_qmzv,
)
from qmpl.scalar import bigfloat, exact

small = st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=12).filter(bool)
comps = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(tuple)


def test_single_index_small_cutoff():
    res = eval_qmpl((1,), [exact("1/2")], exact("1/2"), 3)
    assert res.value == exact("31/21")
    assert res.terms_summed == 3
    assert 0 < res.tail_bound < 1


def test_classical_dilogarithm_at_one_half():
    res = eval_classical_mpl((2,), [bigfloat("1/2", 128)], 150)
    assert abs(res.value.magnitude() - 0.58224052646501250590) < 1e-18


def test_classical_dilogarithm_at_one_uses_boundary_bound():
    res = eval_classical_mpl((2,), [bigfloat(1, 128)], 100000)
    assert abs(res.value.magnitude() - math.pi**2 / 6) <= res.tail_bound
    assert res.tail_bound < 2e-5


@settings(max_examples=60, deadline=None)
@given(comps, st.data(), small, st.integers(3, 9))
def test_qmpl_matches_bruteforce(comp, data, q, K):
    zs = [data.draw(small) for _ in comp]
    if K < len(comp):
        K = len(comp)
    res = eval_qmpl(comp, [exact(z) for z in zs], exact(q), K)
    assert res.value.to_fraction() == qmpl_bruteforce(comp, zs, q, K)
    assert res.terms_summed == math.comb(K, len(comp))


@settings(max_examples=40, deadline=None)
@given(comps, st.data(), st.integers(3, 9))
def test_classical_matches_bruteforce(comp, data, K):
    zs = [data.draw(small) for _ in comp]
    K = max(K, len(comp))
    res = eval_classical_mpl(comp, [exact(z) for z in zs], K)
    assert res.value.to_fraction() == classical_bruteforce(comp, zs, K)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 2), min_size=1, max_size=2).map(tuple), st.data(), small)
def test_tail_bound_covers_the_remainder(comp, data, q):
    zs = [exact(data.draw(small)) for _ in comp]
    far = eval_qmpl(comp, zs, exact(q), 80).value
    near = eval_qmpl(comp, zs, exact(q), 12)
    assert (far - near.value).magnitude() <= near.tail_bound * (1 + 1e-9)


def test_outside_regime_tail_covers_remainder():
    z, q = [exact("1/2"), exact("1/3")], exact(-3)
    far = eval_qmpl((1, 2), z, q, 60).value
    near = eval_qmpl((1, 2), z, q, 10)
    assert (far - near.value).magnitude() <= near.tail_bound


def test_domain_errors():
    with pytest.raises(DomainError):
        eval_qmpl((1,), [exact(2)], exact("1/2"), 10)
    # on the unit circle only the outside regime converges
    with pytest.raises(DomainError):
        eval_qmpl((1,), [exact(1)], exact("1/2"), 10)
    assert eval_qmpl((1,), [exact(1)], exact(2), 10).tail_bound < math.inf
    res = eval_qmpl((1,), [exact(2)], exact("1/2"), 5, allow_divergent=True)
    assert math.isinf(res.tail_bound)
    with pytest.raises(DomainError):
        eval_classical_mpl((1,), [exact(1)], 10)


def test_arity_and_mode_checks():
    with pytest.raises(InvalidParameterError):
        eval_qmpl((1, 1), [exact("1/2")], exact("1/2"), 5)
    with pytest.raises(ModeMismatchError):
        eval_qmpl((1,), [bigfloat("1/2")], exact("1/2"), 5)
    with pytest.raises(InvalidParameterError):
        Composition((0, 1))


def test_qmzv_outside_matches_bruteforce():
    res = eval_qmzv((2,), exact(2), 40)
    assert res.value.to_fraction() == qmpl_bruteforce((2,), [1], Fraction(2), 40)
    assert res.tail_bound < 1e-20


def test_qmzv_value_at_two():
    res = eval_qmzv((2,), bigfloat(2, 128), 60)
    assert abs(res.value.magnitude() - 1.1373387363441966) < 1e-15


def test_qmzv_inside_is_divergent():
    with pytest.raises(DivergentSeriesError):
        eval_qmzv((2,), exact("1/2"), 10)


def test_auto_cutoff_is_minimal():
    K = auto_cutoff((2,), [exact(1)], exact(2), 1e-20)
    assert eval_qmzv((2,), exact(2), K).tail_bound <= 1e-20
    assert eval_qmzv((2,), exact(2), K - 1).tail_bound > 1e-20


@settings(max_examples=40, deadline=None)
@given(comps, st.data(), small)
def test_derivative_relation_is_exact(comp, data, q):
    zs = [exact(data.draw(small)) for _ in comp]
    j = data.draw(st.integers(1, len(comp)))
    report = check_derivative_relation(comp, j, zs, exact(q), 8)
    assert report.verdict is Verdict.EXACT_PASS
    assert report.exact_zero


def test_derivative_relation_float_within_budget():
    zs = [bigfloat("1/3", 128), bigfloat("-1/4", 128)]
    report = check_derivative_relation((2, 1), 1, zs, bigfloat("3/2", 128), 20)
    assert report.verdict is Verdict.TOLERANCE_PASS
    assert report.deviation <= report.tail_budget


def test_classical_limit_first_order():
    qs = [bigfloat(1 - Fraction(1, 2**j), 128) for j in range(4, 13)]
    report = classical_limit_check((2,), [bigfloat("1/2", 128)], qs, 120, trend_start=4)
    assert report.verdict is Verdict.TOLERANCE_PASS
    devs = report.details["deviations"]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert all(0.4 <= r <= 0.6 for r in report.details["ratios"])


def test_classical_limit_single_point_is_unsupported():
    report = classical_limit_check((2,), [bigfloat("1/2", 128)], [bigfloat("0.9", 128)], 50)
    assert report.verdict is Verdict.UNSUPPORTED
