import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import normal_order_by_inversions, zeta_word_exponent_bruteforce
from qmpl import InvalidParameterError, Verdict, eval_qmpl
from qmpl.noncomm import (
    FormalSeries,
    OrderedQMPL,
    Q,
    RatFunc,
    ZetaWord,
    exchange_exponent,
    inversion_count,
    multiply_series,
    normalize_monomial,
    ordered_qmpl_series,
    solve_exact,
    verify_ordered_closure,
    zeta_word_normal_form,
    zeta_word_product,
)
from qmpl.scalar import exact

words = st.lists(st.integers(1, 4), max_size=8)
small_q = st.fractions(min_value=Fraction(-3, 4), max_value=Fraction(3, 4), max_denominator=8).filter(
    lambda x: x not in (0,)
)


# ---------------------------------------------------------------- rational functions


def test_ratfunc_normal_form():
    assert (Q**2 - 1) / (Q - 1) == Q + 1
    assert str((Q**2 - 1) / (Q - 1)) == "q + 1"
    assert str(1 / (1 - Q)) == "(-1)/(q - 1)"
    assert RatFunc.of(Fraction(3, 4)).is_constant
    assert (Q**-3).is_laurent and not (1 / (1 - Q)).is_laurent
    with pytest.raises(ZeroDivisionError):
        RatFunc.of(0).inverse()


polys = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=5), min_size=1, max_size=4)


def _build(coeffs):
    return sum((RatFunc.of(c) * Q**i for i, c in enumerate(coeffs)), RatFunc.of(0))


@given(polys, polys, polys, st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_ratfunc_arithmetic_commutes_with_evaluation(a, b, c, x):
    A, B, C = _build(a), _build(b), _build(c)
    assume(C(x) != 0)
    expr = (A * B + A) / C - B

    def ev(coeffs):
        return sum(Fraction(v) * x**i for i, v in enumerate(coeffs))

    assert expr(x) == (ev(a) * ev(b) + ev(a)) / ev(c) - ev(b)


# ---------------------------------------------------------------- normal ordering


@given(words)
def test_normal_ordering_matches_inversion_count(word):
    mono = normalize_monomial(word)
    exp, ordered = normal_order_by_inversions(word)
    assert mono.q_exponent == exp == -inversion_count(word)
    flat = tuple(v for v, e in mono.exponents for _ in range(e))
    assert flat == ordered


@given(words, st.integers(0, 2**32))
def test_normal_ordering_strategy_independent(word, seed):
    results = {normalize_monomial(word, s) for s in ("left", "right", random.Random(seed))}
    assert len(results) == 1


def test_two_generator_exchange():
    # z2 z1 = q**-1 z1 z2
    assert str(normalize_monomial([2, 1])) == "q^-1 z1 z2"
    assert str(normalize_monomial([3, 2, 1])) == "q^-3 z1 z2 z3"


# ---------------------------------------------------------------- formal series


def _word_of(exps):
    return [v for v, e in exps for _ in range(e)]


monomials = st.dictionaries(st.integers(1, 3), st.integers(1, 3), max_size=3)


def _series(D, items):
    return FormalSeries(D, [(tuple(m.items()), RatFunc.of(c)) for m, c in items])


series_items = st.lists(st.tuples(monomials, st.integers(-3, 3)), max_size=4)


@settings(max_examples=60, deadline=None)
@given(series_items, series_items)
def test_series_product_matches_word_concatenation(a_items, b_items):
    D = 8
    a, b = _series(D, a_items), _series(D, b_items)
    want = {}
    for ma, ca in a.coeffs.items():
        for mb, cb in b.coeffs.items():
            word = _word_of(ma) + _word_of(mb)
            if len(word) > D:
                continue
            exp, ordered = normal_order_by_inversions(word)
            key = tuple(sorted({v: ordered.count(v) for v in ordered}.items()))
            want[key] = want.get(key, RatFunc.of(0)) + ca * cb * Q**exp
    want = {k: v for k, v in want.items() if v}
    assert multiply_series(a, b).coeffs == dict(sorted(want.items()))


@settings(max_examples=30, deadline=None)
@given(series_items, series_items, series_items)
def test_series_product_is_associative(x, y, z):
    a, b, c = (_series(6, items) for items in (x, y, z))
    assert (a * b) * c == a * (b * c)


def test_series_caps_must_agree():
    with pytest.raises(InvalidParameterError):
        FormalSeries.unit(3) * FormalSeries.unit(4)


def test_ordered_series_coefficients():
    s = ordered_qmpl_series((2,), [(1,)], 5)
    for k in range(1, 6):
        assert s.coefficient({1: k}) == 1 / (1 - Q**k) ** 2
    t = ordered_qmpl_series((1, 1), [(1,), (2,)], 4)
    # k1 < k2 with k1 + k2 <= 4: (1,2), (1,3)
    assert len(t) == 2
    assert t.coefficient({1: 1, 2: 3}) == 1 / ((1 - Q) * (1 - Q**3))


@given(small_q, st.fractions(min_value=Fraction(-1, 2), max_value=Fraction(1, 2), max_denominator=6))
def test_single_slot_series_specializes_to_truncated_sum(q, z):
    D = 7
    s = ordered_qmpl_series((2,), [(1,)], D)
    assert s.specialize(q, {1: z}) == eval_qmpl((2,), [exact(z)], exact(q), D).value.to_fraction()


# ---------------------------------------------------------------- closure


def test_closure_of_two_distinct_variables():
    report = verify_ordered_closure(((1,), (1,)), ((1,), (2,)), 12)
    assert report.verdict is Verdict.EXACT_PASS
    terms = report.details["combination"]
    assert len(terms) == 3
    assert {t["term"] for t in terms} == {"Li_{2}(z1*z2)", "Li_{1,1}(z1,z2)", "Li_{1,1}(z2,z1)"}
    assert all(t["coefficient"] == {"numerator": ["1"], "denominator": ["1"]} for t in terms)
    assert report.details["coefficient_ring"] == "Q"
    assert report.details["unique"]


def test_closure_same_variable_has_integer_multiplicity():
    report = verify_ordered_closure(((1,), (1,)), ((1,), (1,)), 10)
    assert report.passed
    assert report.rhs == "Li_{2}(z1*z1) + (2)*Li_{1,1}(z1,z1)"


def test_closure_with_unit_is_identity():
    b = OrderedQMPL.of(((2,), (1,)))
    report = verify_ordered_closure("unit", b, 8)
    assert report.passed
    assert report.rhs == str(b)


def test_closure_fails_for_descending_variable_order():
    # Li(z2) Li(z1) picks up q**(-jk) under normal ordering, which no
    # combination of ordered q-MPLs with q-free coefficients can absorb
    report = verify_ordered_closure(((1,), (2,)), ((1,), (1,)), 8)
    assert report.verdict is Verdict.FAIL
    assert report.details["closure_falsification"]


def test_closure_degree_cap_too_small():
    with pytest.raises(InvalidParameterError):
        verify_ordered_closure(((1,), (1,)), ((1,), (2,)), 1)


def test_solve_exact_small_system():
    D = 3
    x = FormalSeries.monomial(D, {1: 1})
    y = FormalSeries.monomial(D, {2: 1})
    target = x.scale(Q) + y.scale(2)
    sol = solve_exact(target, [x, y, x + y])
    assert sol.coefficients == {0: Q, 1: RatFunc.of(2)}
    assert sol.nullity == 1
    assert solve_exact(FormalSeries.monomial(D, {3: 1}), [x, y]).coefficients is None


# ---------------------------------------------------------------- zeta words


def test_zeta_three_two_normalizes_with_exponent_six():
    for strategy in ("left", "right", random.Random(7)):
        nf = zeta_word_normal_form(ZetaWord.parse("3|2"), strategy)
        assert nf.q_exponent == -6
        assert [c.indices for c in nf.letters] == [(2,), (3,)]
    assert str(zeta_word_normal_form(ZetaWord.parse("3|2"))) == "q^-6 zeta(2) zeta(3)"


letters = st.lists(st.integers(1, 3), min_size=1, max_size=3).filter(lambda c: sum(c) <= 4).map(tuple)


@given(st.lists(letters, max_size=6), st.integers(0, 2**32))
def test_zeta_word_normal_form_is_confluent(ls, seed):
    w = ZetaWord.of(ls)
    results = {zeta_word_normal_form(w, s) for s in ("left", "right", random.Random(seed))}
    assert len(results) == 1
    (nf,) = results
    exp, ordered = zeta_word_exponent_bruteforce(ls)
    assert nf.q_exponent == exp == exchange_exponent(ls)
    assert [c.indices for c in nf.letters] == ordered
    assert nf.is_normal


@given(st.lists(letters, max_size=3), st.lists(letters, max_size=3), st.lists(letters, max_size=3))
def test_zeta_word_product_is_associative(a, b, c):
    u, v, w = ZetaWord.of(a, 1), ZetaWord.of(b, -2), ZetaWord.of(c)
    assert zeta_word_product(zeta_word_product(u, v), w) == zeta_word_product(u, zeta_word_product(v, w))
