from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from markovspec.contfrac import (
    ContinuedFraction,
    Ordering,
    bracket_digits,
    compare_alternate,
    convergents,
    eval_finite,
    expand,
    gauss_step,
    parse_cf,
    q_ratio,
    reversal_ratio,
    splice,
    tail,
)
from markovspec.exact import QuadraticSurd
from markovspec.spectrum import euler_cf
from oracles import cf_digits_mp, surd_mp

PHI = QuadraticSurd(1, 1, 2, 5)
GOLDEN = ContinuedFraction.periodic([], [1])
P4 = ContinuedFraction.periodic([], [1, 2, 1, 1])


@pytest.mark.parametrize("x,digits", [(Fraction(7, 3), [2, 3]), (Fraction(0), [0]), (Fraction(-7, 3), [-3, 1, 2])])
def test_expand_rational(x, digits):
    cf = expand(x)
    assert cf.is_finite and list(cf.prefix) == digits
    assert cf.value() == x


def test_expand_quadratic_examples():
    assert expand(PHI) == GOLDEN
    assert expand(QuadraticSurd(2, 2, 5, 6)) == P4
    root2 = expand(QuadraticSurd.sqrt(2))
    assert list(root2.prefix) == [1] and list(root2.period) == [2]


def test_gauss_step_examples():
    assert gauss_step(PHI) == (1, PHI)
    assert gauss_step(QuadraticSurd.sqrt(2)) == (1, 1 + QuadraticSurd.sqrt(2))
    a, nxt = gauss_step(QuadraticSurd(2, 2, 5, 6))
    assert a == 1 and expand(nxt).digits(4) == [2, 1, 1, 1]
    with pytest.raises(ValueError):
        gauss_step(Fraction(3))


def test_eval_finite_examples():
    assert eval_finite([2, 3]) == Fraction(7, 3)
    assert eval_finite([5]) == 5
    assert eval_finite([0, 1, 4]) == Fraction(4, 5)


def test_convergents_golden_are_fibonacci():
    got = [(c.p, c.q) for c in convergents(GOLDEN, 5)]
    assert got == [(1, 1), (2, 1), (3, 2), (5, 3), (8, 5), (13, 8)]
    assert convergents(ContinuedFraction.finite([2, 3]), 1)[1].value == Fraction(7, 3)
    assert convergents(euler_cf(), 0)[0].value == 2


def test_tail_examples():
    assert tail(P4, 1) == ContinuedFraction.periodic([], [2, 1, 1, 1])
    assert tail(ContinuedFraction.periodic([1], [2]), 1) == ContinuedFraction.periodic([], [2])
    assert tail(euler_cf(), 2).digits(4) == [2, 1, 1, 4]


def test_compare_alternate_examples():
    a = ContinuedFraction.periodic([0, 1], [4, 1])
    b = ContinuedFraction.periodic([0], [4, 1])
    assert compare_alternate(a, b, 20) is Ordering.GT
    assert compare_alternate(a, a, 20) is Ordering.EQ
    root2 = ContinuedFraction.periodic([1], [2])
    assert compare_alternate(root2, GOLDEN, 20) is Ordering.LT


def test_splice_examples():
    e = euler_cf()
    assert splice(P4, 3, P4, 4) == P4
    beta = splice(ContinuedFraction.finite([0, 2]), 1, GOLDEN, 1)
    assert Fraction(1, 3) < beta.value() < Fraction(1, 2)
    assert set(beta.digits(12)[2:]) == {1}
    beta = splice(e, 5, P4, 6)
    q5 = convergents(e, 5)[5].q
    gap = abs(beta.enclosure(60).mid - e.enclosure(60).mid)
    assert gap < Fraction(2, q5 * q5)


def test_reversal_ratio_examples():
    assert reversal_ratio(GOLDEN, 4) == Fraction(3, 5)
    assert q_ratio(ContinuedFraction.finite([2, 3]), 1) == Fraction(1, 3)
    assert reversal_ratio(euler_cf(), 1) == Fraction(1, euler_cf().digit(1))


def test_parse_and_print_round_trip():
    for text in ["[1; (2, 1, 1, 1)^w]", "[2; 3]", "[0]", "[(1,2,1,1)^w]", "[1; (2)^ω]", "[0; 1, (4, 1)^omega]"]:
        cf = parse_cf(text)
        assert parse_cf(str(cf)) == cf
    assert parse_cf("[(1,2,1,1)^w]") == P4
    with pytest.raises(ValueError):
        parse_cf("[1; 0, 2]")


def test_canonical_finite_form():
    assert ContinuedFraction.finite([2, 2, 1]) == ContinuedFraction.finite([2, 3])


@given(st.fractions(min_value=-50, max_value=50, max_denominator=10**6))
def test_rational_round_trip(x):
    assert expand(x).value() == x


@given(st.integers(-30, 30), st.integers(1, 6).filter(bool), st.integers(1, 30),
       st.sampled_from([2, 3, 5, 6, 7, 11, 13, 19, 31, 43, 94]))
def test_quadratic_digits_match_oracle(p, q, r, d):
    x = QuadraticSurd(p, q, r, d)
    cf = expand(x)
    assert cf.is_periodic
    assert cf.value() == x
    assert cf.digits(40) == cf_digits_mp(surd_mp(p, q, r, d), 40)


@given(st.lists(st.integers(1, 9), min_size=1, max_size=6),
       st.lists(st.integers(1, 9), min_size=1, max_size=6))
def test_periodic_value_round_trip(prefix, period):
    cf = ContinuedFraction.periodic([0, *prefix], period)
    assert expand(cf.value()) == cf


@given(st.integers(1, 40), st.integers(2, 60), st.sampled_from([2, 3, 5, 7, 13, 29]))
def test_reduced_surds_are_purely_periodic(p, r, d):
    x = QuadraticSurd(p, 1, r, d)
    cj = x.conjugate()
    cf = expand(x)
    reduced = x > 1 and -1 < cj < 0
    assert reduced == (len(cf.prefix) == 0)


@given(st.lists(st.integers(1, 9), min_size=2, max_size=8), st.lists(st.integers(1, 9), min_size=2, max_size=8))
def test_alternate_order_matches_real_order(xs, ys):
    x, y = ContinuedFraction.finite([0, *xs]), ContinuedFraction.finite([0, *ys])
    order = compare_alternate(x, y, 20)
    vx, vy = x.value(), y.value()
    assert order is (Ordering.LT if vx < vy else Ordering.GT if vx > vy else Ordering.EQ)


@given(st.lists(st.integers(1, 20), min_size=2, max_size=25))
def test_bracket_contains_every_continuation(digits):
    box = bracket_digits([0, *digits])
    for extra in ([1], [1, 1], [7, 3], [50]):
        v = eval_finite([0, *digits, *extra])
        assert box.lo <= v <= box.hi


@given(st.lists(st.integers(1, 20), min_size=1, max_size=30))
def test_reversal_identity(digits):
    cf = ContinuedFraction.finite([3, *digits, 2])
    reversal_ratio(cf, len(digits) + 1)


def test_stream_has_no_length_and_no_exact_value():
    e = euler_cf()
    with pytest.raises(TypeError):
        len(e)
    box = e.enclosure(30)
    with mpmath.workdps(60):
        lo = mpmath.mpf(box.lo.numerator) / box.lo.denominator
        hi = mpmath.mpf(box.hi.numerator) / box.hi.denominator
        assert lo < mpmath.e < hi
