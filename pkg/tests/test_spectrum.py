from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovspec.contfrac import ContinuedFraction, convergents, expand
from markovspec.exact import IntMatrix2, QuadraticSurd
from markovspec.spectrum import (
    HURWITZ,
    approx_sequence,
    convergent_witness,
    direct_term,
    euler_cf,
    euler_digits,
    float_terms,
    legendre_filter,
    markov_constant,
    mobius_transport_witness,
    quad_accumulation_set,
    residue_limits,
    secondary_convergent_terms,
    stream_accumulation,
    tail_sum_bracket,
)
from oracles import e_mp, surd_mp, terms_mp

GOLDEN = ContinuedFraction.periodic([], [1])
P4 = ContinuedFraction.periodic([], [1, 2, 1, 1])
ROOT2 = ContinuedFraction.periodic([1], [2])
R6 = QuadraticSurd.sqrt(6)


def test_golden_terms_alternate_and_converge():
    terms = approx_sequence(GOLDEN, 40)
    signs = [t.sign for t in terms]
    assert all(a == -b for a, b in zip(signs, signs[1:]))
    assert abs(abs(terms[40].value) - HURWITZ) < Fraction(1, 10**15)
    assert terms[0].value < 0 < terms[1].value  # sign (-1)^(N+1)


def test_terms_match_high_precision_oracle():
    ref = terms_mp(surd_mp(2, 2, 5, 6), 80)
    for t, r in zip(approx_sequence(P4, 79), ref):
        assert abs(mpmath.mpf(float(t.value)) - r) < 1e-12
    e_ref = terms_mp(e_mp(), 150)
    for t, r in zip(approx_sequence(euler_cf(), 149), e_ref):
        box = t.value
        with mpmath.workdps(100):
            assert mpmath.mpf(box.lo.numerator) / box.lo.denominator <= r <= mpmath.mpf(box.hi.numerator) / box.hi.denominator


def test_euler_term_limits():
    terms = approx_sequence(euler_cf(), 301)
    assert abs(abs(float(terms[300].value)) - 0.5) < 1e-3
    assert abs(float(terms[301].value)) < 1e-2


def test_accumulation_golden_and_root2():
    assert set(quad_accumulation_set(GOLDEN).points) == {HURWITZ, -HURWITZ}
    half = 1 / (2 * QuadraticSurd.sqrt(2))
    assert set(quad_accumulation_set(ROOT2).points) == {half, -half}


def test_accumulation_period4_matches_brute_force():
    pts = quad_accumulation_set(P4).points
    assert set(pts) == {-1 / R6, -3 / (4 * R6), 5 / (4 * R6)}
    # independent check: deep terms from the mpmath oracle, one per residue class
    ref = terms_mp(surd_mp(2, 2, 5, 6), 204)
    deep = {round(float(v), 12) for v in ref[200:204]}
    assert deep == {round(float(x), 12) for x in pts}


def test_residue_modulus():
    assert len(residue_limits(GOLDEN)) == 2
    assert len(residue_limits(P4)) == 4
    assert len(residue_limits(ContinuedFraction.periodic([0], [1, 2, 3]))) == 6


def test_markov_constant_examples():
    assert markov_constant(GOLDEN) == HURWITZ
    assert markov_constant(P4) == 3 / (4 * R6)
    est = markov_constant(euler_cf(), "numeric", depth=600)
    assert est.lower <= Fraction(est.estimate) and est.estimate < 0.01
    with pytest.raises(ValueError):
        markov_constant(euler_cf())
    with pytest.raises(ValueError):
        markov_constant(Fraction(3, 7))


@pytest.mark.parametrize("m", [50, 500])
def test_secondary_terms_on_e(m):
    n = 3 * m + 1
    devs = [abs(float(secondary_convergent_terms(euler_cf(), n, a).value.mid)) - (a + 0.5) for a in (1, 2, 3)]
    if m == 500:
        assert max(abs(d) for d in devs) < 0.02
    assert abs(devs[0]) < 0.02


def test_secondary_preconditions():
    with pytest.raises(ValueError):
        secondary_convergent_terms(GOLDEN, 5, 1)
    e = euler_cf()
    with pytest.raises(ValueError):
        secondary_convergent_terms(e, 4, e.digit(5))


def test_secondary_agrees_with_direct_definition():
    alpha = ContinuedFraction.periodic([0], [5, 1, 3])
    value = alpha.value()
    for n in range(0, 12):
        for a in range(1, alpha.digit(n + 1)):
            t = secondary_convergent_terms(alpha, n, a)
            assert t.value == t.m * (t.k - t.m * value)


def test_legendre_golden_hits_are_fibonacci():
    hits = legendre_filter(QuadraticSurd(1, 1, 2, 5), 100)
    phi = (1 + 5**0.5) / 2
    brute = sorted(
        (Fraction(p, q) for q in range(1, 101) for p in range(int(q * phi) - 1, int(q * phi) + 3)
         if abs(phi - p / q) < 1 / (2 * q * q)),
        key=lambda x: (x.denominator, x),
    )
    assert hits == brute
    fib = {c.value for c in convergents(GOLDEN, 12)}
    assert set(hits) <= fib


def test_legendre_e_is_subset_of_convergents():
    hits = legendre_filter(euler_cf(), 100)
    assert hits and set(hits) <= {c.value for c in convergents(euler_cf(), 12)}


def test_euler_digits():
    assert [euler_digits(i) for i in range(9)] == [2, 1, 2, 1, 1, 4, 1, 1, 6]
    assert euler_digits(14) == 10
    assert all(euler_digits(3 * n + 2) == 2 * (n + 1) for n in range(50))


def test_tail_sum_brackets():
    e = euler_cf()
    box = tail_sum_bracket(e, 300)
    assert box.lo <= 2 + Fraction(1, 100) and box.hi >= 2 - Fraction(1, 100)
    assert abs(box.mid - 2) < Fraction(1, 50)
    r5 = QuadraticSurd.sqrt(5)
    for n in (7, 30):
        b = tail_sum_bracket(GOLDEN, n)
        assert b.lo <= float(r5) + 0.1 and b.hi >= float(r5) - 0.1
    b = tail_sum_bracket(ROOT2, 40)
    assert abs(float(b.mid) - 2 * 2**0.5) < 1e-3


def test_witness_transport_examples():
    phi = GOLDEN.value()
    w = convergent_witness(GOLDEN, 1, 2, 120)
    assert w.target == HURWITZ
    same = mobius_transport_witness(IntMatrix2.identity(), w, phi)
    assert same.k == w.k and same.m == w.m and same.target == w.target
    z = 3
    scaled = mobius_transport_witness(IntMatrix2(z, 0, 0, z), w, phi)
    assert scaled.target == z * z * w.target and scaled.errors[-1] < 1e-20
    gauss = IntMatrix2(0, 1, 1, -GOLDEN.digit(0))
    flipped = mobius_transport_witness(gauss, w, phi)
    assert flipped.target == -w.target and flipped.errors[-1] < 1e-20


def test_stream_accumulation_finds_e_limits():
    report = stream_accumulation(euler_cf(), 3000, start=100, radius=1e-3, min_hits=3)
    centres = sorted(round(abs(c), 2) for c in report.points)
    assert 0.5 in centres


def test_rational_alpha_rejected():
    with pytest.raises(ValueError):
        approx_sequence(Fraction(3, 7), 5)


QUADS = st.builds(
    lambda p, q, r, d: QuadraticSurd(p, q, r, d),
    st.integers(-30, 30), st.integers(1, 5), st.integers(1, 25), st.sampled_from([2, 3, 5, 6, 7, 10, 13, 17, 21]),
)


@given(QUADS)
def test_bracket_signs_and_direct_definition(x):
    cf = expand(x)
    terms = approx_sequence(cf, 60)
    convs = convergents(cf, 60)
    for t in terms:
        assert t.bracket_holds()
        assert t.sign == (1 if t.n % 2 else -1)
        if t.n < 25:
            assert t.value == direct_term(x, convs[t.n])


@given(QUADS)
def test_accumulation_points_are_limits(x):
    report = quad_accumulation_set(x)
    assert len(report.points) <= (len(expand(x).period) if len(expand(x).period) % 2 == 0 else 2 * len(expand(x).period))
    assert all(err < 1e-6 for err in report.witness_error.values())


@given(QUADS)
def test_float_screening_tracks_exact_terms(x):
    cf = expand(x)
    floats = float_terms(cf, 80)
    exact = approx_sequence(cf, 80)
    assert max(abs(f - float(t.value)) for f, t in zip(floats, exact)) < 1e-9
