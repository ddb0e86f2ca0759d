from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovspec.exact import QuadraticSurd
from markovspec.spectrum import float_terms
from markovspec.words import (
    WordGenerator,
    WordKind,
    occurrence_check,
    spiked_word,
    target_hit_scan,
    universal_word_14,
    universal_word_45,
    word_to_alpha,
)


def naive_universal(alphabet, levels):
    out = []
    for n in range(1, levels + 1):
        for w in product(alphabet, repeat=n):
            out.extend(w)
    return out


def naive_spiked(levels):
    out = []
    for n in range(1, levels + 1):
        for w in product((1, 2, 3, 4), repeat=n):
            for h in range(1, n + 1):
                out.extend(w)
                out.append(h)
    return out


def test_universal14_prefix():
    w = universal_word_14(12)
    assert w[:4] == [1, 2, 3, 4]
    assert w[4:12] == [1, 1, 1, 2, 1, 3, 1, 4]


def test_universal45_prefix():
    w = universal_word_45(10)
    assert w[:2] == [4, 5]
    assert w[2:10] == [4, 4, 4, 5, 5, 4, 5, 5]
    assert set(universal_word_45(5000)) == {4, 5}


def test_spiked_prefix():
    assert spiked_word(8) == [1, 1, 2, 1, 3, 1, 4, 1]


@pytest.mark.parametrize("kind,levels", [(WordKind.UNIVERSAL14, 4), (WordKind.UNIVERSAL45, 7), (WordKind.SPIKED, 3)])
def test_index_access_matches_naive_unrolling(kind, levels):
    gen = WordGenerator(kind)
    ref = naive_spiked(levels) if kind is WordKind.SPIKED else naive_universal(gen.alphabet, levels)
    assert gen.prefix(len(ref)) == ref
    assert gen.prefix_length(levels) == len(ref)


def test_block_lengths():
    u = WordGenerator(WordKind.UNIVERSAL14)
    s = WordGenerator(WordKind.SPIKED)
    for n in range(1, 8):
        assert u.prefix_length(n) - u.prefix_length(n - 1) == n * 4**n
        assert s.block_length(n) == 4**n * n * (n + 1)


def test_spikes_grow():
    gen = WordGenerator(WordKind.SPIKED)
    assert max(gen.prefix(gen.prefix_length(5))) == 5


def test_occurrences():
    rep = occurrence_check(WordGenerator(WordKind.UNIVERSAL14), [1, 2, 3, 4], 100_000, min_count=2)
    assert rep.satisfied and rep.even >= 2 and rep.odd >= 2
    assert occurrence_check(WordGenerator(WordKind.UNIVERSAL14), [5, 5], 10_000).positions == ()
    rep = occurrence_check(WordGenerator(WordKind.UNIVERSAL45), [4, 5], 10_000, min_count=2)
    assert rep.satisfied


@given(st.lists(st.integers(1, 4), min_size=1, max_size=5), st.integers(50, 3000))
def test_occurrence_positions_are_exact(pattern, scan):
    word = universal_word_14(scan)
    rep = occurrence_check(word, pattern, scan)
    k = len(pattern)
    brute = [i + 1 for i in range(scan - k + 1) if word[i:i + k] == pattern]
    assert list(rep.positions) == brute
    assert rep.even + rep.odd == len(brute)


def test_word_alphas():
    a14 = word_to_alpha(WordGenerator(WordKind.UNIVERSAL14))
    box = a14.enclosure(40)
    assert 0 < box.lo and box.hi < 1
    assert max(a14.digits(5000)[1:]) <= 4
    spiked = word_to_alpha(WordGenerator(WordKind.SPIKED))
    assert max(spiked.digits(40_000)) >= 6


def test_universal45_terms_avoid_zero():
    alpha = word_to_alpha(WordGenerator(WordKind.UNIVERSAL45))
    floats = float_terms(alpha, 20_000)
    assert min(abs(v) for v in floats) > 1 / 7


def test_target_scan_finds_edges():
    alpha = word_to_alpha(WordGenerator(WordKind.UNIVERSAL14))
    r2 = QuadraticSurd.sqrt(2)
    hits = target_hit_scan(alpha, [1 / r2, -1 / r2], 100_000, with_convergents=True)
    for h in hits:
        assert h.distance < Fraction(1, 1000)
        assert h.target * float(h.value.mid) > 0
        # the reported pair reproduces the value
        a = alpha.enclosure(h.n + 60)
        direct = h.m * (h.k - h.m * a.mid)
        assert abs(direct - h.value.mid) <= h.value.width + Fraction(1, 10**6)


def test_target_scan_spiked_large_target():
    alpha = word_to_alpha(WordGenerator(WordKind.SPIKED))
    hits = target_hit_scan(alpha, [Fraction(5, 2)], 100_000, multipliers=(1, 2, 3, 4), secondary=True)
    assert hits[0].distance < Fraction(1, 100)


def test_target_scan_rejects_bad_tolerance():
    with pytest.raises(ValueError):
        target_hit_scan(word_to_alpha(WordGenerator(WordKind.UNIVERSAL14)), [0.5], 100, tol=0)
