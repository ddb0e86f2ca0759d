import bisect
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from markovspec.cantor import (
    ASTELS_LOWER_BOUND,
    CantorSpec,
    contraction_constant,
    cover_intervals,
    extrema,
    hausdorff_bounds,
    ifs_cover,
    merge_intervals,
    sumset_gap_measure,
    sumset_interval,
)
from markovspec.exact import QuadraticSurd
from oracles import cf_digits_mp

R2 = QuadraticSurd.sqrt(2)


def test_extrema_examples():
    lo, hi = extrema(CantorSpec.upto(4))
    assert 2 * lo == R2 - 1
    assert hi == 2 * R2 - 2
    lo45, _ = extrema(CantorSpec([5, 4, 4]))
    assert lo45 == 2 * (QuadraticSurd.make(0, 1, 5, 30) - 1)
    assert float(lo45) == pytest.approx(0.19089, abs=1e-5)
    point = extrema(CantorSpec([1]))
    assert point[0] == point[1] == QuadraticSurd(-1, 1, 2, 5)


def test_extrema_digits_match_oracle():
    lo, hi = extrema(CantorSpec([2, 3, 7]))
    with mpmath.workdps(120):
        assert cf_digits_mp(mpmath.mpf(float(lo)), 6) == [0, 7, 2, 7, 2, 7]
        assert cf_digits_mp(mpmath.mpf(float(hi)), 6) == [0, 2, 7, 2, 7, 2]


def test_sumset_interval_examples():
    s = sumset_interval(CantorSpec.upto(4))
    assert (s.lo, s.hi) == (R2 - 1, 4 * (R2 - 1)) and s.filled
    assert float(s.lo) == pytest.approx(0.41421, abs=1e-5) and float(s.hi) == pytest.approx(1.65685, abs=1e-5)
    s45 = sumset_interval(CantorSpec([4, 5]))
    assert s45.lo == 4 * (QuadraticSurd.make(0, 1, 5, 30) - 1) and not s45.filled
    single = sumset_interval(CantorSpec([1]))
    assert single.lo == single.hi == 2 * QuadraticSurd(-1, 1, 2, 5)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        CantorSpec([])
    with pytest.raises(ValueError):
        CantorSpec([0, 3])
    with pytest.raises(ValueError):
        hausdorff_bounds(CantorSpec([3]))


def test_cover_one_step():
    spec = CantorSpec([4, 5])
    lo, hi = extrema(spec)
    level = cover_intervals(spec, 1)
    assert len(level) == 2
    assert all(lo <= a < b <= hi for a, b in level)


def test_cover_depth_ten():
    est = ifs_cover(CantorSpec([4, 5]), 10)
    assert est.interval_count == 1024
    assert est.bound_holds


def test_cover_budget():
    with pytest.raises(MemoryError):
        cover_intervals(CantorSpec.upto(4), 9)


@given(st.sets(st.integers(1, 6), min_size=2, max_size=4), st.integers(0, 4))
def test_covers_nest(alphabet, n):
    spec = CantorSpec(alphabet)
    outer = merge_intervals(cover_intervals(spec, n))
    starts = [x for x, _ in outer]
    for a, b in cover_intervals(spec, n + 1):
        x, y = outer[bisect.bisect_right(starts, a) - 1]
        assert x <= a and b <= y


@given(st.sets(st.integers(1, 6), min_size=2, max_size=3), st.integers(1, 6))
def test_contraction_bounds_lengths(alphabet, n):
    spec = CantorSpec(alphabet)
    lo, hi = extrema(spec)
    assert max(b - a for a, b in cover_intervals(spec, n)) <= (hi - lo) * contraction_constant(spec) ** n


def test_sumset_fills_for_four_letters():
    assert all(sumset_gap_measure(CantorSpec.upto(4), n) == 0 for n in range(6))


def test_sumset_gaps_for_sparser_alphabets():
    for spec in (CantorSpec.upto(3), CantorSpec([4, 5])):
        gaps = [sumset_gap_measure(spec, n) for n in range(1, 5)]
        assert gaps[-1] > 0
        assert all(a <= b + 1e-15 for a, b in zip(gaps, gaps[1:]))


def test_hausdorff_examples():
    hb = hausdorff_bounds(CantorSpec([4, 5]))
    with mpmath.workdps(60):
        ref = mpmath.log(2) / mpmath.log(4 + 2 * (mpmath.sqrt(mpmath.mpf(6) / 5) - 1))
        assert abs(hb.upper - ref) < mpmath.mpf(10) ** -45
    assert hb.below_half and 0 < hb.upper < 1
    assert hb.lower == ASTELS_LOWER_BOUND == 0.263
    assert hausdorff_bounds(CantorSpec([1, 2])).lower is None
    assert not hausdorff_bounds(CantorSpec([1, 2])).below_half
