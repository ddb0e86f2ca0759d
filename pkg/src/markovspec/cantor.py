"""Cantor sets F_0(A) = {[0; a_1, a_2, ...] : a_i in A}: extrema, the sumset
interval, iterated-function-system covers and Hausdorff-dimension bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import mpmath
import numpy as np

from .contfrac import ContinuedFraction
from .exact import QuadraticSurd, Real

ASTELS_LOWER_BOUND = 0.263  # dim_H(F_0({4,5}) + F_0({4,5})) >= 0.263, cited constant
MAX_COVER_INTERVALS = 1 << 16


@dataclass(frozen=True)
class CantorSpec:
    alphabet: tuple[int, ...]

    def __init__(self, alphabet: Iterable[int]):
        letters = tuple(sorted(set(int(a) for a in alphabet)))
        if not letters:
            raise ValueError("alphabet must be non-empty")
        if letters[0] < 1:
            raise ValueError("partial quotients must be >= 1")
        object.__setattr__(self, "alphabet", letters)

    @classmethod
    def upto(cls, r: int) -> "CantorSpec":
        return cls(range(1, r + 1))

    @property
    def a_min(self) -> int:
        return self.alphabet[0]

    @property
    def a_max(self) -> int:
        return self.alphabet[-1]


def extrema(spec: CantorSpec) -> tuple[QuadraticSurd, QuadraticSurd]:
    """(min, max) of F_0: [0; (a_max, a_min)^w] and [0; (a_min, a_max)^w]."""
    if len(spec.alphabet) == 1:
        point = ContinuedFraction.periodic([0], [spec.a_min]).value()
        return point, point
    lo = ContinuedFraction.periodic([0], [spec.a_max, spec.a_min]).value()
    hi = ContinuedFraction.periodic([0], [spec.a_min, spec.a_max]).value()
    return lo, hi


@dataclass(frozen=True)
class SumsetInterval:
    lo: Real
    hi: Real
    filled: bool  # True only where F_0 + F_0 is known to be the whole interval


def sumset_interval(spec: CantorSpec) -> SumsetInterval:
    """[2 min F_0, 2 max F_0]; interval filling is asserted for {1,2,3,4} only."""
    lo, hi = extrema(spec)
    return SumsetInterval(2 * lo, 2 * hi, spec.alphabet == (1, 2, 3, 4))


def contraction_constant(spec: CantorSpec) -> Real:
    """L = 1/(min F + a_min)^2 bounds |f_z'| on I for every letter z."""
    lo, _ = extrema(spec)
    return 1 / (lo + spec.a_min) ** 2


def ifs_map(z: int, x: Real) -> Real:
    return 1 / (z + x)


@dataclass(frozen=True)
class CoverEstimate:
    depth: int
    interval_count: int
    max_interval_length: Real
    length_bound: Real  # |I| * L^n
    dimension_upper: float  # log(count) / -log(max length) at this depth

    @property
    def bound_holds(self) -> bool:
        return self.max_interval_length <= self.length_bound


def cover_intervals(spec: CantorSpec, n: int, budget: int = MAX_COVER_INTERVALS) -> list[tuple[Real, Real]]:
    """Z_n: images f_{a_1} o ... o f_{a_n}(I) as exact (lo, hi) pairs."""
    if n < 0:
        raise ValueError("depth must be >= 0")
    count = len(spec.alphabet) ** n
    if count > budget:
        raise MemoryError(f"{count} intervals exceed the budget of {budget}")
    lo, hi = extrema(spec)
    level = [(lo, hi)]
    for _ in range(n):
        # f_z is decreasing: f_z([x, y]) = [f_z(y), f_z(x)]
        level = [(ifs_map(z, y), ifs_map(z, x)) for z in spec.alphabet for x, y in level]
    return level


def ifs_cover(spec: CantorSpec, n: int, budget: int = MAX_COVER_INTERVALS) -> CoverEstimate:
    if n < 1:
        raise ValueError("depth must be >= 1")
    level = cover_intervals(spec, n, budget)
    lo, hi = extrema(spec)
    longest = max(y - x for x, y in level)
    bound = (hi - lo) * contraction_constant(spec) ** n
    dim = math.log(len(level)) / -math.log(float(longest)) if len(level) > 1 else 0.0
    return CoverEstimate(n, len(level), longest, bound, dim)


def merge_intervals(intervals: Iterable[tuple], slack=0) -> list[tuple]:
    out: list[list] = []
    for x, y in sorted(intervals, key=lambda t: t[0]):
        if out and x <= out[-1][1] + slack:
            if y > out[-1][1]:
                out[-1][1] = y
        else:
            out.append([x, y])
    return [tuple(v) for v in out]


def sumset_gap_measure(spec: CantorSpec, n: int) -> float:
    """Length of [2 min, 2 max] left uncovered by Z_n + Z_n (floating point)."""
    lo, hi = (float(v) for v in extrema(spec))
    los, his = np.array([lo]), np.array([hi])
    for _ in range(n):
        los, his = (np.concatenate([1.0 / (z + his) for z in spec.alphabet]),
                    np.concatenate([1.0 / (z + los) for z in spec.alphabet]))
    s_lo = np.add.outer(los, los).ravel()
    s_hi = np.add.outer(his, his).ravel()
    order = np.argsort(s_lo, kind="stable")
    s_lo, s_hi = s_lo[order], np.maximum.accumulate(s_hi[order])
    gaps = np.clip(s_lo[1:] - s_hi[:-1], 0.0, None).sum()
    gaps += max(0.0, s_lo[0] - 2 * lo) + max(0.0, 2 * hi - s_hi[-1])
    return float(gaps)


@dataclass(frozen=True)
class HausdorffBounds:
    upper: mpmath.mpf
    below_half: bool  # decided exactly: log|A| / log(a_min + min F) < 1/2
    lower: Union[float, None]
    precision: int

    def to_dict(self) -> dict:
        return {
            "upper": mpmath.nstr(self.upper, self.precision),
            "upper_below_half": self.below_half,
            "lower": self.lower,
            "lower_source": "cited constant" if self.lower is not None else None,
            "precision_digits": self.precision,
        }


def hausdorff_bounds(spec: CantorSpec, precision: int = 50) -> HausdorffBounds:
    """Cover bound dim_H(F + F) <= log|A| / log(a_min + min F).

    For {4, 5} this is log 2 / log(4 + min F).  Being below 1/2 is equivalent
    to |A|^2 < a_min + min F, which is checked in exact arithmetic.
    """
    if len(spec.alphabet) < 2:
        raise ValueError("a single-letter alphabet gives a point, not a Cantor set")
    lo, _ = extrema(spec)
    base = lo + spec.a_min
    with mpmath.workdps(precision + 10):
        root = mpmath.sqrt(lo.d)
        base_mp = (lo.p + lo.q * root) / lo.r + spec.a_min
        upper = mpmath.log(len(spec.alphabet)) / mpmath.log(base_mp)
    below_half = len(spec.alphabet) ** 2 < base
    lower = ASTELS_LOWER_BOUND if spec.alphabet == (4, 5) else None
    return HausdorffBounds(upper, below_half, lower, precision)
