"""Approximation terms q_N^2 (p_N/q_N - alpha), their accumulation points,
Markov constants, secondary convergents, Legendre filtering and Mobius
transport of witness sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

from .contfrac import (
    ContinuedFraction,
    Convergent,
    bracket_digits,
    bracket_reversed,
    convergents,
    expand,
    iter_convergents,
    tail,
)
from .exact import Interval, IntMatrix2, QuadraticSurd, Real, enclose, sign

Value = Union[QuadraticSurd, Fraction, Interval]

TAIL_WINDOW = 30


@dataclass(frozen=True)
class ApproxTerm:
    """One term q_N^2 (p_N/q_N - alpha) with its convergent.

    ``value`` is an exact surd for quadratic alpha and a rational enclosure
    for streamed alpha.  ``next_digit`` is a_{N+1}.
    """

    n: int
    convergent: Optional[Convergent]
    value: Value
    next_digit: int

    @property
    def sign(self) -> int:
        return self.value.sign() if isinstance(self.value, (Interval, QuadraticSurd)) else sign(self.value)

    @property
    def enclosure(self) -> Interval:
        return enclose(self.value)

    def __float__(self) -> float:
        return float(self.value)

    def bracket_holds(self) -> bool:
        """1/(2 + a_{N+1}) < |value| < 1/a_{N+1}, decided rigorously."""
        lo, hi = Fraction(1, 2 + self.next_digit), Fraction(1, self.next_digit)
        if isinstance(self.value, Interval):
            mag = self.value.abs()
            return lo < mag.lo and mag.hi < hi
        mag = abs(self.value)
        return lo < mag < hi


def _require_irrational(cf: ContinuedFraction) -> None:
    if cf.is_finite:
        raise ValueError("alpha is rational: its spectrum is empty and the term sequence terminates")


def as_cf(alpha) -> ContinuedFraction:
    return expand(alpha)


@lru_cache(maxsize=4096)
def _periodic_value(cf: ContinuedFraction) -> Real:
    return cf.value()


def tail_value(cf: ContinuedFraction, n: int) -> Real:
    """Exact alpha_n = [a_n, a_{n+1}, ...] for a periodic expansion."""
    return _periodic_value(tail(cf, n))


def tail_enclosure(cf: ContinuedFraction, n: int, depth: int = TAIL_WINDOW) -> Interval:
    """Rigorous bracket of alpha_n using digits a_n .. a_{n+depth}."""
    return bracket_digits([cf.digit(i) for i in range(n, n + depth + 1)])


def tail_sum_bracket(cf: ContinuedFraction, n: int, depth: int = 2) -> Interval:
    """Two-sided bracket of alpha_{n+1} + q_{n-1}/q_n.

    With ``depth=2`` the tail is bracketed by
    b0 + 1/(b1 + 1/b2) and b0 + 1/(b1 + 1/(1 + b2)).
    """
    if n < 1:
        raise ValueError("tail_sum_bracket needs n >= 1")
    cf = as_cf(cf)
    q, q_prev = 1, 0
    for i in range(1, n + 1):
        q, q_prev = cf.digit(i) * q + q_prev, q
    return tail_enclosure(cf, n + 1, depth) + Fraction(q_prev, q)


def _term_value(n: int, tail_part, rev: Fraction) -> Value:
    s = tail_part + rev
    if isinstance(s, Interval):
        mag = s.reciprocal()
        return mag if n % 2 else -mag
    v = 1 / s
    return v if n % 2 else -v


def approx_sequence(alpha, n_max: int, window: int = TAIL_WINDOW) -> list[ApproxTerm]:
    """Terms t_N = (-1)^{N+1} / (alpha_{N+1} + q_{N-1}/q_N) for N = 0..n_max."""
    cf = as_cf(alpha)
    _require_irrational(cf)
    terms = []
    q_prev = 0
    for conv in convergents(cf, n_max):
        n = conv.index
        rev = Fraction(q_prev, conv.q)
        if cf.is_periodic:
            tail_part = tail_value(cf, n + 1)
        else:
            tail_part = tail_enclosure(cf, n + 1, window)
        terms.append(ApproxTerm(n, conv, _term_value(n, tail_part, rev), cf.digit(n + 1)))
        q_prev = conv.q
    return terms


def direct_term(alpha_value: Real, conv: Convergent) -> Real:
    """q^2 (p/q - alpha) = q (p - q alpha), evaluated from the definition."""
    return conv.q * (conv.p - conv.q * alpha_value)


def stream_term_enclosure(cf: ContinuedFraction, n: int, window: int = TAIL_WINDOW) -> Interval:
    """Enclosure of t_n using only ``window`` digits on each side of n.

    Avoids the convergent recurrence entirely, so it is cheap at any depth.
    """
    back = [cf.digit(i) for i in range(n, max(0, n - window), -1)]
    rev = bracket_reversed(back, complete=n - window <= 0)
    return _term_value(n, tail_enclosure(cf, n + 1, window), rev)


def float_terms(cf: ContinuedFraction, n_max: int, lookahead: int = 40) -> list[float]:
    """Fast floating-point t_0..t_{n_max}; a screening pass, not a proof."""
    top = n_max + 1 + lookahead
    digits = [cf.digit(i) for i in range(top + 1)]
    tails = [0.0] * (top + 2)
    tails[top] = digits[top] + 0.5
    for i in range(top - 1, 0, -1):
        tails[i] = digits[i] + 1.0 / tails[i + 1]
    out = []
    rev = 0.0
    for n in range(n_max + 1):
        if n >= 1:
            rev = 1.0 / (digits[n] + rev)
        v = 1.0 / (tails[n + 1] + rev)
        out.append(v if n % 2 else -v)
    return out


# accumulation points

@dataclass
class AccumulationReport:
    """Limit points of the term sequence.

    ``points`` are exact surds (quadratic alpha) or cluster centres (streams).
    ``witness_error`` maps each point to |t_N - point| at the deepest checked
    term of its witnessing subsequence.
    """

    points: list
    period_length: int = 0
    window: Optional[Interval] = None
    witness_depth: int = 0
    witness_error: dict = field(default_factory=dict)
    clusters: list = field(default_factory=list)

    def to_dict(self, digits: int = 20) -> dict:
        from .exact import to_decimal

        out = []
        for x in self.points:
            entry = {"decimal": to_decimal(x, digits)[0] if not isinstance(x, float) else repr(x)}
            if isinstance(x, QuadraticSurd):
                entry["surd"] = x.to_dict()
            elif isinstance(x, Fraction):
                entry["rational"] = str(x)
            out.append(entry)
        return {
            "points": out,
            "period_length": self.period_length,
            "witness_depth": self.witness_depth,
        }


def residue_limits(cf: ContinuedFraction) -> list[tuple[int, Real]]:
    """(first index N, limit) for every residue class of N in the periodic part.

    The limit along N = N0 + kL is (-1)^{N+1} / (eta - conj(eta)) with eta
    the purely periodic tail alpha_{N+1}.
    """
    if not cf.is_periodic:
        raise ValueError("residue limits need a quadratic (periodic) expansion")
    s, ell = len(cf.prefix), len(cf.period)
    big_l = ell if ell % 2 == 0 else 2 * ell
    out = []
    for r in range(big_l):
        n = s + r
        eta = tail_value(cf, n + 1)
        limit = 1 / (eta - eta.conjugate())
        out.append((n, limit if n % 2 else -limit))
    return out


def quad_accumulation_set(alpha, witness_depth: int = 60) -> AccumulationReport:
    """Exact accumulation points of the term sequence of a quadratic alpha."""
    cf = as_cf(alpha)
    if not cf.is_periodic:
        raise ValueError("quad_accumulation_set needs a quadratic irrational")
    ell = len(cf.period)
    limits = residue_limits(cf)
    big_l = len(limits)
    points = sorted(set(lim for _, lim in limits))
    bound = ell if ell % 2 == 0 else 2 * ell
    assert len(points) <= bound
    assert any(-Fraction(1, 2) < x < Fraction(1, 2) for x in points)

    depth = max(witness_depth, len(cf.prefix) + 2 * big_l)
    terms = approx_sequence(cf, depth)
    errors: dict = {}
    for n0, lim in limits:
        last = max(n for n in range(n0, depth + 1, big_l))
        err = float(abs(terms[last].value - lim))
        errors[lim] = min(errors.get(lim, math.inf), err)
    return AccumulationReport(points, ell, Interval(-1, 1), depth, errors)


@dataclass
class Cluster:
    centre: float
    hull: tuple[float, float]
    indices: list[int]


def cluster_values(
    values: Sequence[tuple[int, float]], radius: float = 1e-6, min_hits: int = 3
) -> list[Cluster]:
    """Group distinct values chained within ``radius``; keep groups of at
    least ``min_hits`` distinct values.  Exact repeats count once.
    """
    first_seen: dict[float, int] = {}
    for n, v in values:
        first_seen.setdefault(v, n)
    ordered = sorted(first_seen.items())
    clusters: list[Cluster] = []
    group: list[tuple[float, int]] = []

    def flush():
        if len(group) >= min_hits:
            idx = sorted(n for _, n in group)
            centre = max(group, key=lambda t: t[1])[0]
            clusters.append(Cluster(centre, (group[0][0], group[-1][0]), idx))

    for v, n in ordered:
        if group and v - group[-1][0] > radius:
            flush()
            group = []
        group.append((v, n))
    flush()
    return clusters


def stream_accumulation(
    alpha, n_max: int, start: int = 0, radius: float = 1e-6, min_hits: int = 3
) -> AccumulationReport:
    """Finite-depth cluster report for the term sequence of any alpha."""
    cf = as_cf(alpha)
    _require_irrational(cf)
    vals = [(n, v) for n, v in enumerate(float_terms(cf, n_max)) if n >= start]
    clusters = cluster_values(vals, radius, min_hits)
    return AccumulationReport([c.centre for c in clusters], 0, None, n_max, clusters=clusters)


# Markov constant

@dataclass(frozen=True)
class MarkovEstimate:
    """Minimum of |t_N| over N in [start, depth] with a rigorous bracket of
    that minimum from 1/(2 + a_{N+1}) < |t_N| < 1/a_{N+1}."""

    estimate: float
    lower: Fraction
    upper: Fraction
    start: int
    depth: int


def markov_constant(alpha, mode: str = "exact", depth: int = 1000):
    cf = as_cf(alpha)
    _require_irrational(cf)
    if mode == "exact":
        if not cf.is_periodic:
            raise ValueError("exact Markov constant is available for quadratic irrationals only")
        return min(abs(x) for x in quad_accumulation_set(cf).points)
    if mode != "numeric":
        raise ValueError(f"unknown mode {mode!r}")
    start = depth // 2
    floats = float_terms(cf, depth)
    best = min(range(start, depth + 1), key=lambda n: abs(floats[n]))
    mag = stream_term_enclosure(cf, best).abs()
    a_max = max(cf.digit(n + 1) for n in range(start, depth + 1))
    return MarkovEstimate(
        estimate=float(mag.mid),
        lower=Fraction(1, 2 + a_max),
        upper=min(Fraction(1, cf.digit(n + 1)) for n in range(start, depth + 1)),
        start=start,
        depth=depth,
    )


HURWITZ = QuadraticSurd(0, 1, 5, 5)  # 1/sqrt(5)


# secondary convergents

@dataclass(frozen=True)
class SecondaryTerm:
    n: int
    a: int
    k: int
    m: int
    value: Value


def secondary_convergent_terms(alpha, n: int, a: int, window: int = TAIL_WINDOW) -> SecondaryTerm:
    """m^2 (k/m - alpha) for k/m = (a p_N + p_{N-1}) / (a q_N + q_{N-1}).

    Evaluated as (-1)^N (a + r) (alpha_{N+1} - a) / (alpha_{N+1} + r),
    r = q_{N-1}/q_N, and cross-checked against the direct definition.  The
    secondary convergents sit on the same side of alpha as p_{N-1}/q_{N-1},
    hence the sign (-1)^N.
    """
    cf = as_cf(alpha)
    _require_irrational(cf)
    nxt = cf.digit(n + 1)
    if not 1 <= a <= nxt - 1:
        raise ValueError(f"a={a} outside 1..a_(N+1)-1 = 1..{nxt - 1}")
    convs = convergents(cf, n)
    p_n, q_n = convs[n].p, convs[n].q
    p_prev, q_prev = (convs[n - 1].p, convs[n - 1].q) if n >= 1 else (1, 0)
    r = Fraction(q_prev, q_n)
    k, m = a * p_n + p_prev, a * q_n + q_prev
    sgn = -1 if n % 2 else 1
    if cf.is_periodic:
        t = tail_value(cf, n + 1)
        value = sgn * (a + r) * (t - a) / (t + r)
        direct = m * (k - m * cf.value())
        assert value == direct, (value, direct)
    else:
        t = tail_enclosure(cf, n + 1, window)
        # (t - a)/(t + r) = 1 - (a + r)/(t + r) is increasing in t
        lo = (a + r) * (1 - (a + r) / (t.lo + r))
        hi = (a + r) * (1 - (a + r) / (t.hi + r))
        value = Interval(lo, hi) if sgn > 0 else Interval(-hi, -lo)
        alpha_box = bracket_digits(cf.digits(n + window + 2))
        direct = Interval.hull(m * (k - m * alpha_box.lo), m * (k - m * alpha_box.hi))
        assert value.lo <= direct.hi and direct.lo <= value.hi
    return SecondaryTerm(n, a, k, m, value)


# Legendre filter

def _alpha_enclosure(cf: ContinuedFraction, width: Fraction) -> Interval:
    depth = 8
    while True:
        box = cf.enclosure(depth)
        if box.width < width:
            return box
        depth *= 2


def legendre_filter(alpha, q_max: int) -> list[Fraction]:
    """All p/q with q <= q_max and |alpha - p/q| < 1/(2 q^2).

    Only p = round(q alpha) can qualify.  For irrational alpha every hit is
    asserted to be a convergent.
    """
    if q_max < 1:
        raise ValueError("q_max must be >= 1")
    if isinstance(alpha, ContinuedFraction):
        cf = alpha
        exact = cf.value() if not cf.is_stream else None
    else:
        exact = alpha
        cf = expand(alpha)
    box = None if exact is not None else _alpha_enclosure(cf, Fraction(1, 10**6 * (q_max**4 + 1)))
    hits: set[Fraction] = set()
    for q in range(1, q_max + 1):
        bound = Fraction(1, 2 * q * q)
        if exact is not None:
            p = round(q * exact) if not isinstance(exact, Fraction) else math.floor(q * exact + Fraction(1, 2))
            if abs(exact - Fraction(p, q)) < bound:
                hits.add(Fraction(p, q))
        else:
            p = math.floor(q * box.mid + Fraction(1, 2))
            d = box - Fraction(p, q)
            far, near = max(abs(d.lo), abs(d.hi)), min(abs(d.lo), abs(d.hi))
            if far < bound:
                hits.add(Fraction(p, q))
            elif near < bound:
                raise ArithmeticError(f"enclosure too wide to decide q={q}")
    out = sorted(hits, key=lambda x: (x.denominator, x))
    if not cf.is_finite:
        convs = set()
        for c in iter_convergents(cf):
            if c.q > q_max:
                break
            convs.add(c.value)
        stray = [x for x in out if x not in convs]
        assert not stray, f"non-convergent hits {stray}"
    return out


# Euler's number

def euler_digits(i: int) -> int:
    """Partial quotient a_i of e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]."""
    if i < 0:
        raise IndexError(i)
    if i == 0:
        return 2
    return 2 * (i + 1) // 3 if i % 3 == 2 else 1


def euler_cf() -> ContinuedFraction:
    return ContinuedFraction.stream(euler_digits, name="e")


# witnesses and Mobius transport

@dataclass(frozen=True)
class SpectrumWitness:
    """Integer pairs (k_n, m_n) whose values m_n^2 (k_n/m_n - alpha) tend
    to ``target``.  Values are recomputed on demand."""

    k: tuple[int, ...]
    m: tuple[int, ...]
    target: Real
    errors: tuple[float, ...] = ()

    def values(self, alpha: Real) -> list[Real]:
        return [m * (k - m * alpha) for k, m in zip(self.k, self.m)]

    def deviations(self, alpha: Real) -> list[float]:
        return [float(abs(v - self.target)) for v in self.values(alpha)]


def convergent_witness(alpha, residue: int, modulus: int, depth: int) -> SpectrumWitness:
    """Witness from the convergents with N = residue (mod modulus), 1 <= N <= depth.

    For quadratic alpha ``modulus`` must be a multiple of the residue period
    of the term sequence; the target is then the exact limit.
    """
    cf = as_cf(alpha)
    convs = [c for c in convergents(cf, depth) if c.index % modulus == residue % modulus and c.index >= 1]
    target = None
    if cf.is_periodic:
        limits = residue_limits(cf)
        big_l = len(limits)
        if modulus % big_l:
            raise ValueError(f"modulus must be a multiple of {big_l}")
        target = next(lim for n, lim in limits if (n - residue) % big_l == 0)
    return SpectrumWitness(tuple(c.p for c in convs), tuple(c.q for c in convs), target)


def mobius_transport_witness(g: IntMatrix2, w: SpectrumWitness, alpha: Real) -> SpectrumWitness:
    """Map (k, m) -> (c k + d m, e k + f m); the new witness targets det(g) x for g alpha.

    Pairs are renormalised to m > 0 (the pair (-k, -m) has the same value).
    """
    g_alpha = g.apply(alpha)
    ks, ms = [], []
    for k, m in zip(w.k, w.m):
        k2, m2 = g.c * k + g.d * m, g.e * k + g.f * m
        if m2 < 0:
            k2, m2 = -k2, -m2
        if m2 == 0:
            continue
        ks.append(k2)
        ms.append(m2)
    target = g.det * w.target
    out = SpectrumWitness(tuple(ks), tuple(ms), target)
    return SpectrumWitness(out.k, out.m, target, tuple(out.deviations(g_alpha)))
