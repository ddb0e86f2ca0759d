"""Reproduction scripts: each returns measured-versus-expected checks.

A check marked ``diagnostic`` is reported but does not decide the verdict.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import mpmath

from .box import pu_spectrum, rational_scan_denominator_check, singular_scan
from .cantor import CantorSpec, extrema, hausdorff_bounds, sumset_interval
from .contfrac import ContinuedFraction
from .exact import IntMatrix2, QuadraticSurd, to_decimal
from .spectrum import (
    HURWITZ,
    approx_sequence,
    cluster_values,
    convergent_witness,
    euler_cf,
    float_terms,
    legendre_filter,
    markov_constant,
    mobius_transport_witness,
    quad_accumulation_set,
    secondary_convergent_terms,
    stream_term_enclosure,
)
from .words import WordGenerator, WordKind, target_hit_scan, word_to_alpha

GOLDEN = ContinuedFraction.periodic([], [1])
PERIOD4 = ContinuedFraction.periodic([], [1, 2, 1, 1])
ROOT6 = QuadraticSurd.sqrt(6)


@dataclass
class Check:
    label: str
    measured: object
    expected: object
    passed: bool
    diagnostic: bool = False

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "measured": _show(self.measured),
            "expected": _show(self.expected),
            "passed": self.passed,
            "diagnostic": self.diagnostic,
        }


@dataclass
class ReproResult:
    name: str
    criterion: int
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if not c.diagnostic)

    def add(self, label, measured, expected, passed, diagnostic=False) -> Check:
        c = Check(label, measured, expected, bool(passed), diagnostic)
        self.checks.append(c)
        return c

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "criterion": self.criterion,
            "verdict": "PASS" if self.passed else "FAIL",
            "checks": [c.to_dict() for c in self.checks],
        }
        out.update({k: _show(v) for k, v in self.extra.items()})
        return out

    def lines(self) -> list[str]:
        head = f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.criterion} ({self.name})"
        body = []
        for c in self.checks:
            tag = "info" if c.diagnostic else ("ok" if c.passed else "FAIL")
            body.append(f"    {tag:4} {c.label}: measured {_show(c.measured)}; expected {_show(c.expected)}")
        return [head] + body


def _show(v):
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_show(x) for x in (sorted(v, key=float) if isinstance(v, (set, frozenset)) else v)]
    if isinstance(v, dict):
        return {str(k): _show(x) for k, x in v.items()}
    if isinstance(v, (QuadraticSurd, Fraction)):
        return str(v)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 20)
    return v


def random_quadratic(rng: random.Random) -> QuadraticSurd:
    """A random irrational (p + q sqrt d)/r with small coefficients."""
    while True:
        d = rng.randint(2, 200)
        if math.isqrt(d) ** 2 == d:
            continue
        q = rng.choice([x for x in range(-5, 6) if x])
        x = QuadraticSurd.make(rng.randint(-20, 20), q, rng.randint(1, 20), d)
        if isinstance(x, QuadraticSurd):
            return x


def random_unimodular(rng: random.Random, lo: int = -5, hi: int = 5) -> IntMatrix2:
    while True:
        c, d, e, f = (rng.randint(lo, hi) for _ in range(4))
        if abs(c * f - d * e) == 1:
            return IntMatrix2(c, d, e, f)


# criteria

def golden_markov(seed: int = 0) -> ReproResult:
    res = ReproResult("golden-markov", 1)
    pts = quad_accumulation_set(GOLDEN).points
    res.add("accumulation set", pts, [-HURWITZ, HURWITZ], set(pts) == {HURWITZ, -HURWITZ})
    mu = markov_constant(GOLDEN, "exact")
    res.add("markov constant (exact)", mu, HURWITZ, mu == HURWITZ)
    t40 = approx_sequence(GOLDEN, 40)[40].value
    err = abs(float(abs(t40)) - 0.4472135955)
    res.add("|t_40| - 0.4472135955", err, "< 1e-12", err < 1e-12)
    decimal, _ = to_decimal(mu, 10)
    res.extra = {"markov_constant": {"surd": str(mu), "parts": mu.to_dict(), "decimal": decimal}}
    return res


def period4(seed: int = 0) -> ReproResult:
    res = ReproResult("period4", 2)
    report = quad_accumulation_set(PERIOD4)
    pts = set(report.points)
    expected = {-5 / (4 * ROOT6), 1 / ROOT6, 3 / (4 * ROOT6)}
    res.add("accumulation set (stated)", pts, expected, pts == expected)
    res.add("#D < period length", (len(pts), report.period_length), "3 < 4",
            len(pts) == 3 and report.period_length == 4)
    res.add("accumulation set equals the negated stated set", pts, {-x for x in expected},
            pts == {-x for x in expected}, diagnostic=True)
    # brute force: deep terms per residue class
    terms = approx_sequence(PERIOD4, 400)
    gap = max(float(abs(terms[n].value - min(pts, key=lambda x: float(abs(x - terms[n].value)))))
              for n in range(390, 401))
    res.add("deep terms reach the computed set", gap, "< 1e-30", gap < 1e-30, diagnostic=True)
    return res


def euler(seed: int = 0) -> ReproResult:
    res = ReproResult("euler", 3)
    e = euler_cf()
    n = 50
    t3n = stream_term_enclosure(e, 3 * n).abs()
    res.add("|t_3N| - 1/2 (N=50)", float(t3n.mid) - 0.5, "within 0.01", abs(t3n - Fraction(1, 2)).hi < Fraction(1, 100))
    t3n1 = stream_term_enclosure(e, 3 * n + 1).abs()
    res.add("|t_3N+1| (N=50)", float(t3n1.mid), "< 0.01", t3n1.hi < Fraction(1, 100))
    for a in (1, 2, 3):
        sec = secondary_convergent_terms(e, 3 * n + 1, a).value.abs()
        dev = abs(sec - (a + Fraction(1, 2)))
        res.add(f"secondary a={a}, |value| - (a+1/2)", float(sec.mid) - a - 0.5, "within 0.02", dev.hi < Fraction(2, 100))
    floats = float_terms(e, 1000)
    bad = [k for k in range(21, 1001) if 0.01 < abs(floats[k]) < 0.5]
    detail = [(k, round(floats[k], 6)) for k in bad[:4]]
    res.add("terms in (-1/2,1/2) farther than 0.01 from 0, N in 21..1000", {"count": len(bad), "first": detail}, 0, not bad)
    return res


def _bracket_violations(alpha, depth: int) -> int:
    return sum(1 for t in approx_sequence(alpha, depth) if not t.bracket_holds())


def bracket_corpus(seed: int = 0, depth: int = 1000, quadratics: int = 46) -> ReproResult:
    res = ReproResult("bracket-corpus", 4)
    rng = random.Random(seed)
    corpus = [(f"quadratic {x}", x) for x in (random_quadratic(rng) for _ in range(quadratics))]
    corpus += [(k.value, word_to_alpha(WordGenerator(k))) for k in WordKind]
    corpus.append(("e", euler_cf()))
    total = 0
    for name, alpha in corpus:
        total += _bracket_violations(alpha, depth)
    res.add(f"bracket violations over {len(corpus)} numbers to depth {depth}", total, 0, total == 0)
    return res


def legendre(seed: int = 0) -> ReproResult:
    res = ReproResult("legendre", 5)
    rng = random.Random(seed)
    alphas = [random_quadratic(rng) for _ in range(20)]
    strays = 0
    for alpha in alphas:
        try:
            legendre_filter(alpha, 500)
        except AssertionError:
            strays += 1
    res.add("non-convergent Legendre hits (q <= 500)", strays, 0, strays == 0)
    mismatch = 0
    for alpha in alphas:
        fast = singular_scan(alpha, (-1, 1), 200)
        slow = singular_scan(alpha, (-1, 1), 200, exhaustive=True)
        mismatch += fast != slow
    res.add("restricted vs unrestricted scan mismatches (m <= 200)", mismatch, 0, mismatch == 0)
    return res


def cantor_endpoints(seed: int = 0) -> ReproResult:
    res = ReproResult("cantor-endpoints", 6)
    root2 = QuadraticSurd.sqrt(2)
    lo4, _ = extrema(CantorSpec.upto(4))
    res.add("2 min F0(4)", 2 * lo4, root2 - 1, 2 * lo4 == root2 - 1)
    box = sumset_interval(CantorSpec.upto(4))
    with mpmath.workdps(40):
        ref_lo, ref_hi = mpmath.sqrt(2) - 1, 4 * mpmath.sqrt(2) - 4
    err = max(abs(float(box.lo) - float(ref_lo)), abs(float(box.hi) - float(ref_hi)))
    res.add("sumset interval endpoints", (float(box.lo), float(box.hi)), "[0.414213562.., 1.656854249..]", err < 1e-12)
    lo45, _ = extrema(CantorSpec([4, 5]))
    target = 2 * (QuadraticSurd.make(0, 1, 5, 30) - 1)  # 2 (sqrt(6/5) - 1)
    res.add("min F0({4,5})", lo45, target, lo45 == target)
    return res


def hausdorff(seed: int = 0, precision: int = 50) -> ReproResult:
    res = ReproResult("hausdorff", 7)
    hb = hausdorff_bounds(CantorSpec([4, 5]), precision)
    res.add("upper bound", hb.upper, "0.4837 +- 0.0001", abs(hb.upper - mpmath.mpf("0.4837")) <= mpmath.mpf("0.0001"))
    res.add("upper < 1/2 (exact)", hb.below_half, True, hb.below_half)
    res.add("lower bound", hb.lower, 0.263, hb.lower == 0.263)
    return res


def mobius(seed: int = 0, samples: int = 100, depth: int = 200) -> ReproResult:
    res = ReproResult("mobius", 8)
    rng = random.Random(seed)
    phi = GOLDEN.value()
    witnesses = [convergent_witness(GOLDEN, r, 2, depth) for r in (0, 1)]
    worst = 0.0
    for _ in range(samples):
        g = random_unimodular(rng)
        for w in witnesses:
            moved = mobius_transport_witness(g, w, phi)
            worst = max(worst, moved.errors[-1])
    res.add(f"max |limit - det(g) x| over {samples} matrices", worst, "< 1e-9", worst < 1e-9)
    return res


def words(seed: int = 0, depth: int = 100_000) -> ReproResult:
    res = ReproResult("words", 9)
    rng = random.Random(seed)
    r2 = QuadraticSurd.sqrt(2)
    edge = [1 / r2, -1 / r2, 1 / (4 * r2), -1 / (4 * r2)]
    lo, hi = float(1 / (4 * r2)), float(1 / r2)
    interior = [Fraction(rng.uniform(lo, hi)).limit_denominator(10**9) for _ in range(10)]
    u14 = word_to_alpha(WordGenerator(WordKind.UNIVERSAL14))
    hits = target_hit_scan(u14, edge + interior, depth)
    worst = max(float(h.distance) for h in hits)
    res.add("universal14: max distance to 14 targets", worst, "< 1e-3", worst < 1e-3)

    spiked = word_to_alpha(WordGenerator(WordKind.SPIKED))
    targets = [Fraction(7, 10), Fraction(3, 2), Fraction(5, 2), Fraction(21, 4)]
    hits = target_hit_scan(spiked, targets, depth, multipliers=(1, 2, 3, 4), secondary=True)
    worst = max(float(h.distance) for h in hits)
    res.add("spiked: max distance to {0.7, 1.5, 2.5, 5.25}", worst, "< 1e-2", worst < 1e-2)

    u45 = word_to_alpha(WordGenerator(WordKind.UNIVERSAL45))
    floats = float_terms(u45, depth)
    n_min = min(range(depth + 1), key=lambda n: abs(floats[n]))
    smallest = stream_term_enclosure(u45, n_min).abs()
    edge45 = Fraction(1, 7) - Fraction(1, 1000)
    res.add("universal45: min |t_N|", float(smallest.mid), "outside (-1/7+1e-3, 1/7-1e-3)", smallest.lo >= edge45)
    return res


def rational(seed: int = 0, m_max: int = 1000) -> ReproResult:
    res = ReproResult("rational", 10)
    alpha = Fraction(3, 7)
    pts = singular_scan(alpha, (-5, 5), m_max, exhaustive=True, span=6)
    res.add("scan values in (1/7)Z", len(pts), "all", rational_scan_denominator_check(alpha, pts))
    clusters = cluster_values([(p.m, float(p.value)) for p in pts])
    res.add("clusters", len(clusters), 0, not clusters)
    return res


def pu_density(seed: int = 0, grid: int = 200) -> ReproResult:
    res = ReproResult("pu-density", 11)
    phi = GOLDEN.value()
    spec = pu_spectrum(phi, 1, grid, grid)
    res.add(f"min nonzero |E| (phi, 1, {grid}x{grid})", float(spec.min_abs_nonzero), "< 1e-2", spec.min_abs_nonzero < Fraction(1, 100))
    for omega in (Fraction(3, 2), QuadraticSurd.sqrt(2)):
        gap = pu_spectrum(omega, omega, 30, 30).min_gap
        res.add(f"min gap with both frequencies {omega}", gap, omega, gap == omega)
    return res


SCRIPTS: dict[str, Callable[..., ReproResult]] = {
    "golden-markov": golden_markov,
    "period4": period4,
    "euler": euler,
    "bracket-corpus": bracket_corpus,
    "legendre": legendre,
    "cantor-endpoints": cantor_endpoints,
    "hausdorff": hausdorff,
    "mobius": mobius,
    "words": words,
    "rational": rational,
    "pu-density": pu_density,
}


def run(name: str, seed: int = 0) -> list[ReproResult]:
    if name == "all":
        return [fn(seed) for fn in SCRIPTS.values()]
    if name not in SCRIPTS:
        raise KeyError(f"unknown repro script {name!r}; choose from {', '.join(['all', *SCRIPTS])}")
    return [SCRIPTS[name](seed)]
