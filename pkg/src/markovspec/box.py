"""Rectangular-well eigenvalues, the brute-force scan of m^2 (k/m - alpha)
and the Pais-Uhlenbeck energy grid.

Eigenvalues are reported as exact coefficients of pi^2.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

from .contfrac import ContinuedFraction
from .exact import Interval, QuadraticSurd, Real

Value = Union[Fraction, QuadraticSurd, Interval]


@dataclass(frozen=True)
class BoxEigenvalue:
    """lambda_{k,m} = coeff * pi^2 with coeff = k^2/a^2 - m^2/b^2."""

    k: int
    m: int
    coeff: Real


def eigenvalues(a: Real, b: Real, k_max: int, m_max: int) -> list[BoxEigenvalue]:
    """All lambda_{k,m} for |k| <= k_max, |m| <= m_max.

    Each value is checked against the factored form
    (m^2/a^2) (k/m - a/b) (k/m + a/b) whenever m != 0.
    """
    if not (a > 0 and b > 0):
        raise ValueError("side lengths must be positive")
    if k_max < 1 or m_max < 1:
        raise ValueError("k_max and m_max must be >= 1")
    a2, b2 = a * a, b * b
    alpha = a / b if not isinstance(b, int) else a / Fraction(b)
    out = []
    for k in range(-k_max, k_max + 1):
        for m in range(-m_max, m_max + 1):
            coeff = k * k / _frac(a2) - m * m / _frac(b2)
            if m:
                r = Fraction(k, m)
                factored = (m * m / _frac(a2)) * (r - alpha) * (r + alpha)
                assert factored == coeff, (k, m)
            out.append(BoxEigenvalue(k, m, coeff))
    return out


def _frac(x):
    return Fraction(x) if isinstance(x, int) else x


@dataclass(frozen=True)
class ScanPoint:
    k: int
    m: int
    value: Value  # m^2 (k/m - alpha) = m (k - m alpha)


def _alpha_real(alpha, m_max: int):
    """Exact value, or a rational enclosure tight enough for m <= m_max."""
    if isinstance(alpha, ContinuedFraction):
        if alpha.is_stream:
            depth = 16
            while True:
                box = alpha.enclosure(depth)
                if box.width * m_max * m_max < Fraction(1, 10**30):
                    return box
                depth *= 2
        return alpha.value()
    if isinstance(alpha, int):
        return Fraction(alpha)
    return alpha


def _value(k: int, m: int, alpha) -> Value:
    if isinstance(alpha, Interval):
        return Interval(m * (k - m * alpha.hi), m * (k - m * alpha.lo))
    return m * (k - m * alpha)


def _in_window(v: Value, window: Interval, open_window: bool) -> bool:
    if isinstance(v, Interval):
        if open_window:
            return window.lo < v.hi and v.lo < window.hi
        return window.lo <= v.hi and v.lo <= window.hi
    if open_window:
        return window.lo < v < window.hi
    return window.lo <= v <= window.hi


def _nearest(m: int, alpha) -> int:
    x = alpha.mid if isinstance(alpha, Interval) else alpha
    return math.floor(m * x + Fraction(1, 2))


def _scan_range(x, window: Interval, m_lo: int, m_hi: int, reach, open_window: bool) -> list[ScanPoint]:
    hits = []
    xf = float(x.mid if isinstance(x, Interval) else x)
    w_lo, w_hi = float(window.lo), float(window.hi)
    for m in range(m_lo, m_hi + 1):
        k0 = _nearest(m, x)
        r = reach(m)
        # float screen; exact evaluation only near or inside the window
        slack = 1e-6 + 1e-12 * m * m
        for k in range(k0 - r, k0 + r + 1):
            fv = m * (k - m * xf)
            if fv < w_lo - slack - 1e-12 * abs(fv) or fv > w_hi + slack + 1e-12 * abs(fv):
                continue
            v = _value(k, m, x)
            if _in_window(v, window, open_window):
                hits.append(ScanPoint(k, m, v))
    return hits


class _Reach:
    def __init__(self, exhaustive: bool, span: Optional[int]):
        self.exhaustive, self.span = exhaustive, span

    def __call__(self, m: int) -> int:
        if not self.exhaustive:
            return 1
        return self.span if self.span is not None else m + 2


def singular_scan(
    alpha,
    window: Union[Interval, tuple],
    m_max: int,
    exhaustive: bool = False,
    span: Optional[int] = None,
    open_window: bool = True,
    workers: int = 1,
) -> list[ScanPoint]:
    """All values m^2 (k/m - alpha) inside ``window`` for 1 <= m <= m_max.

    The fast path tries k = round(m alpha) + {-1, 0, 1}; with ``exhaustive``
    every k within ``span`` (default m + 2) of m alpha is swept instead.
    With ``workers > 1`` the m-range is split across processes and the
    results merged in (m, k) order.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if not isinstance(window, Interval):
        window = Interval(Fraction(window[0]), Fraction(window[1]))
    x = _alpha_real(alpha, m_max)
    reach = _Reach(exhaustive, span)
    if workers <= 1 or m_max < 2 * workers:
        return _scan_range(x, window, 1, m_max, reach, open_window)
    step = -(-m_max // workers)
    bounds = [(lo, min(m_max, lo + step - 1)) for lo in range(1, m_max + 1, step)]
    with ProcessPoolExecutor(workers) as pool:
        parts = pool.map(_scan_range, *zip(*[(x, window, lo, hi, reach, open_window) for lo, hi in bounds]))
        hits = [h for part in parts for h in part]
    return sorted(hits, key=lambda h: (h.m, h.k))


def hit_free_threshold(alpha, mu: Real, delta: Fraction, m_max: int) -> Optional[int]:
    """Smallest m0 such that no scan value with m0 <= m <= m_max lies in
    (-mu + delta, mu - delta); None when that window is empty."""
    lo, hi = -mu + delta, mu - delta
    if not lo < hi:
        return None
    x = _alpha_real(alpha, m_max)
    if isinstance(x, Interval):
        raise TypeError("an exact alpha is needed")
    window = Interval(Fraction(math.floor(lo * 10**12), 10**12), Fraction(math.ceil(hi * 10**12), 10**12))
    last = 0
    for p in _scan_range(x, window, 1, m_max, _Reach(False, None), True):
        if lo < p.value < hi:
            last = max(last, p.m)
    return last + 1


def scan_values_float(points: Iterable[ScanPoint]) -> list[tuple[int, float]]:
    """(m, value) pairs, plot-ready."""
    return [(p.m, float(p.value)) for p in points]


@dataclass(frozen=True)
class PUEnergy:
    n: int
    m: int
    energy: Real


@dataclass
class PUSpectrum:
    energies: list[PUEnergy]
    min_abs_nonzero: Optional[Real]
    min_gap: Optional[Real]
    minimum: Real


def pu_spectrum(omega_x: Real, omega_y: Real, n_max: int, m_max: int) -> PUSpectrum:
    """E_{nm} = (n + 1/2) omega_x - (m + 1/2) omega_y on 0 <= n <= n_max, 0 <= m <= m_max.

    Reports the smallest nonzero |E| and the smallest gap between distinct
    energies.  All comparisons are exact.
    """
    if not (omega_x > 0 and omega_y > 0):
        raise ValueError("frequencies must be positive")
    half = Fraction(1, 2)
    energies = [
        PUEnergy(n, m, (n + half) * omega_x - (m + half) * omega_y)
        for n in range(n_max + 1)
        for m in range(m_max + 1)
    ]
    distinct = _sorted_exact({e.energy for e in energies})
    nonzero = [abs(v) for v in distinct if v != 0]
    min_abs = min(nonzero) if nonzero else None
    gaps = [hi - lo for lo, hi in zip(distinct, distinct[1:])]
    return PUSpectrum(energies, min_abs, min(gaps) if gaps else None, distinct[0])


def _sorted_exact(values: Iterable[Real]) -> list[Real]:
    # float keys order everything except near-ties, which exact comparison settles
    vals = sorted(values, key=float)
    for i in range(1, len(vals)):
        j = i
        while j > 0 and vals[j] < vals[j - 1]:
            vals[j], vals[j - 1] = vals[j - 1], vals[j]
            j -= 1
    return vals


def rational_scan_denominator_check(alpha: Fraction, points: Iterable[ScanPoint]) -> bool:
    """True iff every value lies in (1/s) Z where alpha = r/s."""
    s = Fraction(alpha).denominator
    return all((p.value * s).denominator == 1 for p in points)


def eigenvalues_csv(values: Iterable[BoxEigenvalue]) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(["k", "m", "lambda_coeff_num", "lambda_coeff_den"])
    for ev in values:
        c = ev.coeff
        if isinstance(c, QuadraticSurd):
            out.writerow([ev.k, ev.m, str(c), 1])
        else:
            c = Fraction(c)
            out.writerow([ev.k, ev.m, c.numerator, c.denominator])
    return buf.getvalue()


def pu_summary_json(spec: PUSpectrum) -> str:
    def show(v):
        return None if v is None else {"exact": str(v), "decimal": float(v)}

    return json.dumps(
        {
            "count": len(spec.energies),
            "min_abs_nonzero": show(spec.min_abs_nonzero),
            "min_gap": show(spec.min_gap),
            "minimum": show(spec.minimum),
        },
        indent=2,
        sort_keys=True,
    )
