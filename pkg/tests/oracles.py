"""Independent reference computations in high-precision floating point.

Nothing here uses the package's continued-fraction or surd code.
"""
import math

import mpmath

DPS = 400


def surd_mp(p, q, r, d):
    with mpmath.workdps(DPS):
        return (mpmath.mpf(p) + q * mpmath.sqrt(d)) / r


def cf_digits_mp(x, n, dps=DPS):
    """First n partial quotients of x by repeated floor/reciprocal."""
    out = []
    with mpmath.workdps(dps):
        for _ in range(n):
            a = int(mpmath.floor(x))
            out.append(a)
            x = 1 / (x - a)
    return out


def terms_mp(x, n, dps=DPS):
    """q_N (p_N - q_N x) for N = 0..n-1, with the convergents rebuilt here.

    ``x`` must carry enough digits: roughly 2 log10(q_n) plus a margin.
    """
    digits = cf_digits_mp(x, n, dps)
    p, p_prev, q, q_prev = 1, 0, 0, 1
    out = []
    with mpmath.workdps(dps):
        for a in digits:
            p, p_prev = a * p + p_prev, p
            q, q_prev = a * q + q_prev, q
            out.append(q * (p - q * x))
    return out


def e_mp(dps=DPS):
    with mpmath.workdps(dps):
        return +mpmath.e


def brute_min_value(x: float, m_lo: int, m_hi: int) -> float:
    """min |m (k - m x)| over m_lo <= m <= m_hi and every k within 2 of m x."""
    best = math.inf
    for m in range(m_lo, m_hi + 1):
        c = round(m * x)
        for k in range(c - 2, c + 3):
            best = min(best, abs(m * (k - m * x)))
    return best
