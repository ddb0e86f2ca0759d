"""Exact arithmetic: rationals, quadratic surds (p + q*sqrt(d))/r, rational
intervals and integer 2x2 Mobius actions.

Rationals are plain :class:`fractions.Fraction` values.  A
:class:`QuadraticSurd` is always irrational; any operation whose result lands
in Q returns a ``Fraction`` instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

SQUAREFREE_BOUND = 10**6


class MixedRadicandError(ValueError):
    """Arithmetic between surds living in different quadratic fields."""


class PoleError(ZeroDivisionError):
    """Mobius action evaluated at the pole e*x + f = 0."""


_KNOWN_SQUAREFREE: set[int] = set()


@lru_cache(maxsize=4096)
def squarefree_split(d: int, bound: int = SQUAREFREE_BOUND) -> tuple[int, int]:
    """Return ``(s, c)`` with ``d == s*s*c`` and ``c`` square-free.

    Primes up to ``bound`` are removed by trial division.  The leftover
    cofactor has only prime factors above ``bound``; it is accepted when it
    is 1, a perfect square, or smaller than ``bound**3`` (then it is prime,
    p*p' or p**2).  Anything else is rejected.
    """
    if d <= 0:
        raise ValueError(f"radicand must be positive, got {d}")
    for c in _KNOWN_SQUAREFREE:
        if d % c == 0:
            s = math.isqrt(d // c)
            if s * s * c == d:
                return s, c
    s, c, rest, k = 1, 1, d, 2
    while k <= bound and k * k <= rest:
        if rest % k == 0:
            e = 0
            while rest % k == 0:
                rest //= k
                e += 1
            s *= k ** (e // 2)
            c *= k ** (e % 2)
        k += 1 if k == 2 else 2
    root = math.isqrt(rest)
    if root * root == rest:
        s *= root
    elif rest < bound**3 or k * k > rest:
        c *= rest
    else:
        raise ValueError(f"cannot certify the square-free part of {d} within bound {bound}")
    if c > 1:
        _KNOWN_SQUAREFREE.add(c)
    return s, c


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an int or Fraction, got {type(x).__name__}")


@total_ordering
class QuadraticSurd:
    """The irrational number ``(p + q*sqrt(d)) / r`` in canonical form.

    Canonical: ``d`` square-free and > 1, ``q != 0``, ``r > 0`` and
    ``gcd(p, q, r) == 1``.  Use :meth:`make` when the inputs may collapse
    to a rational.
    """

    __slots__ = ("p", "q", "r", "d")

    def __init__(self, p: int, q: int, r: int, d: int):
        if r == 0:
            raise ZeroDivisionError("surd denominator is zero")
        s, c = squarefree_split(d)
        q *= s
        if c == 1 or q == 0:
            raise ValueError("value is rational; use QuadraticSurd.make")
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        self.p, self.q, self.r, self.d = p // g, q // g, r // g, c

    @classmethod
    def make(cls, p: int, q: int, r: int, d: int) -> Union[Fraction, "QuadraticSurd"]:
        s, c = squarefree_split(d)
        if c == 1 or q == 0:
            return Fraction(p + q * s, r)
        return cls(p, q, r, d)

    @classmethod
    def sqrt(cls, d: int) -> Union[Fraction, "QuadraticSurd"]:
        return cls.make(0, 1, 1, d)

    @classmethod
    def from_parts(cls, a: Fraction, b: Fraction, d: int) -> Union[Fraction, "QuadraticSurd"]:
        """Build ``a + b*sqrt(d)`` from rational parts."""
        if b == 0:
            return Fraction(a)
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(int(a * r), int(b * r), r, d)

    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def irrational_coeff(self) -> Fraction:
        return Fraction(self.q, self.r)

    def _coerce(self, other) -> tuple[Fraction, Fraction]:
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise MixedRadicandError(f"sqrt({self.d}) and sqrt({other.d}) do not mix")
            return other.rational_part, other.irrational_coeff
        return _as_fraction(other), Fraction(0)

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd(self.p, -self.q, self.r, self.d)

    def norm(self) -> Fraction:
        """``x * conj(x)``, always rational."""
        return Fraction(self.p * self.p - self.q * self.q * self.d, self.r * self.r)

    def __add__(self, other):
        try:
            c, e = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticSurd.from_parts(self.rational_part + c, self.irrational_coeff + e, self.d)

    __radd__ = __add__

    def __neg__(self) -> "QuadraticSurd":
        return QuadraticSurd(-self.p, -self.q, self.r, self.d)

    def __pos__(self) -> "QuadraticSurd":
        return self

    def __abs__(self) -> "QuadraticSurd":
        return -self if self < 0 else self

    def __sub__(self, other):
        try:
            c, e = self._coerce(other)
        except TypeError:
            return NotImplemented
        return QuadraticSurd.from_parts(self.rational_part - c, self.irrational_coeff - e, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            c, e = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.rational_part, self.irrational_coeff
        return QuadraticSurd.from_parts(a * c + b * e * self.d, a * e + b * c, self.d)

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticSurd":
        n = self.norm()
        return QuadraticSurd.from_parts(self.rational_part / n, -self.irrational_coeff / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            if other.d != self.d:
                raise MixedRadicandError(f"sqrt({self.d}) and sqrt({other.d}) do not mix")
            return self * other.reciprocal()
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        if c == 0:
            raise ZeroDivisionError("division of a surd by zero")
        return QuadraticSurd.from_parts(self.rational_part / c, self.irrational_coeff / c, self.d)

    def __rtruediv__(self, other):
        try:
            c = _as_fraction(other)
        except TypeError:
            return NotImplemented
        return self.reciprocal() * c

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        result: Union[Fraction, QuadraticSurd] = Fraction(1)
        base: Union[Fraction, QuadraticSurd] = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sign(self) -> int:
        """Sign of the value, decided with integer arithmetic only."""
        p, q = self.p, self.q
        if p >= 0 and q > 0:
            return 1
        if p <= 0 and q < 0:
            return -1
        # opposite signs: compare p^2 with q^2 d
        if p * p > q * q * self.d:
            return 1 if p > 0 else -1
        return 1 if q > 0 else -1

    def __floor__(self) -> int:
        q2d = self.q * self.q * self.d
        n = math.isqrt(q2d)
        if self.q < 0:
            n = -n - 1
        # p + q*sqrt(d) lies strictly inside (p + n, p + n + 1)
        return (self.p + n) // self.r

    def __ceil__(self) -> int:
        return math.floor(self) + 1

    def __round__(self, ndigits=None):
        if ndigits is not None:
            raise TypeError("surds round to integers only")
        return math.floor(self + Fraction(1, 2))

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadraticSurd):
            return (self.p, self.q, self.r, self.d) == (other.p, other.q, other.r, other.d)
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        return hash((QuadraticSurd, self.p, self.q, self.r, self.d))

    def __lt__(self, other) -> bool:
        if isinstance(other, float):
            return float(self) < other
        try:
            diff = self - other
        except TypeError:
            return NotImplemented
        return diff < 0 if isinstance(diff, Fraction) else diff.sign() < 0

    def __float__(self) -> float:
        if self.p * self.q < 0:
            # p and q*sqrt(d) cancel; the conjugate does not
            return float(self.norm()) / float(self.conjugate())
        k = 64
        root = math.isqrt(self.q * self.q * self.d << (2 * k))
        num = (self.p << k) + (root if self.q > 0 else -root)
        return float(Fraction(num, self.r << k))

    def __repr__(self) -> str:
        return f"QuadraticSurd({self.p}, {self.q}, {self.r}, {self.d})"

    def __str__(self) -> str:
        num = f"{self.p}{self.q:+d}*sqrt({self.d})"
        return f"({num})" if self.r == 1 else f"({num})/{self.r}"

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r, "d": self.d}


Real = Union[int, Fraction, QuadraticSurd]


def surd_arith(x: QuadraticSurd, y: Real, op: str) -> Real:
    """Dispatch ``x <op> y`` for op in add/sub/mul/div."""
    ops = {
        "add": lambda: x + y,
        "sub": lambda: x - y,
        "mul": lambda: x * y,
        "div": lambda: x / y,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op]()


def surd_floor(x: Real) -> int:
    return math.floor(x)


def surd_conjugate(x: Real) -> Real:
    return x.conjugate() if isinstance(x, QuadraticSurd) else Fraction(x)


def sign(x: Real) -> int:
    if isinstance(x, QuadraticSurd):
        return x.sign()
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Interval:
    """Closed interval with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x)

    @classmethod
    def hull(cls, a, b) -> "Interval":
        return cls(min(a, b), max(a, b))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def __add__(self, other) -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lo + other.lo, self.hi + other.hi)
        return Interval(self.lo + other, self.hi + other)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        return self + (-other)

    def scale(self, c) -> "Interval":
        return Interval.hull(self.lo * c, self.hi * c)

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def abs(self) -> "Interval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Interval(0, max(-self.lo, self.hi))

    __abs__ = abs

    def sign(self) -> int:
        """+1 / -1 when the interval excludes zero, else 0."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return 0

    def distance_bound(self, other: "Interval") -> Fraction:
        """Upper bound on |x - y| for x in self, y in other."""
        return max(self.hi - other.lo, other.hi - self.lo)

    def __float__(self) -> float:
        return float(self.mid)


def enclose(x: Union[Real, Interval], digits: int = 40) -> Interval:
    """Rational interval of width <= 10**-digits containing ``x``."""
    if isinstance(x, Interval):
        return x
    if isinstance(x, QuadraticSurd):
        scale = 10**digits
        n = math.floor(x * scale)
        return Interval(Fraction(n, scale), Fraction(n + 1, scale))
    return Interval.point(Fraction(x))


def to_decimal(x: Real, digits: int) -> tuple[str, Interval]:
    """Correctly rounded decimal string plus an enclosing interval.

    The interval has width at most ``10**-digits``; for rationals whose
    decimal expansion terminates within ``digits`` places both the string
    and the interval are exact.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    scale = 10**digits
    if not isinstance(x, QuadraticSurd):
        x = Fraction(x)
        if (x * scale).denominator == 1:
            return _format_scaled(int(x * scale), digits, strip=True), Interval.point(x)
    n = math.floor(x * scale)
    frac = x * scale - n
    rounded = n + 1 if frac > Fraction(1, 2) or (frac == Fraction(1, 2) and n % 2) else n
    return _format_scaled(rounded, digits), Interval(Fraction(n, scale), Fraction(n + 1, scale))


def _format_scaled(n: int, digits: int, strip: bool = False) -> str:
    neg = n < 0
    s = str(abs(n)).rjust(digits + 1, "0")
    whole, frac = s[:-digits], s[-digits:]
    if strip:
        frac = frac.rstrip("0")
    out = whole + ("." + frac if frac else "")
    return "-" + out if neg else out


@dataclass(frozen=True)
class IntMatrix2:
    """Integer matrix ((c, d), (e, f)) acting by x -> (c x + d) / (e x + f)."""

    c: int
    d: int
    e: int
    f: int

    def __post_init__(self):
        if self.det == 0:
            raise ValueError("matrix is singular")

    @property
    def det(self) -> int:
        return self.c * self.f - self.d * self.e

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.c * other.c + self.d * other.e,
            self.c * other.d + self.d * other.f,
            self.e * other.c + self.f * other.e,
            self.e * other.d + self.f * other.f,
        )

    def inverse(self) -> "IntMatrix2":
        if abs(self.det) != 1:
            raise ValueError("only unimodular matrices are invertible over Z")
        s = self.det
        return IntMatrix2(self.f * s, -self.d * s, -self.e * s, self.c * s)

    def apply(self, x: Real) -> Real:
        den = self.e * x + self.f
        if den == 0:
            raise PoleError(f"{x} is the pole of {self}")
        if isinstance(den, int):
            den = Fraction(den)
        return (self.c * x + self.d) / den


def mobius_apply(g: IntMatrix2, x: Real) -> Real:
    return g.apply(x)
