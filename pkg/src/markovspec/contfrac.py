"""Continued fractions: expansion, evaluation, convergents, tails, ordering
and splicing.

A :class:`ContinuedFraction` is one of three kinds:

* finite -- a tuple of digits in canonical form (no trailing 1);
* periodic -- a preperiod plus a minimal non-empty period;
* stream -- digits produced on demand by an index -> digit function or an
  iterator (cached, single consumer).
"""
from __future__ import annotations

import enum
import math
import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from .exact import Interval, IntMatrix2, QuadraticSurd, Real


class Convergent(NamedTuple):
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


class Ordering(enum.Enum):
    LT = "LT"
    GT = "GT"
    EQ = "EQ"  # equal up to the inspected depth


def _canonical_finite(digits: Sequence[int]) -> tuple[int, ...]:
    digits = tuple(int(a) for a in digits)
    if not digits:
        raise ValueError("a continued fraction needs at least one digit")
    if any(a < 1 for a in digits[1:]):
        raise ValueError(f"partial quotients after a0 must be >= 1: {digits}")
    if len(digits) > 1 and digits[-1] == 1:
        digits = digits[:-2] + (digits[-2] + 1,)
    return digits


def _minimal_period(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for ell in range(1, n + 1):
        if n % ell == 0 and period[:ell] * (n // ell) == period:
            return period[:ell]
    return period


class ContinuedFraction:
    """Digit sequence [a0; a1, a2, ...]."""

    def __init__(
        self,
        prefix: Sequence[int] = (),
        period: Sequence[int] = (),
        *,
        source: Union[Callable[[int], int], Iterator[int], None] = None,
        name: Optional[str] = None,
    ):
        self.name = name
        self._source = None
        self._cache: list[int] = []
        if source is not None:
            self.kind = "stream"
            self.prefix, self.period = (), ()
            if callable(source):
                self._source = source
            else:
                self._iter = iter(source)
            return
        if period:
            period = tuple(int(a) for a in period)
            prefix = tuple(int(a) for a in prefix)
            if any(a < 1 for a in period) or any(a < 1 for a in prefix[1:]):
                raise ValueError("partial quotients after a0 must be >= 1")
            if not prefix and period[0] < 1:
                raise ValueError("a purely periodic expansion needs a0 >= 1")
            period = _minimal_period(period)
            while prefix and prefix[-1] == period[-1]:
                period = (period[-1],) + period[:-1]
                prefix = prefix[:-1]
            self.kind = "periodic"
            self.prefix, self.period = prefix, period
        else:
            self.kind = "finite"
            self.prefix, self.period = _canonical_finite(prefix), ()

    # construction helpers

    @classmethod
    def finite(cls, digits: Sequence[int]) -> "ContinuedFraction":
        return cls(digits)

    @classmethod
    def periodic(cls, prefix: Sequence[int], period: Sequence[int]) -> "ContinuedFraction":
        if not period:
            raise ValueError("period must be non-empty")
        return cls(prefix, period)

    @classmethod
    def stream(cls, source, name: Optional[str] = None) -> "ContinuedFraction":
        return cls(source=source, name=name)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_periodic(self) -> bool:
        return self.kind == "periodic"

    @property
    def is_stream(self) -> bool:
        return self.kind == "stream"

    def __len__(self) -> int:
        if not self.is_finite:
            raise TypeError("infinite continued fraction has no length")
        return len(self.prefix)

    def digit(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if self.is_finite:
            if i >= len(self.prefix):
                raise IndexError(f"digit {i} beyond finite expansion of length {len(self.prefix)}")
            return self.prefix[i]
        if self.is_periodic:
            s = len(self.prefix)
            return self.prefix[i] if i < s else self.period[(i - s) % len(self.period)]
        if self._source is not None:
            return self._source(i)
        while len(self._cache) <= i:
            try:
                self._cache.append(next(self._iter))
            except StopIteration:
                raise IndexError(f"stream exhausted at digit {len(self._cache)}") from None
        return self._cache[i]

    def digits(self, n: int) -> list[int]:
        """The first ``n`` digits (fewer for a short finite expansion)."""
        if self.is_finite:
            return list(self.prefix[:n])
        return [self.digit(i) for i in range(n)]

    def has_digit(self, i: int) -> bool:
        if self.is_finite:
            return i < len(self.prefix)
        try:
            self.digit(i)
        except IndexError:
            return False
        return True

    def __iter__(self) -> Iterator[int]:
        i = 0
        while self.has_digit(i):
            yield self.digit(i)
            i += 1

    def value(self) -> Real:
        """Exact value; streams have none."""
        if self.is_finite:
            return eval_finite(self.prefix)
        if self.is_periodic:
            eta = _purely_periodic_value(self.period)
            return mobius_of_digits(self.prefix).apply(eta) if self.prefix else eta
        raise TypeError("a stream continued fraction has no exact value")

    def enclosure(self, depth: int = 40) -> Interval:
        """Rational interval containing the value, from ``depth`` digits."""
        if self.is_finite and len(self.prefix) <= depth:
            return Interval.point(eval_finite(self.prefix))
        return bracket_digits(self.digits(depth + 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContinuedFraction):
            return NotImplemented
        if self.is_stream or other.is_stream:
            return self is other
        return (self.kind, self.prefix, self.period) == (other.kind, other.prefix, other.period)

    def __hash__(self) -> int:
        if self.is_stream:
            return id(self)
        return hash((self.kind, self.prefix, self.period))

    def __repr__(self) -> str:
        if self.is_stream:
            return f"ContinuedFraction.stream({self.name or '...'})"
        return f"ContinuedFraction({str(self)!r})"

    def __str__(self) -> str:
        if self.is_stream:
            head = ", ".join(str(a) for a in self.digits(8)[1:])
            return f"[{self.digit(0)}; {head}, ...]"
        if self.is_finite:
            if len(self.prefix) == 1:
                return f"[{self.prefix[0]}]"
            return f"[{self.prefix[0]}; " + ", ".join(map(str, self.prefix[1:])) + "]"
        rest = tail(self, 1)
        parts = [str(a) for a in rest.prefix]
        parts.append("(" + ", ".join(map(str, rest.period)) + ")^w")
        return f"[{self.digit(0)}; " + ", ".join(parts) + "]"

    @classmethod
    def parse(cls, text: str) -> "ContinuedFraction":
        return parse_cf(text)


_CF_RE = re.compile(r"^\[(.*)\]$", re.S)
_PERIOD_RE = re.compile(r"\(([^()]*)\)\s*\^\s*(?:w|ω|omega)\s*$")


def parse_cf(text: str) -> ContinuedFraction:
    """Parse ``[a0; a1, ...]`` or ``[a0; a1, (b1, ..., bl)^w]``.

    A purely periodic expansion may also be written ``[(b1, ..., bl)^w]``.
    """
    m = _CF_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a continued fraction literal: {text!r}")
    body = m.group(1).strip()
    period: tuple[int, ...] = ()
    pm = _PERIOD_RE.search(body)
    if pm:
        period = tuple(_ints(pm.group(1)))
        if not period:
            raise ValueError(f"empty period in {text!r}")
        body = body[: pm.start()].strip().rstrip(",").strip()
    if ";" in body:
        head, rest = body.split(";", 1)
        prefix = [int(head)] + _ints(rest)
    else:
        prefix = _ints(body)
    if period:
        return ContinuedFraction.periodic(prefix, period)
    return ContinuedFraction.finite(prefix)


def _ints(s: str) -> list[int]:
    s = s.strip()
    if not s:
        return []
    return [int(tok) for tok in s.replace(";", ",").split(",") if tok.strip()]


# evaluation and convergents

def eval_finite(digits: Sequence[int]) -> Fraction:
    """Exact value of a finite digit list."""
    if len(digits) == 0:
        raise ValueError("empty continued fraction")
    value = Fraction(digits[-1])
    for a in reversed(digits[:-1]):
        value = a + 1 / value
    return value


def mobius_of_digits(digits: Sequence[int]) -> IntMatrix2:
    """Matrix of x -> [a0, ..., a_k, x], i.e. ((p_k, p_{k-1}), (q_k, q_{k-1}))."""
    p, p_prev, q, q_prev = 1, 0, 0, 1
    for a in digits:
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return IntMatrix2(p, p_prev, q, q_prev)


def _purely_periodic_value(period: Sequence[int]) -> QuadraticSurd:
    # eta = (P eta + P') / (Q eta + Q')  =>  Q eta^2 + (Q' - P) eta - P' = 0
    g = mobius_of_digits(period)
    P, Pp, Q, Qp = g.c, g.d, g.e, g.f
    b = Qp - P
    disc = b * b + 4 * Q * Pp
    return QuadraticSurd(-b, 1, 2 * Q, disc)


def convergents(cf: ContinuedFraction, n_max: int) -> list[Convergent]:
    """Convergents p_N/q_N for N = 0..n_max."""
    out = []
    p, p_prev, q, q_prev = 1, 0, 0, 1
    for n in range(n_max + 1):
        a = cf.digit(n)
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append(Convergent(n, p, q))
    return out


def iter_convergents(cf: ContinuedFraction) -> Iterator[Convergent]:
    p, p_prev, q, q_prev = 1, 0, 0, 1
    for n, a in enumerate(cf):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        yield Convergent(n, p, q)


def bracket_digits(digits: Sequence[int]) -> Interval:
    """Enclosure of every infinite continued fraction starting with ``digits``.

    With the tail x = [a0, ..., a_k, t] and t ranging over (1, inf), the value
    lies between [a0, ..., a_k] and [a0, ..., a_k + 1].
    """
    g = mobius_of_digits(digits)
    return Interval.hull(Fraction(g.c, g.e), Fraction(g.c + g.d, g.e + g.f))


def bracket_reversed(digits: Sequence[int], complete: bool) -> Interval:
    """Enclosure of [0, d1, d2, ...] given its leading partial quotients.

    ``complete`` marks that ``digits`` is the whole expansion, giving an exact
    point instead of a bracket.
    """
    if not digits:
        return Interval.point(0)
    if complete:
        return Interval.point(eval_finite([0, *digits]))
    return bracket_digits([0, *digits])


# Gauss map and expansions

def expand_rational(x) -> ContinuedFraction:
    x = Fraction(x)
    digits = []
    n, d = x.numerator, x.denominator
    while d:
        a, rem = divmod(n, d)
        digits.append(a)
        n, d = d, rem
    return ContinuedFraction.finite(digits)


def gauss_step(x):
    """One step of x -> 1/(x - floor x); returns ``(digit, next_state)``.

    Accepts a surd, a rational (must not be an integer) or a continued
    fraction, for which the next state is its tail.
    """
    if isinstance(x, ContinuedFraction):
        if x.is_finite and len(x) == 1:
            raise ValueError("integer reached; the Gauss map is undefined")
        return x.digit(0), tail(x, 1)
    a = math.floor(x)
    frac = x - a
    if frac == 0:
        raise ValueError(f"{x} is an integer; the Gauss map is undefined")
    return a, 1 / frac


def expand_quadratic(x: QuadraticSurd) -> ContinuedFraction:
    """Eventually periodic expansion, by cycle detection on Gauss-map states."""
    if not isinstance(x, QuadraticSurd):
        raise TypeError("expand_quadratic needs an irrational surd")
    seen: dict[QuadraticSurd, int] = {}
    digits: list[int] = []
    state = x
    while state not in seen:
        seen[state] = len(digits)
        a, state = gauss_step(state)
        digits.append(a)
    start = seen[state]
    return ContinuedFraction.periodic(digits[:start], digits[start:])


def expand(x) -> ContinuedFraction:
    if isinstance(x, ContinuedFraction):
        return x
    if isinstance(x, QuadraticSurd):
        return expand_quadratic(x)
    return expand_rational(x)


def tail(cf: ContinuedFraction, n: int) -> ContinuedFraction:
    """The shifted expansion [a_n, a_{n+1}, ...]."""
    if n < 0:
        raise IndexError(n)
    if n == 0:
        return cf
    if cf.is_finite:
        if n >= len(cf.prefix):
            raise IndexError(f"tail {n} out of range for length {len(cf.prefix)}")
        return ContinuedFraction.finite(cf.prefix[n:])
    if cf.is_periodic:
        s, ell = len(cf.prefix), len(cf.period)
        if n <= s:
            return ContinuedFraction.periodic(cf.prefix[n:], cf.period)
        k = (n - s) % ell
        return ContinuedFraction.periodic((), cf.period[k:] + cf.period[:k])
    name = f"{cf.name}>>{n}" if cf.name else None
    return ContinuedFraction.stream(lambda i, _cf=cf, _n=n: _cf.digit(i + _n), name=name)


def compare_alternate(x: ContinuedFraction, y: ContinuedFraction, depth: int) -> Ordering:
    """Real-number order read off the digits with alternating parity.

    A finite expansion behaves as if followed by a digit +inf.
    """
    for k in range(depth):
        xa = x.digit(k) if x.has_digit(k) else math.inf
        ya = y.digit(k) if y.has_digit(k) else math.inf
        if xa == ya:
            if xa == math.inf:
                return Ordering.EQ
            continue
        less = xa < ya if k % 2 == 0 else xa > ya
        return Ordering.LT if less else Ordering.GT
    return Ordering.EQ


def splice(
    prefix_source: ContinuedFraction, n: int, tail_source: ContinuedFraction, tail_from: int
) -> ContinuedFraction:
    """beta = [c_0, ..., c_n, t_{tail_from}, t_{tail_from + 1}, ...]."""
    if n < 0 or not prefix_source.has_digit(n):
        raise IndexError(f"prefix index {n} out of range")
    if tail_from < 1 or not tail_source.has_digit(tail_from):
        raise IndexError(f"tail index {tail_from} out of range")
    head = prefix_source.digits(n + 1)
    rest = tail(tail_source, tail_from)
    if rest.is_finite:
        return ContinuedFraction.finite(head + list(rest.prefix))
    if rest.is_periodic:
        return ContinuedFraction.periodic(head + list(rest.prefix), rest.period)
    k = len(head)
    return ContinuedFraction.stream(lambda i: head[i] if i < k else rest.digit(i - k))


def q_ratio(cf: ContinuedFraction, n: int) -> Fraction:
    """q_{n-1}/q_n from the recurrence (q_{-1} = 0)."""
    q, q_prev = 1, 0
    for i in range(1, n + 1):
        q, q_prev = cf.digit(i) * q + q_prev, q
    return Fraction(q_prev, q)


def reversal_ratio(cf: ContinuedFraction, n: int) -> Fraction:
    """q_{n-1}/q_n, checked against the reversed expansion [0, a_n, ..., a_1]."""
    if n < 1:
        raise ValueError("reversal ratio needs n >= 1")
    ratio = q_ratio(cf, n)
    rev = eval_finite([0] + [cf.digit(i) for i in range(n, 0, -1)])
    assert ratio == rev, (ratio, rev)
    return ratio


def from_digits(digits: Iterable[int]) -> ContinuedFraction:
    return ContinuedFraction.finite(list(digits))
