"""Infinite words used as partial-quotient sequences, an occurrence checker
and a finite-depth scan for term values near given targets.

Every word is index-addressable: ``word[i]`` is computed from the block
structure without materialising the prefix.
"""
from __future__ import annotations

import bisect
import enum
import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .contfrac import ContinuedFraction, convergents
from .exact import Interval, Real, enclose
from .spectrum import as_cf, float_terms, stream_term_enclosure


class WordKind(enum.Enum):
    UNIVERSAL14 = "universal14"
    UNIVERSAL45 = "universal45"
    SPIKED = "spiked"


class WordGenerator:
    """The word u_1 v_2 v_3 ... with u_n = u_{n-1} v_n.

    Universal kinds: v_n lists all length-n words over the alphabet in
    lexicographic order.  Spiked: v_n lists Copy(w) = (w 1)(w 2)...(w n)
    for every length-n word w over {1, 2, 3, 4}.
    """

    _ALPHABETS = {
        WordKind.UNIVERSAL14: (1, 2, 3, 4),
        WordKind.UNIVERSAL45: (4, 5),
        WordKind.SPIKED: (1, 2, 3, 4),
    }

    def __init__(self, kind: WordKind | str):
        self.kind = WordKind(kind)
        self.alphabet = self._ALPHABETS[self.kind]
        self._starts = [0]  # _starts[n-1] = |u_{n-1}|

    def block_length(self, n: int) -> int:
        """|v_n|."""
        size = len(self.alphabet) ** n
        if self.kind is WordKind.SPIKED:
            return size * n * (n + 1)
        return size * n

    def prefix_length(self, n: int) -> int:
        """|u_n|."""
        return sum(self.block_length(k) for k in range(1, n + 1))

    def _locate(self, i: int) -> tuple[int, int]:
        while self._starts[-1] <= i:
            n = len(self._starts)
            self._starts.append(self._starts[-1] + self.block_length(n))
        n = bisect.bisect_right(self._starts, i)
        return n, i - self._starts[n - 1]

    def _letter_of(self, word_index: int, n: int, pos: int) -> int:
        base = len(self.alphabet)
        digit = (word_index // base ** (n - 1 - pos)) % base
        return self.alphabet[digit]

    def __getitem__(self, i: int) -> int:
        """Letter at 0-based position i (the CF digit a_{i+1})."""
        if i < 0:
            raise IndexError(i)
        n, off = self._locate(i)
        if self.kind is WordKind.SPIKED:
            copy_len = n * (n + 1)
            w, off = divmod(off, copy_len)
            h, pos = divmod(off, n + 1)
            return h + 1 if pos == n else self._letter_of(w, n, pos)
        w, pos = divmod(off, n)
        return self._letter_of(w, n, pos)

    def prefix(self, length: int) -> list[int]:
        return list(self.iter_range(0, length))

    def iter_range(self, start: int, stop: int) -> Iterator[int]:
        for i in range(start, stop):
            yield self[i]

    def __iter__(self) -> Iterator[int]:
        i = 0
        while True:
            yield self[i]
            i += 1


def universal_word_14(prefix_len: int) -> list[int]:
    return WordGenerator(WordKind.UNIVERSAL14).prefix(prefix_len)


def universal_word_45(prefix_len: int) -> list[int]:
    return WordGenerator(WordKind.UNIVERSAL45).prefix(prefix_len)


def spiked_word(prefix_len: int) -> list[int]:
    return WordGenerator(WordKind.SPIKED).prefix(prefix_len)


@dataclass(frozen=True)
class OccurrenceReport:
    """Occurrences of ``pattern`` at 1-based positions n (a_n ... a_{n+k-1})."""

    pattern: tuple[int, ...]
    positions: tuple[int, ...]
    even: int
    odd: int
    min_count: int

    @property
    def satisfied(self) -> bool:
        return self.even >= self.min_count and self.odd >= self.min_count


def occurrence_check(
    word: WordGenerator | Sequence[int], pattern: Sequence[int], scan_len: int, min_count: int = 1
) -> OccurrenceReport:
    pattern = tuple(pattern)
    if scan_len < len(pattern):
        raise ValueError("scan_len shorter than the pattern")
    letters = word.prefix(scan_len) if isinstance(word, WordGenerator) else list(word[:scan_len])
    k = len(pattern)
    positions = []
    first = pattern[0] if pattern else None
    for i in range(scan_len - k + 1):
        if letters[i] == first and tuple(letters[i : i + k]) == pattern:
            positions.append(i + 1)
    even = sum(1 for n in positions if n % 2 == 0)
    return OccurrenceReport(pattern, tuple(positions), even, len(positions) - even, min_count)


def word_to_alpha(word: WordGenerator) -> ContinuedFraction:
    """alpha = [0; a_1, a_2, ...] with a_i the word letters."""
    return ContinuedFraction.stream(lambda i: 0 if i == 0 else word[i - 1], name=word.kind.value)


@dataclass(frozen=True)
class ScanHit:
    """Nearest scanned value to ``target``.

    The value is z^2 * t_N (pair (z p_N, z q_N)) and, when ``a`` is set, the
    secondary term of (a p_N + p_{N-1}) / (a q_N + q_{N-1}) instead of t_N.
    ``distance`` bounds |value - target| from above.
    """

    target: float
    n: int
    multiplier: int
    a: Optional[int]
    value: Interval
    distance: Fraction
    k: Optional[int] = None
    m: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "N": self.n,
            "multiplier": self.multiplier,
            "secondary_a": self.a,
            "value": float(self.value.mid),
            "distance": float(self.distance),
            "k": self.k,
            "m": self.m,
        }


def _secondary_float(alpha_next: float, rev: float, a: int, n: int) -> float:
    v = (a + rev) * (alpha_next - a) / (alpha_next + rev)
    return -v if n % 2 else v


def _secondary_enclosure(cf: ContinuedFraction, n: int, a: int, window: int = 30) -> Interval:
    from .contfrac import bracket_digits, bracket_reversed

    back = [cf.digit(i) for i in range(n, max(0, n - window), -1)]
    r = bracket_reversed(back, complete=n - window <= 0)
    t = bracket_digits([cf.digit(i) for i in range(n + 1, n + window + 2)])
    # (a + r)(t - a)/(t + r) is increasing in t and in r (t > a)
    corners = [(a + rr) * (tt - a) / (tt + rr) for rr in (r.lo, r.hi) for tt in (t.lo, t.hi)]
    box = Interval(min(corners), max(corners))
    return -box if n % 2 else box


def target_hit_scan(
    alpha,
    targets: Sequence[Real],
    depth: int,
    tol: float = 1e-3,
    multipliers: Sequence[int] = (1,),
    secondary: bool = False,
    candidates: int = 4,
    with_convergents: bool = False,
) -> list[ScanHit]:
    """For each target, the scanned value closest to it among N <= depth.

    A float pass over all terms picks ``candidates`` nearest N per target;
    those are re-evaluated with rigorous rational enclosures.  Distances are
    reported, membership in the spectrum is never claimed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    cf = as_cf(alpha)
    floats = float_terms(cf, depth)
    digits = [cf.digit(i) for i in range(depth + 2)]
    revs = [0.0] * (depth + 1)
    for n in range(1, depth + 1):
        revs[n] = 1.0 / (digits[n] + revs[n - 1])
    tails = [1.0 / abs(floats[n]) - revs[n] for n in range(depth + 1)]

    tvals = [float(enclose(x, 30).mid) for x in targets]
    heaps: list[list] = [[] for _ in tvals]

    def offer(j: int, dist: float, key: tuple):
        h = heaps[j]
        item = (-dist, key)
        if len(h) < candidates:
            heapq.heappush(h, item)
        elif item > h[0]:
            heapq.heapreplace(h, item)

    for n in range(depth + 1):
        vals = [(z, None, z * z * floats[n]) for z in multipliers]
        if secondary:
            for a in range(1, digits[n + 1]):
                v = _secondary_float(tails[n], revs[n], a, n)
                vals.extend((z, a, z * z * v) for z in multipliers)
        for z, a, v in vals:
            for j, x in enumerate(tvals):
                offer(j, abs(v - x), (n, z, a))

    hits = []
    for j, target in enumerate(targets):
        box_t = enclose(target, 30)
        best = None
        for _, (n, z, a) in heaps[j]:
            base = stream_term_enclosure(cf, n) if a is None else _secondary_enclosure(cf, n, a)
            value = base.scale(z * z)
            dist = value.distance_bound(box_t)
            if best is None or dist < best.distance:
                best = ScanHit(float(box_t.mid), n, z, a, value, dist)
        hits.append(best)
    if with_convergents and hits:
        convs = convergents(cf, max(h.n for h in hits))
        out = []
        for h in hits:
            c = convs[h.n]
            if h.a is None:
                k, m = h.multiplier * c.p, h.multiplier * c.q
            else:
                p_prev, q_prev = (convs[h.n - 1].p, convs[h.n - 1].q) if h.n else (1, 0)
                k = h.multiplier * (h.a * c.p + p_prev)
                m = h.multiplier * (h.a * c.q + q_prev)
            out.append(ScanHit(h.target, h.n, h.multiplier, h.a, h.value, h.distance, k, m))
        hits = out
    return hits
