"""Generators for the separating families and for random test corpora."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator

from .core import PartialFunction, Word
from .errors import (
    BudgetExceeded,
    DomainBudgetExceeded,
    NonBooleanOutput,
    NotPrime,
    OddArity,
    OrderTooLarge,
    ParameterOutOfRange,
)

DOMAIN_BUDGET = 20_000
CUBE_BUDGET = 10**6
MAX_PLANE_ORDER = 13

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit splitmix generator.

    ``state += 0x9E3779B97F4A7C15``; output is the state mixed by
    ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
    z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2^64).
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, k: int) -> int:
        """``next() % k`` (the modulo bias is accepted)."""
        return self.next() % k

    def fraction(self, denominator: int) -> Fraction:
        """Uniform choice from ``1/d, 2/d, ..., d/d``."""
        return Fraction(self.below(denominator) + 1, denominator)


def _check_even(n: int):
    if n < 2 or n % 2:
        raise OddArity(f"n must be even and at least 2, got {n}")


def gen_gth(n: int) -> PartialFunction:
    """Greater-than-half on weight-one words: 1 iff the 1 sits past n/2."""
    _check_even(n)
    table = {}
    for i in range(n):
        word = tuple(1 if k == i else 0 for k in range(n))
        table[word] = 1 if i >= n // 2 else 0
    return PartialFunction(n, 2, 2, table)


def osp_index(word: Word) -> int:
    """Last 1-based position holding a 0, or 0 for the all-ones word."""
    return max((i + 1 for i, s in enumerate(word) if s == 0), default=0)


def gen_osp(n: int) -> PartialFunction:
    """Ordered search parity on words 0^i 1^(n-i)."""
    _check_even(n)
    table = {}
    for i in range(n + 1):
        word = (0,) * i + (1,) * (n - i)
        table[word] = osp_index(word) % 2
    return PartialFunction(n, 2, 2, table)


def gen_or(n: int) -> PartialFunction:
    """Total OR on n bits."""
    return PartialFunction(n, 2, 2, {w: int(any(w)) for w in product((0, 1), repeat=n)})


def is_prime(t: int) -> bool:
    return t >= 2 and all(t % d for d in range(2, int(t**0.5) + 1))


@dataclass(frozen=True)
class ProjectivePlane:
    order: int
    points: tuple[tuple[int, int, int], ...]
    lines: tuple[frozenset[int], ...]

    @property
    def size(self) -> int:
        return len(self.points)


def _normalized_vectors(t: int) -> list[tuple[int, int, int]]:
    # leading nonzero coordinate 1 = lexicographically least multiple
    out = []
    for v in product(range(t), repeat=3):
        lead = next((c for c in v if c), 0)
        if lead == 1:
            out.append(v)
    return sorted(out)


def gen_projective_plane(t: int) -> ProjectivePlane:
    """PG(2, t) over the integers mod a prime t."""
    if not is_prime(t):
        raise NotPrime(f"plane order must be prime, got {t}")
    if t > MAX_PLANE_ORDER:
        raise OrderTooLarge(f"plane order {t} exceeds {MAX_PLANE_ORDER}")
    points = _normalized_vectors(t)
    lines = []
    for a in points:  # line coordinates range over the same representatives
        lines.append(frozenset(k for k, p in enumerate(points)
                               if (a[0] * p[0] + a[1] * p[1] + a[2] * p[2]) % t == 0))
    return ProjectivePlane(t, tuple(points), tuple(lines))


def gen_fpp(t: int) -> PartialFunction:
    """Projective plane function: 0 on the zero word, 1 on line indicators."""
    plane = gen_projective_plane(t)
    ell = plane.size
    table = {(0,) * ell: 0}
    for line in plane.lines:
        table[tuple(1 if k in line else 0 for k in range(ell))] = 1
    return PartialFunction(ell, 2, 2, table)


def compose_or(f: PartialFunction, k: int, budget: int = DOMAIN_BUDGET) -> PartialFunction:
    """OR of k independent copies of a Boolean-output function."""
    if f.h != 2:
        raise NonBooleanOutput("OR composition needs Boolean outputs")
    if k < 1:
        raise ParameterOutOfRange(f"k must be at least 1, got {k}")
    if len(f) ** k > budget:
        raise DomainBudgetExceeded(f"|S|^k = {len(f) ** k} exceeds budget {budget}")
    table = {}
    for parts in product(f.domain, repeat=k):
        word = tuple(s for part in parts for s in part)
        table[word] = int(any(f(p) for p in parts))
    return PartialFunction(f.n * k, f.g, 2, table)


def index_to_word(index: int, n: int, g: int) -> Word:
    digits = []
    for _ in range(n):
        index, r = divmod(index, g)
        digits.append(r)
    return tuple(reversed(digits))


def gen_random_partial(
    n: int,
    g: int,
    h: int,
    fraction: Fraction | int = 1,
    seed: int = 0,
    budget: int = CUBE_BUDGET,
) -> PartialFunction:
    """Seeded random partial function.

    The domain is the first ``max(2, floor(fraction * g^n + 1/2))`` entries of a
    partial Fisher-Yates shuffle of the word indices; outputs are drawn
    per word in lexicographic order and redrawn as a whole while constant.
    """
    fraction = Fraction(fraction)
    if not 0 < fraction <= 1:
        raise ParameterOutOfRange(f"fraction must lie in (0, 1], got {fraction}")
    if n < 1 or g < 2 or h < 2:
        raise ParameterOutOfRange("need n >= 1, g >= 2, h >= 2")
    total = g**n
    if total > budget:
        raise BudgetExceeded(f"g^n = {total} exceeds budget {budget}")
    size = min(total, max(2, int(fraction * total + Fraction(1, 2))))
    rng = SplitMix64(seed)
    idx = list(range(total))
    for i in range(size):
        j = i + rng.below(total - i)
        idx[i], idx[j] = idx[j], idx[i]
    words = [index_to_word(k, n, g) for k in sorted(idx[:size])]
    while True:
        outs = [rng.below(h) for _ in words]
        if len(set(outs)) > 1:
            break
    return PartialFunction(n, g, h, dict(zip(words, outs)))


def gen_all_total(n: int, g: int, h: int, budget: int = CUBE_BUDGET) -> Iterator[PartialFunction]:
    """Every non-constant total function, lexicographic over output tables."""
    if n < 1 or g < 1 or h < 2:
        raise ParameterOutOfRange("need n >= 1, g >= 1, h >= 2")
    words = list(product(range(g), repeat=n))
    if h ** len(words) > budget:
        raise BudgetExceeded(f"h^(g^n) = {h ** len(words)} exceeds budget {budget}")
    for outs in product(range(h), repeat=len(words)):
        if len(set(outs)) > 1:
            yield PartialFunction(n, g, h, dict(zip(words, outs)))
