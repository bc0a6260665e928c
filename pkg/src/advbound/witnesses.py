"""Adversary witnesses, their evaluators and the JSON witness format.

A witness is a user-supplied certificate (a relation, a weight scheme, a
distribution family, a rank-1 product or a distance scheme); evaluating it
gives an exact lower bound (upper bound for distribution families) on the
corresponding measure.
"""

from __future__ import annotations

import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .core import PartialFunction, Word, str_to_word, word_to_str
from .errors import (
    AdvboundError,
    EmptyWitness,
    IncompleteFamily,
    InvalidPartition,
    InvalidWitness,
    NotADistribution,
    WordNotInDomain,
)


def _pair(x: Word, y: Word) -> tuple[Word, Word]:
    return (x, y) if x <= y else (y, x)


def _member(f: PartialFunction, x: Word, what: str = "witness") -> Word:
    if x not in f:
        raise WordNotInDomain(f"{what} mentions {word_to_str(x)}, which is not in the domain")
    return x


# --- witness types -------------------------------------------------------------

@dataclass(frozen=True)
class RelationalWitness:
    """Symmetric non-negative weights on pairs; zero pairs are absent."""

    weights: Mapping[tuple[Word, Word], Fraction]

    @classmethod
    def from_pairs(cls, pairs) -> RelationalWitness:
        out: dict[tuple[Word, Word], Fraction] = {}
        for x, y, r in pairs:
            key = _pair(tuple(x), tuple(y))
            r = Fraction(r)
            if out.get(key, r) != r:
                raise InvalidWitness(f"asymmetric weight on {word_to_str(x)}, {word_to_str(y)}")
            out[key] = r
        return cls({k: v for k, v in out.items() if v != 0})

    def r(self, x: Word, y: Word) -> Fraction:
        return self.weights.get(_pair(x, y), Fraction(0))

    def validate(self, f: PartialFunction):
        if not self.weights:
            raise EmptyWitness("relation is identically zero")
        for (x, y), r in self.weights.items():
            _member(f, x)
            _member(f, y)
            if r < 0:
                raise InvalidWitness("negative weight")
            if f(x) == f(y):
                raise InvalidWitness(f"weight on equal-output pair {word_to_str(x)}, {word_to_str(y)}")


@dataclass(frozen=True)
class WeightScheme:
    """Pair weights ``w`` (symmetric) and triple weights ``w'(x, y, i)``."""

    w: RelationalWitness
    wprime: Mapping[tuple[Word, Word, int], Fraction]

    @classmethod
    def from_relational(cls, R: RelationalWitness) -> WeightScheme:
        """w = w' = R on every differing position."""
        wp = {}
        for (x, y), r in R.weights.items():
            for i in range(len(x)):
                if x[i] != y[i]:
                    wp[(x, y, i)] = r
                    wp[(y, x, i)] = r
        return cls(R, wp)

    def validate(self, f: PartialFunction):
        self.w.validate(f)
        for (x, y, i), v in self.wprime.items():
            _member(f, x)
            _member(f, y)
            if v < 0:
                raise InvalidWitness("negative triple weight")
            if not 0 <= i < f.n:
                raise InvalidWitness(f"position {i + 1} out of range")
            if v and (x[i] == y[i] or f(x) == f(y)):
                raise InvalidWitness(
                    f"w'({word_to_str(x)}, {word_to_str(y)}, {i + 1}) must be zero")
        for (x, y), r in self.w.weights.items():
            for i in range(f.n):
                if x[i] != y[i]:
                    if (self.wprime.get((x, y, i), 0) < r
                            or self.wprime.get((y, x, i), 0) < r):
                        raise InvalidWitness(
                            f"w' below w at ({word_to_str(x)}, {word_to_str(y)}, {i + 1})")


@dataclass(frozen=True)
class DistributionFamily:
    """One probability vector over the positions per domain word."""

    p: Mapping[Word, tuple[Fraction, ...]]

    def validate(self, f: PartialFunction):
        missing = [x for x in f.domain if x not in self.p]
        if missing:
            raise IncompleteFamily(f"no distribution for {word_to_str(missing[0])}")
        for x, vec in self.p.items():
            _member(f, x)
            if len(vec) != f.n:
                raise NotADistribution(f"distribution of {word_to_str(x)} has length {len(vec)}")
            if any(v < 0 for v in vec) or sum(vec) != 1:
                raise NotADistribution(f"distribution of {word_to_str(x)} is not a probability vector")


@dataclass(frozen=True)
class Rank1Witness:
    """Output partition (A, B) with weights over X = f^-1(A), Y = f^-1(B).

    ``p`` and ``q`` may be unscaled; evaluation normalizes them.
    """

    A: frozenset[int]
    B: frozenset[int]
    p: Mapping[Word, Fraction]
    q: Mapping[Word, Fraction]

    def validate(self, f: PartialFunction):
        if not self.A or not self.B or self.A & self.B or self.A | self.B != set(range(f.h)):
            raise InvalidPartition("A and B must be non-empty, disjoint and cover the outputs")
        for side, dist, cls in (("p", self.p, self.A), ("q", self.q, self.B)):
            if any(v < 0 for v in dist.values()) or sum(dist.values()) <= 0:
                raise NotADistribution(f"{side} needs non-negative weights with positive total")
            for x, v in dist.items():
                _member(f, x)
                if v and f(x) not in cls:
                    raise InvalidPartition(f"{side} puts weight on {word_to_str(x)} outside its class")

    def normalized(self) -> Rank1Witness:
        sp = sum(self.p.values())
        sq = sum(self.q.values())
        return Rank1Witness(self.A, self.B,
                            {x: v / sp for x, v in self.p.items() if v},
                            {y: v / sq for y, v in self.q.items() if v})


@dataclass(frozen=True)
class DistanceScheme:
    """Positive integer distances on ordered pairs; absent means zero."""

    d: Mapping[tuple[Word, Word], int]

    def validate(self, f: PartialFunction):
        if not self.d:
            raise EmptyWitness("distance scheme is empty")
        for (x, y), d in self.d.items():
            _member(f, x)
            _member(f, y)
            if not isinstance(d, int) or d <= 0:
                raise InvalidWitness(f"distance must be a positive integer, got {d!r}")
            if f(x) == f(y):
                raise InvalidWitness(f"distance on equal-output pair {word_to_str(x)}, {word_to_str(y)}")


# --- evaluators --------------------------------------------------------------------

def eval_relational(f: PartialFunction, R: RelationalWitness) -> Fraction:
    """min over (x, y, i), R(x,y) > 0, x_i != y_i, of max{theta(x,i), theta(y,i)}.

    Both denominators contain R(x, y) itself, so theta is always defined on
    the pairs that enter the minimum.
    """
    R.validate(f)
    nbrs: dict[Word, list[tuple[Word, Fraction]]] = defaultdict(list)
    for (x, y), r in R.weights.items():
        nbrs[x].append((y, r))
        nbrs[y].append((x, r))
    total = {x: sum((r for _, r in lst), Fraction(0)) for x, lst in nbrs.items()}
    cache: dict[tuple[Word, int], Fraction] = {}

    def theta(x: Word, i: int) -> Fraction:
        key = (x, i)
        if key not in cache:
            cache[key] = total[x] / sum(r for y, r in nbrs[x] if y[i] != x[i])
        return cache[key]

    best = None
    for (x, y) in R.weights:
        for i in range(f.n):
            if x[i] != y[i]:
                v = max(theta(x, i), theta(y, i))
                if best is None or v < best:
                    best = v
    return best


def eval_weighted(f: PartialFunction, s: WeightScheme) -> Fraction:
    """min over (x, y, i), w(x,y) > 0, x_i != y_i, of
    max{wt(x)/v(x,i), wt(y)/v(y,i)}."""
    s.validate(f)
    wt: dict[Word, Fraction] = defaultdict(Fraction)
    for (x, y), r in s.w.weights.items():
        wt[x] += r
        wt[y] += r
    v: dict[tuple[Word, int], Fraction] = defaultdict(Fraction)
    for (x, _, i), r in s.wprime.items():
        v[(x, i)] += r
    best = None
    for (x, y) in s.w.weights:
        for i in range(f.n):
            if x[i] != y[i]:
                val = max(wt[x] / v[(x, i)], wt[y] / v[(y, i)])
                if best is None or val < best:
                    best = val
    return best


def eval_mm_witness(f: PartialFunction, P: DistributionFamily):
    """max over pairs with different outputs of 1 / sum min{p_x(i), p_y(i)}.

    Returns ``math.inf`` when some such pair has no overlap.
    """
    P.validate(f)
    worst = Fraction(0)
    dom = f.domain
    for a, x in enumerate(dom):
        px = P.p[x]
        for y in dom[a + 1:]:
            if f(x) == f(y):
                continue
            py = P.p[y]
            overlap = sum((min(px[i], py[i]) for i in range(f.n) if x[i] != y[i]), Fraction(0))
            if overlap == 0:
                return math.inf
            worst = max(worst, 1 / overlap)
    return worst


def eval_rank1(f: PartialFunction, W: Rank1Witness) -> Fraction:
    """Value of a rank-1 witness; Boolean inputs use the (i, b) form."""
    W.validate(f)
    if f.g == 2:
        return _rank1_boolean(f, W.normalized())
    return eval_rank1_general(f, W)


def _rank1_boolean(f: PartialFunction, W: Rank1Witness) -> Fraction:
    best = None
    for i in range(f.n):
        for b in (0, 1):
            px = sum((v for x, v in W.p.items() if x[i] == b), Fraction(0))
            qy = sum((v for y, v in W.q.items() if y[i] != b), Fraction(0))
            m = min(px, qy)
            if m and (best is None or 1 / m < best):
                best = 1 / m
    return best


def eval_rank1_general(f: PartialFunction, W: Rank1Witness) -> Fraction:
    """min over i and g1 != g2 realized by some x in supp p with x_i = g1 and
    y in supp q with y_i = g2 of 1 / min{Pr_q[y_i != g1], Pr_p[x_i != g2]}."""
    W.validate(f)
    W = W.normalized()
    best = None
    for i in range(f.n):
        xs = {x[i] for x in W.p}
        ys = {y[i] for y in W.q}
        for g1 in sorted(xs):
            for g2 in sorted(ys):
                if g1 == g2:
                    continue
                qy = sum((v for y, v in W.q.items() if y[i] != g1), Fraction(0))
                px = sum((v for x, v in W.p.items() if x[i] != g2), Fraction(0))
                val = 1 / min(qy, px)
                if best is None or val < best:
                    best = val
    return best


@dataclass(frozen=True)
class DistanceBound:
    W: Fraction
    bound: Fraction


def eval_distance_scheme(f: PartialFunction, D: DistanceScheme) -> DistanceBound:
    """Total inverse distance W and the raw load bound
    (W/|S|) * min max{1/RL(x,i), 1/LL(y,i)}, constant factor not applied."""
    D.validate(f)
    W = sum((Fraction(1, d) for d in D.d.values()), Fraction(0))
    right: dict[tuple[Word, int, int], int] = defaultdict(int)
    left: dict[tuple[Word, int, int], int] = defaultdict(int)
    for (x, y), d in D.d.items():
        for i in range(f.n):
            if x[i] != y[i]:
                right[(x, i, d)] += 1
                left[(y, i, d)] += 1
    RL: dict[tuple[Word, int], int] = defaultdict(int)
    LL: dict[tuple[Word, int], int] = defaultdict(int)
    for (x, i, _), c in right.items():
        RL[(x, i)] = max(RL[(x, i)], c)
    for (y, i, _), c in left.items():
        LL[(y, i)] = max(LL[(y, i)], c)
    best = None
    for (x, y) in D.d:
        for i in range(f.n):
            if x[i] != y[i]:
                v = max(Fraction(1, RL[(x, i)]), Fraction(1, LL[(y, i)]))
                if best is None or v < best:
                    best = v
    if best is None:
        raise InvalidWitness("no pair of the scheme differs anywhere")
    return DistanceBound(W, W / len(f) * best)


# --- rank-1 detection --------------------------------------------------------------

def as_rank1(f: PartialFunction, R: RelationalWitness) -> Rank1Witness | None:
    """Rank-1 factorization R = max(u v^T, v u^T), if one exists.

    The support must be a complete bipartite graph whose sides split the
    outputs, with R(x,y) R(x',y') = R(x,y') R(x',y) throughout.
    """
    R.validate(f)
    adj: dict[Word, set[Word]] = defaultdict(set)
    for x, y in R.weights:
        adj[x].add(y)
        adj[y].add(x)
    start = min(adj)
    X, Y = {start}, set(adj[start])
    X |= {z for y in Y for z in adj[y]}
    if X & Y or set(adj) != X | Y:
        return None
    if any(adj[x] != Y for x in X) or any(adj[y] != X for y in Y):
        return None
    A = {f(x) for x in X}
    B = {f(y) for y in Y}
    if A & B:
        return None
    x0, y0 = min(X), min(Y)
    base = R.r(x0, y0)
    u = {x: R.r(x, y0) for x in X}
    v = {y: R.r(x0, y) / base for y in Y}
    if any(R.r(x, y) != u[x] * v[y] for x in X for y in Y):
        return None
    B = set(range(f.h)) - A
    return Rank1Witness(frozenset(A), frozenset(B), u, v)


# --- builders for the standard witnesses ----------------------------------------------

def allones_relational(f: PartialFunction) -> RelationalWitness:
    """R = 1 on every pair (x in f^-1(0), y in f^-1(1))."""
    X = [x for x in f.domain if f(x) == 0]
    Y = [y for y in f.domain if f(y) == 1]
    return RelationalWitness.from_pairs((x, y, 1) for x in X for y in Y)


def uniform_rank1(f: PartialFunction, A=(0,), B=(1,)) -> Rank1Witness:
    A, B = frozenset(A), frozenset(B)
    X = [x for x in f.domain if f(x) in A]
    Y = [y for y in f.domain if f(y) in B]
    return Rank1Witness(A, B, {x: Fraction(1, len(X)) for x in X},
                        {y: Fraction(1, len(Y)) for y in Y})


def index_distance_scheme(f: PartialFunction, index) -> DistanceScheme:
    """D(x, y) = index(x) - index(y) on different-output pairs with
    index(x) > index(y)."""
    d = {}
    for x in f.domain:
        for y in f.domain:
            if f(x) != f(y) and index(x) > index(y):
                d[(x, y)] = index(x) - index(y)
    return DistanceScheme(d)


# --- JSON format ------------------------------------------------------------------------

_RATIONAL = re.compile(r"-?\d+(/\d+)?")


def format_rational(v) -> str:
    return str(Fraction(v))


def parse_rational(text) -> Fraction:
    if not isinstance(text, str) or not _RATIONAL.fullmatch(text):
        raise InvalidWitness(f"rational must be a string 'p' or 'p/q', got {text!r}")
    try:
        v = Fraction(text)
    except ZeroDivisionError:
        raise InvalidWitness(f"rational {text!r} has zero denominator") from None
    if str(v) != text:
        raise InvalidWitness(f"rational {text!r} is not in lowest terms")
    return v


def _words(text, g: int) -> Word:
    if not isinstance(text, str):
        raise InvalidWitness(f"word must be a string, got {text!r}")
    try:
        return str_to_word(text, g)
    except AdvboundError as exc:
        raise InvalidWitness(str(exc)) from None


def _field(doc: dict, key: str):
    try:
        return doc[key]
    except (KeyError, TypeError):
        raise InvalidWitness(f"missing field {key!r}") from None


def witness_to_json(witness) -> dict:
    w2s = word_to_str
    if isinstance(witness, RelationalWitness):
        return {"type": "relational",
                "pairs": [{"x": w2s(x), "y": w2s(y), "r": format_rational(r)}
                          for (x, y), r in sorted(witness.weights.items())]}
    if isinstance(witness, WeightScheme):
        return {"type": "weighted",
                "w": [{"x": w2s(x), "y": w2s(y), "w": format_rational(r)}
                      for (x, y), r in sorted(witness.w.weights.items())],
                "w_prime": [{"x": w2s(x), "y": w2s(y), "i": i + 1, "w": format_rational(r)}
                            for (x, y, i), r in sorted(witness.wprime.items()) if r]}
    if isinstance(witness, DistributionFamily):
        return {"type": "mm",
                "p": {w2s(x): [format_rational(v) for v in vec]
                      for x, vec in sorted(witness.p.items())}}
    if isinstance(witness, Rank1Witness):
        return {"type": "rank1", "A": sorted(witness.A), "B": sorted(witness.B),
                "p": {w2s(x): format_rational(v) for x, v in sorted(witness.p.items())},
                "q": {w2s(y): format_rational(v) for y, v in sorted(witness.q.items())}}
    if isinstance(witness, DistanceScheme):
        return {"type": "distance",
                "pairs": [{"x": w2s(x), "y": w2s(y), "d": d}
                          for (x, y), d in sorted(witness.d.items())]}
    raise TypeError(f"not a witness: {type(witness).__name__}")


def dump_witness(witness) -> str:
    return json.dumps(witness_to_json(witness), indent=1) + "\n"


def witness_from_json(doc, g: int = 36):
    """Build a witness from its JSON document; words are read with alphabet g."""
    if not isinstance(doc, dict):
        raise InvalidWitness("witness document must be a JSON object")
    kind = _field(doc, "type")
    if kind == "relational":
        return RelationalWitness.from_pairs(
            (_words(_field(e, "x"), g), _words(_field(e, "y"), g), parse_rational(_field(e, "r")))
            for e in _field(doc, "pairs"))
    if kind == "weighted":
        R = RelationalWitness.from_pairs(
            (_words(_field(e, "x"), g), _words(_field(e, "y"), g), parse_rational(_field(e, "w")))
            for e in _field(doc, "w"))
        if doc.get("w_prime") is None:
            return WeightScheme.from_relational(R)
        wp = {}
        for e in doc["w_prime"]:
            i = _field(e, "i")
            if not isinstance(i, int) or i < 1:
                raise InvalidWitness(f"position must be a 1-based integer, got {i!r}")
            wp[(_words(_field(e, "x"), g), _words(_field(e, "y"), g), i - 1)] = parse_rational(_field(e, "w"))
        return WeightScheme(R, wp)
    if kind == "mm":
        p = _field(doc, "p")
        if not isinstance(p, dict):
            raise InvalidWitness("'p' must map words to probability vectors")
        return DistributionFamily({_words(x, g): tuple(parse_rational(v) for v in vec)
                                   for x, vec in p.items()})
    if kind == "rank1":
        A, B = _field(doc, "A"), _field(doc, "B")
        if not all(isinstance(v, int) for v in list(A) + list(B)):
            raise InvalidWitness("A and B must be lists of output symbols")
        p, q = _field(doc, "p"), _field(doc, "q")
        return Rank1Witness(frozenset(A), frozenset(B),
                            {_words(x, g): parse_rational(v) for x, v in p.items()},
                            {_words(y, g): parse_rational(v) for y, v in q.items()})
    if kind == "distance":
        d = {}
        for e in _field(doc, "pairs"):
            dist = _field(e, "d")
            if not isinstance(dist, int) or isinstance(dist, bool):
                raise InvalidWitness(f"distance must be an integer, got {dist!r}")
            d[(_words(_field(e, "x"), g), _words(_field(e, "y"), g))] = dist
        return DistanceScheme(d)
    raise InvalidWitness(f"unknown witness type {kind!r}")


def load_witness(text: str, g: int = 36):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidWitness(f"witness is not valid JSON: {exc}") from None
    return witness_from_json(doc, g)
