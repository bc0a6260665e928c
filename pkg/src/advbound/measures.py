"""Exact block sensitivity, certificate and adversary measures.

Every per-input maximum iterates over the domain in lexicographic order and
keeps the first maximizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from .core import (
    Block,
    PartialFunction,
    Word,
    diff_mask,
    inputs_with_output,
    mask_indices,
    sensitive_masks,
)
from .errors import (
    AdvboundError,
    ConstantFunction,
    NonBooleanAlphabet,
    NonBooleanOutput,
    ParameterOutOfRange,
    WordNotInDomain,
)
from .ratlp import (
    EQ,
    GE,
    LE,
    Constraint,
    DisjunctiveProgram,
    LinearProgram,
    solve_disjunctive,
    solve_lp,
)
from .witnesses import DistributionFamily, Rank1Witness


def _word(f: PartialFunction, x) -> Word:
    x = tuple(x)
    if x not in f:
        raise WordNotInDomain(f"{x} is not in the domain")
    return x


# --- block sensitivity --------------------------------------------------------

def max_packing(masks: Iterable[int]) -> int:
    """Largest number of pairwise disjoint bitmasks (exact DFS)."""
    blocks = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    best = 0

    def dfs(count: int, candidates: list[int]):
        nonlocal best
        if count > best:
            best = count
        for k, b in enumerate(candidates):
            if count + len(candidates) - k <= best:
                return
            dfs(count + 1, [c for c in candidates[k + 1:] if not c & b])

    dfs(0, blocks)
    return best


def bs_at(f: PartialFunction, x) -> int:
    x = _word(f, x)
    return max_packing(sensitive_masks(f, x))


# --- certificate complexity ---------------------------------------------------

def cert_at(f: PartialFunction, x) -> int:
    """Size of the smallest set of positions whose values at x force f(x)."""
    x = _word(f, x)
    fx = f(x)
    # every certificate must hit each sensitive difference set
    others = [diff_mask(x, y) for y, fy in f.items() if fy != fx]
    for r in range(f.n + 1):
        for idx in combinations(range(f.n), r):
            mask = sum(1 << i for i in idx)
            if all(d & mask for d in others):
                return r
    return f.n


# --- fractional block sensitivity / certificate ---------------------------------

@dataclass(frozen=True)
class BlockWeighting:
    base: Word
    weights: dict[Block, Fraction]

    @property
    def total(self) -> Fraction:
        return sum(self.weights.values(), Fraction(0))

    def is_feasible(self, n: int) -> bool:
        if any(not 0 <= w <= 1 for w in self.weights.values()):
            return False
        return all(sum((w for b, w in self.weights.items() if i in b), Fraction(0)) <= 1
                   for i in range(n))


def _fbs_program(f: PartialFunction, x: Word, budget: Fraction | None = None):
    masks = sensitive_masks(f, x)
    k = len(masks)
    rows = []
    for i in range(f.n):
        coeffs = {j: 1 for j, m in enumerate(masks) if m >> i & 1}
        if coeffs:
            rows.append((coeffs, LE, 1))
    if budget is not None:
        rows.append(({j: bin(m).count("1") for j, m in enumerate(masks)}, LE, budget))
    # w <= 1 is implied by the index rows since blocks are non-empty
    return masks, LinearProgram.build(k, [1] * k, rows)


def fbs_weighting(f: PartialFunction, x) -> BlockWeighting:
    """Optimal fractional packing of the sensitive blocks of x."""
    x = _word(f, x)
    masks, lp = _fbs_program(f, x)
    out = solve_lp(lp)
    return BlockWeighting(x, {Block.from_mask(m): w for m, w in zip(masks, out.assignment) if w})


def fbs_at(f: PartialFunction, x) -> Fraction:
    x = _word(f, x)
    return solve_lp(_fbs_program(f, x)[1]).value


def fbs_parametrized(f: PartialFunction, x, budget) -> Fraction:
    """fbs at x with the extra constraint sum |B| w(B) <= budget."""
    x = _word(f, x)
    budget = Fraction(budget)
    if not 0 <= budget <= f.n:
        raise ParameterOutOfRange(f"budget must lie in [0, {f.n}], got {budget}")
    return solve_lp(_fbs_program(f, x, budget)[1]).value


def _fc_program(f: PartialFunction, x: Word) -> LinearProgram:
    fx = f(x)
    rows = {}
    for y, fy in f.items():
        if fy != fx:
            d = tuple(i for i in range(f.n) if x[i] != y[i])
            rows.setdefault(d, ({i: 1 for i in d}, GE, 1))
    return LinearProgram.build(f.n, [1] * f.n, rows.values(), maximize=False)


def fc_weighting(f: PartialFunction, x) -> tuple[Fraction, ...]:
    """Optimal fractional certificate v_x (one weight per position)."""
    x = _word(f, x)
    return solve_lp(_fc_program(f, x)).assignment


def fc_at(f: PartialFunction, x) -> Fraction:
    x = _word(f, x)
    return solve_lp(_fc_program(f, x)).value


# --- maxima over the domain ---------------------------------------------------

PER_INPUT: dict[str, Callable] = {
    "bs": bs_at,
    "cert": cert_at,
    "fbs": fbs_at,
    "fc": fc_at,
}


def maximize_over(f: PartialFunction, measure: Callable, inputs: Iterable[Word] | None = None):
    """(max value, first maximizing word) of a per-input measure."""
    best = None
    arg = None
    for x in (f.domain if inputs is None else sorted(inputs)):
        v = measure(f, x)
        if best is None or v > best:
            best, arg = v, x
    return best, arg


def bs(f: PartialFunction) -> int:
    return maximize_over(f, bs_at)[0]


def cert(f: PartialFunction) -> int:
    return maximize_over(f, cert_at)[0]


def fbs(f: PartialFunction) -> Fraction:
    return maximize_over(f, fbs_at)[0]


def fc(f: PartialFunction) -> Fraction:
    return maximize_over(f, fc_at)[0]


def one_sided(f: PartialFunction, measure: str, b: int):
    """Maximum of a per-input measure over the inputs with output b."""
    if f.h != 2:
        raise NonBooleanOutput("one-sided measures need Boolean outputs")
    if b not in (0, 1):
        raise ParameterOutOfRange(f"side must be 0 or 1, got {b}")
    try:
        fn = PER_INPUT[measure]
    except KeyError:
        raise ParameterOutOfRange(f"no one-sided version of {measure!r}") from None
    return maximize_over(f, fn, inputs_with_output(f, b))[0]


# --- minimax over distributions -------------------------------------------------

@dataclass(frozen=True)
class MMSolution:
    value: Fraction
    weights: dict[Word, tuple[Fraction, ...]]

    def distributions(self) -> DistributionFamily:
        """The weights rescaled to one probability vector per input."""
        out = {}
        for x, v in self.weights.items():
            s = sum(v)
            out[x] = tuple(w / s for w in v)
        return DistributionFamily(out)


def _cross_pairs(f: PartialFunction):
    dom = f.domain
    for a in range(len(dom)):
        x = dom[a]
        for b in range(a + 1, len(dom)):
            y = dom[b]
            if f(x) != f(y):
                yield x, y


def mm_solution(f: PartialFunction) -> MMSolution:
    """Minimize t subject to sum_i v_x(i) <= t and, for every pair with
    different outputs, sum over differing i of min{v_x(i), v_y(i)} >= 1.

    The min is linearized with m_xyi <= v_x(i), m_xyi <= v_y(i); raising m
    to the pointwise min keeps feasibility, so the optimum is unchanged.
    """
    dom = f.domain
    n = f.n
    pos = {x: 1 + k * n for k, x in enumerate(dom)}
    pairs = []
    nvars = 1 + n * len(dom)
    for x, y in _cross_pairs(f):
        idx = mask_indices(diff_mask(x, y))
        pairs.append((x, y, [(i, nvars + j) for j, i in enumerate(idx)]))
        nvars += len(idx)
    rows = []
    for x in dom:
        coeffs = {pos[x] + i: 1 for i in range(n)}
        coeffs[0] = -1
        rows.append((coeffs, LE, 0))
    for x, y, ms in pairs:
        rows.append(({j: 1 for _, j in ms}, GE, 1))
        for i, j in ms:
            rows.append(({j: 1, pos[x] + i: -1}, LE, 0))
            rows.append(({j: 1, pos[y] + i: -1}, LE, 0))
    lp = LinearProgram.build(nvars, {0: 1}, rows, maximize=False)
    out = solve_lp(lp)
    a = out.assignment
    weights = {x: tuple(a[pos[x] + i] for i in range(n)) for x in dom}
    return MMSolution(out.value, weights)


def mm(f: PartialFunction) -> Fraction:
    return mm_solution(f).value


# --- rank-1 relational adversary ---------------------------------------------

@dataclass(frozen=True)
class CA1Solution:
    value: Fraction
    witness: Rank1Witness
    partition_values: dict[tuple[tuple[int, ...], tuple[int, ...]], Fraction] = field(default_factory=dict)


def output_partitions(f: PartialFunction):
    """Unordered splits (A, B) of the achieved outputs, both sides non-empty.

    Outputs that never occur are put in B; they do not change X or Y.
    """
    outs = f.outputs
    first, rest = outs[0], outs[1:]
    unused = [v for v in range(f.h) if v not in outs]
    for r in range(len(rest)):
        for extra in combinations(rest, r):
            A = (first,) + extra
            B = tuple(sorted([v for v in rest if v not in extra] + unused))
            yield A, B


def ca1_program(f: PartialFunction, A, B) -> tuple[list[Word], DisjunctiveProgram]:
    """The Boolean-input program for CA1(f, A, B).

    One variable per domain word (zero objective weight on Y), the balance
    row sum_X w = sum_Y w, and for every (i, b) the 2-way group
    [sum_{x in X, x_i = b} w_x <= 1] or [sum_{y in Y, y_i != b} w_y <= 1].
    Groups with an empty side are always satisfied and are left out.
    """
    dom = list(f.domain)
    A = set(A)
    in_x = [f(w) in A for w in dom]
    k = len(dom)
    objective = [1 if ix else 0 for ix in in_x]
    balance = {j: (1 if ix else -1) for j, ix in enumerate(in_x)}
    base = LinearProgram.build(k, objective, [(balance, EQ, 0)])
    groups = []
    for i in range(f.n):
        for b in (0, 1):
            left = {j: 1 for j, w in enumerate(dom) if in_x[j] and w[i] == b}
            right = {j: 1 for j, w in enumerate(dom) if not in_x[j] and w[i] != b}
            if left and right:
                groups.append((Constraint.of(left, LE, 1, k), Constraint.of(right, LE, 1, k)))
    return dom, DisjunctiveProgram(base, tuple(groups))


def ca1_solution(f: PartialFunction) -> CA1Solution:
    if f.g != 2:
        raise NonBooleanAlphabet("exact CA1 is only computed for Boolean inputs")
    if len(f.outputs) < 2:
        raise ConstantFunction("function is constant")
    best = None
    values = {}
    for A, B in output_partitions(f):
        dom, dp = ca1_program(f, A, B)
        out = solve_disjunctive(dp)
        if not out.optimal:
            raise AdvboundError(f"CA1 program for partition {A}|{B} has no optimum")
        values[(A, B)] = out.value
        if best is None or out.value > best[0]:
            best = (out.value, A, B, dom, out.assignment)
    value, A, B, dom, w = best
    Aset = set(A)
    p = {x: wx / value for x, wx in zip(dom, w) if wx and f(x) in Aset}
    q = {y: wy / value for y, wy in zip(dom, w) if wy and f(y) not in Aset}
    return CA1Solution(value, Rank1Witness(frozenset(A), frozenset(B), p, q), values)


def ca1(f: PartialFunction) -> Fraction:
    return ca1_solution(f).value


# --- reports ----------------------------------------------------------------------

MEASURES = ("bs", "cert", "fbs", "fc", "mm", "ca1")


@dataclass
class MeasureReport:
    function: str
    n: int
    values: dict[str, Fraction | int] = field(default_factory=dict)
    argmax: dict[str, Word] = field(default_factory=dict)
    side: int | None = None
    witnesses: dict[str, object] = field(default_factory=dict)


def compute_report(
    f: PartialFunction,
    names: Iterable[str] = MEASURES,
    side: int | None = None,
    function_id: str = "f",
    with_witnesses: bool = False,
) -> MeasureReport:
    """Compute the named measures; ``side`` restricts per-input measures to
    ``f^-1(side)``."""
    names = list(names)
    for name in names:
        if name not in MEASURES:
            raise ParameterOutOfRange(f"unknown measure {name!r}")
    if side is not None and f.h != 2:
        raise NonBooleanOutput("--side needs Boolean outputs")
    report = MeasureReport(function_id, f.n, side=side)
    inputs = None if side is None else inputs_with_output(f, side)
    for name in names:
        if name in PER_INPUT:
            value, arg = maximize_over(f, PER_INPUT[name], inputs)
            report.values[name] = value
            report.argmax[name] = arg
            if with_witnesses and name == "fbs":
                report.witnesses[name] = fbs_weighting(f, arg)
            elif with_witnesses and name == "fc":
                report.witnesses[name] = fc_weighting(f, arg)
        elif name == "mm":
            sol = mm_solution(f)
            report.values[name] = sol.value
            if with_witnesses:
                report.witnesses[name] = sol.distributions()
        else:
            sol = ca1_solution(f)
            report.values[name] = sol.value
            if with_witnesses:
                report.witnesses[name] = sol.witness
    return report
