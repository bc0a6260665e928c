"""Verification suites: exhaustive or seeded corpora checked against the
exact inequalities and equalities between the measures."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

from . import measures as M
from .constructions import (
    SplitMix64,
    compose_or,
    gen_all_total,
    gen_fpp,
    gen_gth,
    gen_osp,
    gen_random_partial,
    osp_index,
)
from .core import PartialFunction, diff_mask, mask_indices
from .errors import ParameterOutOfRange
from .witnesses import (
    allones_relational,
    eval_distance_scheme,
    eval_mm_witness,
    eval_rank1,
    eval_relational,
    index_distance_scheme,
    uniform_rank1,
)

SUITES = ("duality", "total-equivalence", "chain-partial", "sqrt-barrier", "paper-examples")


@dataclass(frozen=True)
class Failure:
    function: str
    prop: str
    lhs: str
    rhs: str


@dataclass
class SuiteResult:
    suite: str
    cases: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _fmt(v) -> str:
    return "infinite" if v == math.inf else str(v)


class _Checker:
    def __init__(self, fid: str):
        self.fid = fid
        self.failures: list[Failure] = []

    def expect(self, ok: bool, prop: str, lhs, rhs):
        if not ok:
            self.failures.append(Failure(self.fid, prop, _fmt(lhs), _fmt(rhs)))


# --- per-function checks ------------------------------------------------------------

def check_duality(fid: str, f: PartialFunction) -> list[Failure]:
    c = _Checker(fid)
    for x in f.domain:
        p, d = M.fbs_at(f, x), M.fc_at(f, x)
        c.expect(p == d, f"fbs_at == fc_at at {x}", p, d)
        b, k = M.bs_at(f, x), M.cert_at(f, x)
        c.expect(b <= p, f"bs_at <= fbs_at at {x}", b, p)
        c.expect(p <= k, f"fbs_at <= cert_at at {x}", p, k)
    return c.failures


def fc_intersection_ok(f: PartialFunction, weights) -> bool:
    """Every different-output pair overlaps by at least 1 under min."""
    dom = f.domain
    for a, x in enumerate(dom):
        for y in dom[a + 1:]:
            if f(x) != f(y):
                idx = mask_indices(diff_mask(x, y))
                if sum(min(weights[x][i], weights[y][i]) for i in idx) < 1:
                    return False
    return True


def check_total(fid: str, f: PartialFunction) -> list[Failure]:
    c = _Checker(fid)
    sol = M.mm_solution(f)
    fc_val = M.fc(f)
    fbs_val = M.fbs(f)
    c.expect(sol.value == fc_val, "mm == FC", sol.value, fc_val)
    c.expect(fc_val == fbs_val, "FC == fbs", fc_val, fbs_val)
    weights = {x: M.fc_weighting(f, x) for x in f.domain}
    c.expect(fc_intersection_ok(f, weights), "FC weights satisfy the min-overlap condition", "violated", ">= 1")
    c.expect(fc_intersection_ok(f, sol.weights), "mm weights satisfy the raw min-sum rows", "violated", ">= 1")
    ev = eval_mm_witness(f, sol.distributions())
    c.expect(ev == sol.value, "mm distribution witness evaluates to mm", ev, sol.value)
    return c.failures


def check_chain(fid: str, f: PartialFunction) -> list[Failure]:
    c = _Checker(fid)
    fbs_val = M.fbs(f)
    sol = M.ca1_solution(f)
    c.expect(fbs_val <= sol.value, "fbs <= ca1", fbs_val, sol.value)
    ev = eval_rank1(f, sol.witness)
    c.expect(ev == sol.value, "ca1 rank-1 witness evaluates to ca1", ev, sol.value)
    mm_sol = M.mm_solution(f)
    ev = eval_mm_witness(f, mm_sol.distributions())
    c.expect(ev == mm_sol.value, "mm distribution witness evaluates to mm", ev, mm_sol.value)
    c.expect(fc_intersection_ok(f, mm_sol.weights), "mm weights satisfy the raw min-sum rows", "violated", ">= 1")
    return c.failures


def check_barrier(fid: str, f: PartialFunction, x=None) -> list[Failure]:
    c = _Checker(fid)
    fbs_val, bs_val = M.fbs(f), M.bs(f)
    c.expect(fbs_val**2 <= f.n * bs_val, "fbs^2 <= n*bs", fbs_val**2, f.n * bs_val)
    if x is not None:
        k = M.bs_at(f, x)
        for N in sorted({Fraction(1), Fraction(f.n, 2), Fraction(f.n)}):
            v = M.fbs_parametrized(f, x, N)
            c.expect(v**2 <= N * k, f"fbs_N^2 <= N*bs_at at {x}, N={N}", v**2, N * k)
    return c.failures


# --- corpora --------------------------------------------------------------------------

def random_corpus(
    samples: int,
    seed: int,
    n: int,
    g: int,
    h: int,
    fraction: Fraction | None = None,
) -> Iterator[tuple[str, PartialFunction, SplitMix64]]:
    """Seeded random partial functions with arity 1..n, g in 2..g, h in 2..h.

    Without a fixed fraction the domain fraction is drawn from k/8.
    """
    if samples < 0 or n < 1 or g < 2 or h < 2:
        raise ParameterOutOfRange("need samples >= 0, n >= 1, g >= 2, h >= 2")
    master = SplitMix64(seed)
    for j in range(samples):
        nj = 1 + master.below(n)
        gj = 2 + master.below(g - 1)
        hj = 2 + master.below(h - 1)
        fr = fraction if fraction is not None else master.fraction(8)
        s = master.next()
        fid = f"random#{j:05d}(n={nj},g={gj},h={hj},fraction={fr},seed={s})"
        yield fid, gen_random_partial(nj, gj, hj, fr, s), master


def _run_one(args):
    suite, fid, f, x = args
    if suite == "duality":
        return check_duality(fid, f)
    if suite == "total-equivalence":
        return check_total(fid, f)
    if suite == "chain-partial":
        return check_chain(fid, f)
    return check_barrier(fid, f, x)


def example_checks() -> list[tuple[str, Callable[[], tuple[object, str, object]]]]:
    """Fixed checks; each callable returns (lhs, relation, rhs)."""
    fpp_or2 = lambda: compose_or(gen_fpp(2), 2)  # noqa: E731
    return [
        ("fbs(Gth_8) = 1", lambda: (M.fbs(gen_gth(8)), "==", 1)),
        ("C(Gth_8) = 1", lambda: (M.cert(gen_gth(8)), "==", 1)),
        ("ca1(Gth_8) >= 4", lambda: (M.ca1(gen_gth(8)), ">=", 4)),
        ("ca1(Osp_8) <= 2", lambda: (M.ca1(gen_osp(8)), "<=", 2)),
        ("bs(Fpp_2 o OR_2) = 2", lambda: (M.bs(fpp_or2()), "==", 2)),
        ("fbs(Fpp_2 o OR_2) >= 14/3", lambda: (M.fbs(fpp_or2()), ">=", Fraction(14, 3))),
        ("fbs(Fpp_2 o OR_2)^2 <= 14*2", lambda: (M.fbs(fpp_or2()) ** 2, "<=", 28)),
        ("fbs^0(Fpp_2) = 7/3", lambda: (M.one_sided(gen_fpp(2), "fbs", 0), "==", Fraction(7, 3))),
        ("bs^0(Fpp_2) = 1", lambda: (M.one_sided(gen_fpp(2), "bs", 0), "==", 1)),
        ("W(Osp_4 index distances) = 14/3",
         lambda: (eval_distance_scheme(gen_osp(4), index_distance_scheme(gen_osp(4), osp_index)).W,
                  "==", Fraction(14, 3))),
        ("all-ones relation on Gth_8 = 4",
         lambda: (eval_relational(gen_gth(8), allones_relational(gen_gth(8))), "==", 4)),
        ("uniform rank-1 witness on Fpp_2 = 7/3",
         lambda: (eval_rank1(gen_fpp(2), uniform_rank1(gen_fpp(2))), "==", Fraction(7, 3))),
    ]


_REL = {"==": lambda a, b: a == b, "<=": lambda a, b: a <= b, ">=": lambda a, b: a >= b}


def run_suite(
    suite: str,
    n: int = 3,
    g: int = 2,
    h: int = 2,
    samples: int = 100,
    seed: int = 1,
    fraction: Fraction | None = None,
    jobs: int = 1,
) -> SuiteResult:
    if suite not in SUITES:
        raise ParameterOutOfRange(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    result = SuiteResult(suite)
    if suite == "paper-examples":
        for name, fn in example_checks():
            lhs, rel, rhs = fn()
            result.cases += 1
            if not _REL[rel](lhs, rhs):
                result.failures.append(Failure(name, f"{rel}", _fmt(lhs), _fmt(rhs)))
        return result

    if suite == "total-equivalence":
        tasks = [(suite, f"total#{j:06d}(n={n},g={g},h={h})", f, None)
                 for j, f in enumerate(gen_all_total(n, g, h))]
    else:
        if suite == "chain-partial" and g != 2:
            raise ParameterOutOfRange("chain-partial needs Boolean inputs (--g 2)")
        tasks = []
        for fid, f, rng in random_corpus(samples, seed, n, g, h, fraction):
            x = f.domain[rng.below(len(f))] if suite == "sqrt-barrier" else None
            tasks.append((suite, fid, f, x))
    result.cases = len(tasks)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_run_one, tasks, chunksize=8))
    else:
        outcomes = [_run_one(t) for t in tasks]
    for fails in outcomes:
        result.failures.extend(fails)
    result.failures.sort(key=lambda fl: (fl.function, fl.prop))
    return result
