"""Exact rational linear programming.

Two-phase tableau simplex with Bland's rule, plus a depth-first
branch-and-bound for programs with disjunctive constraint groups.
Public values are :class:`fractions.Fraction`; the tableau itself runs on
``gmpy2.mpq`` for speed.  Both are exact and normalized after every
operation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from gmpy2 import mpq

from .errors import DimensionMismatch, UnboundedAllBranches

Number = Union[int, Fraction]
Coeffs = Union[Sequence[Number], Mapping[int, Number]]

LE, GE, EQ = "<=", ">=", "="
_RELATIONS = (LE, GE, EQ)


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def _dense(coeffs: Coeffs, m: int) -> tuple[Fraction, ...]:
    if isinstance(coeffs, Mapping):
        out = [Fraction(0)] * m
        for j, c in coeffs.items():
            if not 0 <= j < m:
                raise DimensionMismatch(f"coefficient index {j} outside 0..{m - 1}")
            out[j] = Fraction(c)
        return tuple(out)
    if len(coeffs) != m:
        raise DimensionMismatch(f"expected {m} coefficients, got {len(coeffs)}")
    return tuple(Fraction(c) for c in coeffs)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}, got {self.rel!r}")

    @classmethod
    def of(cls, coeffs: Coeffs, rel: str, rhs: Number, m: int | None = None) -> Constraint:
        if m is None:
            if isinstance(coeffs, Mapping):
                raise ValueError("sparse coefficients need the variable count")
            m = len(coeffs)
        return cls(_dense(coeffs, m), rel, Fraction(rhs))

    def lhs(self, point: Sequence[Fraction]) -> Fraction:
        return sum((a * x for a, x in zip(self.coeffs, point) if a), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        lhs = self.lhs(point)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """``max``/``min`` of ``objective . x`` subject to constraints and ``x >= 0``.

    ``upper`` optionally holds a per-variable upper bound (``None`` for no
    bound).
    """

    objective: tuple[Fraction, ...]
    constraints: tuple[Constraint, ...] = ()
    maximize: bool = True
    upper: tuple[Fraction | None, ...] | None = None

    def __post_init__(self):
        m = len(self.objective)
        if m < 1:
            raise DimensionMismatch("a linear program needs at least one variable")
        for con in self.constraints:
            if len(con.coeffs) != m:
                raise DimensionMismatch(f"constraint has {len(con.coeffs)} coefficients, expected {m}")
        if self.upper is not None and len(self.upper) != m:
            raise DimensionMismatch("upper bound vector has the wrong length")

    @classmethod
    def build(
        cls,
        nvars: int,
        objective: Coeffs,
        constraints: Iterable[tuple[Coeffs, str, Number]] = (),
        maximize: bool = True,
        upper: Sequence[Number | None] | None = None,
    ) -> LinearProgram:
        cons = tuple(Constraint.of(a, rel, b, nvars) for a, rel, b in constraints)
        ub = None if upper is None else tuple(None if u is None else Fraction(u) for u in upper)
        return cls(_dense(objective, nvars), cons, maximize, ub)

    @property
    def nvars(self) -> int:
        return len(self.objective)

    def with_constraints(self, extra: Iterable[Constraint]) -> LinearProgram:
        return LinearProgram(self.objective, self.constraints + tuple(extra), self.maximize, self.upper)

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.objective, point) if c), Fraction(0))


@dataclass(frozen=True)
class LPOutcome:
    status: Status
    value: Fraction | None = None
    assignment: tuple[Fraction, ...] | None = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


def check_feasible(lp: LinearProgram, point: Sequence[Number]) -> bool:
    """Exact membership test of ``point`` in the feasible region of ``lp``."""
    if len(point) != lp.nvars:
        raise DimensionMismatch(f"point has {len(point)} entries, LP has {lp.nvars} variables")
    x = [Fraction(v) for v in point]
    if any(v < 0 for v in x):
        return False
    if lp.upper is not None:
        if any(u is not None and v > u for v, u in zip(x, lp.upper)):
            return False
    return all(con.holds(x) for con in lp.constraints)


# --- simplex ---------------------------------------------------------------

class _Tableau:
    """Dense tableau; the last entry of every row is its right-hand side."""

    def __init__(self, rows: list[list], basis: list[int]):
        self.rows = rows
        self.basis = basis
        self.z: list = []

    def set_objective(self, costs: list):
        # reduced costs c - c_B B^-1 A, for maximization
        z = list(costs) + [mpq(0)]
        for r, j in enumerate(self.basis):
            cb = costs[j]
            if cb:
                row = self.rows[r]
                for k, v in enumerate(row):
                    if v:
                        z[k] -= cb * v
        self.z = z

    def pivot(self, r: int, j: int):
        prow = self.rows[r]
        piv = prow[j]
        if piv != 1:
            prow = [v / piv for v in prow]
            self.rows[r] = prow
        nz = [k for k, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                f = row[j]
                if f:
                    for k in nz:
                        row[k] -= f * prow[k]
        z = self.z
        f = z[j]
        if f:
            for k in nz:
                z[k] -= f * prow[k]
        self.basis[r] = j

    def run(self, allowed: int) -> Status:
        """Bland's rule: lowest-index improving column, ties in the ratio
        test broken by lowest basic variable index."""
        rows, z = self.rows, self.z
        while True:
            j = next((k for k in range(allowed) if z[k] > 0), None)
            if j is None:
                return Status.OPTIMAL
            best = None
            for r, row in enumerate(rows):
                a = row[j]
                if a > 0:
                    key = (row[-1] / a, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return Status.UNBOUNDED
            self.pivot(best[1], j)


def solve_lp(lp: LinearProgram) -> LPOutcome:
    """Exact optimum of ``lp``; deterministic for a given input."""
    m = lp.nvars
    raw: list[tuple[list, str, mpq]] = []
    for con in lp.constraints:
        raw.append(([mpq(c) for c in con.coeffs], con.rel, mpq(con.rhs)))
    if lp.upper is not None:
        for j, u in enumerate(lp.upper):
            if u is not None:
                row = [mpq(0)] * m
                row[j] = mpq(1)
                raw.append((row, LE, mpq(u)))

    norm = []
    for coeffs, rel, rhs in raw:
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        norm.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in norm if rel != EQ)
    n_art = sum(1 for _, rel, _ in norm if rel != LE)
    width = m + n_slack + n_art
    rows, basis = [], []
    s_col, a_col = m, m + n_slack
    zero = mpq(0)
    for coeffs, rel, rhs in norm:
        row = coeffs + [zero] * (n_slack + n_art) + [rhs]
        if rel == LE:
            row[s_col] = mpq(1)
            basis.append(s_col)
            s_col += 1
        else:
            if rel == GE:
                row[s_col] = mpq(-1)
                s_col += 1
            row[a_col] = mpq(1)
            basis.append(a_col)
            a_col += 1
        rows.append(row)
    tab = _Tableau(rows, basis)
    real = m + n_slack

    if n_art:
        tab.set_objective([zero] * real + [mpq(-1)] * n_art)
        tab.run(width)
        if any(tab.rows[r][-1] != 0 for r, j in enumerate(tab.basis) if j >= real):
            return LPOutcome(Status.INFEASIBLE)
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= real:
                row = tab.rows[r]
                j = next((k for k in range(real) if row[k] != 0), None)
                if j is None:
                    # redundant equality
                    del tab.rows[r]
                    del tab.basis[r]
                    continue
                tab.pivot(r, j)
            r += 1
        tab.rows = [row[:real] + [row[-1]] for row in tab.rows]

    sign = 1 if lp.maximize else -1
    costs = [mpq(sign * c) for c in lp.objective] + [zero] * n_slack
    tab.set_objective(costs)
    status = tab.run(real)
    if status is Status.UNBOUNDED:
        return LPOutcome(Status.UNBOUNDED)
    x = [Fraction(0)] * m
    for r, j in enumerate(tab.basis):
        if j < m:
            x[j] = Fraction(tab.rows[r][-1])
    return LPOutcome(Status.OPTIMAL, lp.value_at(x), tuple(x))


# --- disjunctive programs ----------------------------------------------------

@dataclass(frozen=True)
class DisjunctiveProgram:
    """A maximization LP plus groups of alternative constraints; every group
    needs at least one of its alternatives to hold."""

    base: LinearProgram
    groups: tuple[tuple[Constraint, ...], ...] = field(default=())

    def __post_init__(self):
        for grp in self.groups:
            if len(grp) < 2:
                raise ValueError("a disjunctive group needs at least two alternatives")
            for con in grp:
                if len(con.coeffs) != self.base.nvars:
                    raise DimensionMismatch("alternative references unknown variables")


def solve_disjunctive(dp: DisjunctiveProgram) -> LPOutcome:
    """Exact optimum over all alternative selections.

    Depth-first branch-and-bound.  A node's LP relaxation drops the groups
    not yet branched on; a node is pruned when its relaxation is no better
    than the incumbent, and accepted when its optimum already satisfies
    every group.  Otherwise the first violated group (first unresolved
    group, if the relaxation is unbounded) is split, alternatives in order.
    """
    if not dp.base.maximize:
        raise ValueError("disjunctive programs are solved as maximizations")
    if not dp.groups:
        return solve_lp(dp.base)

    groups = dp.groups
    best: list[LPOutcome] = []

    def visit(extra: tuple[Constraint, ...], resolved: frozenset[int]):
        out = solve_lp(dp.base.with_constraints(extra))
        if out.status is Status.INFEASIBLE:
            return
        if out.status is Status.UNBOUNDED:
            g = next((k for k in range(len(groups)) if k not in resolved), None)
            if g is None:
                raise UnboundedAllBranches("a fully resolved selection is unbounded")
        else:
            if best and out.value <= best[0].value:
                return
            x = out.assignment
            g = next((k for k, grp in enumerate(groups)
                      if not any(c.holds(x) for c in grp)), None)
            if g is None:
                best[:] = [out]
                return
        for alt in groups[g]:
            visit(extra + (alt,), resolved | {g})

    visit((), frozenset())
    return best[0] if best else LPOutcome(Status.INFEASIBLE)
