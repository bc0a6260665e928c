"""Brute-force reference computations, independent of the package's solvers."""

from fractions import Fraction
from itertools import combinations, product

from advbound.core import diff_mask


def solve_square(rows, rhs):
    """Gauss-Jordan over Fractions; None when singular."""
    n = len(rows)
    a = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def holds(coeffs, rel, rhs, x):
    lhs = sum(Fraction(c) * v for c, v in zip(coeffs, x))
    return lhs <= rhs if rel == "<=" else lhs >= rhs if rel == ">=" else lhs == rhs


def vertices(m, constraints, box=None, feasible_only=True):
    """All basic feasible points of {constraints, x >= 0, x <= box}.

    With ``feasible_only=False`` every basic point is produced and only the
    bounds are enforced."""
    rows = [(list(c), rel, Fraction(b)) for c, rel, b in constraints]
    for j in range(m):
        e = [0] * m
        e[j] = 1
        rows.append((e, ">=", Fraction(0)))
        if box is not None:
            rows.append((e, "<=", Fraction(box)))
    seen = set()
    for subset in combinations(range(len(rows)), m):
        x = solve_square([rows[k][0] for k in subset], [rows[k][2] for k in subset])
        if x is None:
            continue
        t = tuple(x)
        if t in seen:
            continue
        seen.add(t)
        if feasible_only:
            if all(holds(c, rel, b, x) for c, rel, b in rows):
                yield t
        elif all(v >= 0 and (box is None or v <= box) for v in x):
            yield t


def brute_lp(m, objective, constraints, maximize=True):
    """('optimal', value) / ('infeasible', None) / ('unbounded', None)."""
    sign = 1 if maximize else -1

    def val(x):
        return sign * sum(Fraction(c) * v for c, v in zip(objective, x))

    free = [val(x) for x in vertices(m, constraints)]
    if not free:
        return "infeasible", None
    boxed = max(val(x) for x in vertices(m, constraints, box=10**4))
    if boxed > max(free):
        return "unbounded", None
    return "optimal", sign * max(free)


def brute_disjunctive(m, objective, base, groups):
    """Max of the objective over every vertex of every selection polytope."""
    allrows = list(base) + [alt for grp in groups for alt in grp]
    best = None
    for x in vertices(m, allrows, feasible_only=False):
        if not all(holds(*c, x) for c in base):
            continue
        if not all(any(holds(*alt, x) for alt in grp) for grp in groups):
            continue
        v = sum(Fraction(c) * xi for c, xi in zip(objective, x))
        if best is None or v > best:
            best = v
    return best


def max_disjoint(masks):
    """Largest r with r pairwise disjoint masks; stops at the first r that
    fails, since any sub-packing of a packing is a packing."""
    best = 0
    for r in range(1, len(masks) + 1):
        if not any(_disjoint(combo) for combo in combinations(masks, r)):
            break
        best = r
    return best


def _disjoint(combo):
    acc = 0
    for b in combo:
        if acc & b:
            return False
        acc |= b
    return True


def certificate_size(f, x):
    n = f.n
    for r in range(n + 1):
        for idx in combinations(range(n), r):
            if all(f(z) == f(x) for z in f.domain if all(z[i] == x[i] for i in idx)):
                return r
    return n


def ca1_selection_brute(f, A, B, solve_lp_fn, lp_factory):
    """Max over every one of the 2^(2n) ways to pick one side of each
    (i, b) disjunction, each selection solved as a plain LP."""
    best = None
    n = f.n
    for choice in product((0, 1), repeat=2 * n):
        lp = lp_factory(f, A, B, choice)
        out = solve_lp_fn(lp)
        if out.optimal and (best is None or out.value > best):
            best = out.value
    return best


def blocks_by_hand(f, x):
    fx = f(x)
    return {diff_mask(x, y) for y in f.domain if f(y) != fx}
