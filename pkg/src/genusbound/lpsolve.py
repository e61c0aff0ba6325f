"""Exact linear and integer programming over place-count systems.

Maximizes ``sum_j dims[j] * e[j]`` subject to ``A e <= b`` and ``e >= 0``.
The simplex method runs on an integer tableau with fraction-free pivoting:
the true tableau is the stored integer tableau divided by a common
denominator, so no rational arithmetic happens inside the pivot loop.
Bland's least-index rule prevents cycling.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels
from .errors import InvalidCertificate, UnboundedSystem
from .exactnum import floor_rat, rat, rat_to_str
from .places import LinearSystem
from .weil import DecompositionVector

OPTIMAL, UNBOUNDED, INFEASIBLE = "optimal", "unbounded", "infeasible"


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    primal: tuple[Fraction, ...] = ()
    dual: tuple[Fraction, ...] = ()
    D: int | None = None
    nodes: int = 0
    pivots: int = 0

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.status == OPTIMAL:
            out["value"] = rat_to_str(self.value)
            out["primal"] = [rat_to_str(x) for x in self.primal]
            out["dual"] = [rat_to_str(x) for x in self.dual]
        if self.D is not None:
            out["D"] = self.D
        return out


# ---------------------------------------------------------------------------
# Integer-tableau simplex
# ---------------------------------------------------------------------------

def _integer_rows(A, b) -> tuple[list[list[int]], list[int], list[int]]:
    """Scale each row of (A | b) to integers; return rows, rhs, scale factors."""
    rows, rhs, scales = [], [], []
    for row, bi in zip(A, b):
        row = [rat(x) for x in row]
        bi = rat(bi)
        s = 1
        for x in row + [bi]:
            s = s * x.denominator // math.gcd(s, x.denominator)
        rows.append([int(x * s) for x in row])
        rhs.append(int(bi * s))
        scales.append(s)
    return rows, rhs, scales


class _Tableau:
    """Rows 0..m-1 are constraints, row m is the objective (reduced costs).

    Columns: n structural, m slacks, optional auxiliary, then the RHS.
    Stored entries are integers equal to ``det`` times the true entries.
    """

    def __init__(self, rows: list[list[int]], rhs: list[int], cost: list[int],
                 auxiliary: bool):
        m, n = len(rows), len(cost)
        self.m, self.n = m, n
        self.aux = n + m if auxiliary else None
        width = n + m + (1 if auxiliary else 0)
        self.width = width
        T = []
        for i, (row, bi) in enumerate(zip(rows, rhs)):
            t = list(row) + [0] * m + ([-1] if auxiliary else []) + [bi]
            t[n + i] = 1
            T.append(t)
        obj = [-c for c in cost] + [0] * (width - n) + [0]
        T.append(obj)
        self.T = T
        self.det = 1
        self.basis = [n + i for i in range(m)]
        self.pivots = 0

    def pivot(self, r: int, k: int) -> None:
        T, det = self.T, self.det
        pr = T[r]
        p = pr[k]
        if p < 0:
            # keep det positive: negate the pivot row (the row still encodes the same equation)
            pr = [-x for x in pr]
            T[r] = pr
            p = -p
        nz = [j for j, x in enumerate(pr) if x]
        for i, row in enumerate(T):
            if i == r:
                continue
            f = row[k]
            if f == 0:
                if p != det:
                    T[i] = [x * p // det for x in row]
                continue
            new = [x * p for x in row]
            for j in nz:
                new[j] -= f * pr[j]
            if det != 1:
                new = [x // det for x in new]
            T[i] = new
        self.det = p
        self.basis[r] = k
        self.pivots += 1

    def entering(self, allowed) -> int | None:
        obj = self.T[self.m]
        for j in range(self.width):
            if obj[j] < 0 and allowed(j):
                return j
        return None

    def leaving(self, k: int) -> int | None:
        best, best_num, best_den = None, 0, 1
        for i in range(self.m):
            a = self.T[i][k]
            if a > 0:
                num = self.T[i][-1]
                if best is None:
                    better = True
                else:
                    lhs, rhs = num * best_den, best_num * a
                    better = lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best])
                if better:
                    best, best_num, best_den = i, num, a
        return best

    def run(self, allowed=lambda j: True) -> str:
        while True:
            k = self.entering(allowed)
            if k is None:
                return OPTIMAL
            r = self.leaving(k)
            if r is None:
                return UNBOUNDED
            self.pivot(r, k)

    def set_objective(self, cost: Sequence[int]) -> None:
        """Install max cost.x as the objective row, priced out against the current basis."""
        det = self.det
        obj = [0] * (self.width + 1)
        for j, c in enumerate(cost):
            obj[j] = -c * det
        for i, bj in enumerate(self.basis):
            cb = cost[bj] if bj < len(cost) else 0
            if cb:
                row = self.T[i]
                for j in range(self.width + 1):
                    obj[j] += cb * row[j]
        self.T[self.m] = obj


def _solve_integer(rows: list[list[int]], rhs: list[int], cost: list[int]) -> tuple:
    """Return (status, primal, row duals, pivots) for max cost.x, rows.x <= rhs, x >= 0."""
    m, n = len(rows), len(cost)
    if m == 0:
        if any(c > 0 for c in cost):
            return UNBOUNDED, None, None, 0
        return OPTIMAL, [Fraction(0)] * n, [], 0
    if min(rhs) < 0:
        # phase one: maximize -x_aux subject to A x - x_aux <= b
        tab = _Tableau(rows, rhs, cost, auxiliary=True)
        aux = tab.aux
        tab.set_objective([0] * aux + [-1])
        tab.pivot(min(range(m), key=lambda i: (rhs[i], i)), aux)
        tab.run()
        if tab.T[m][-1] != 0:
            return INFEASIBLE, None, None, tab.pivots
        if aux in tab.basis:
            r = tab.basis.index(aux)
            k = next((j for j in range(aux) if tab.T[r][j] != 0), None)
            if k is not None:
                tab.pivot(r, k)
        tab.set_objective(cost)
        status = tab.run(allowed=lambda j: j != aux)
    else:
        tab = _Tableau(rows, rhs, cost, auxiliary=False)
        status = tab.run()
    if status == UNBOUNDED:
        return UNBOUNDED, None, None, tab.pivots
    det = tab.det
    primal = [Fraction(0)] * n
    for i, bj in enumerate(tab.basis):
        if bj < n:
            primal[bj] = Fraction(tab.T[i][-1], det)
    obj = tab.T[m]
    duals = [Fraction(obj[n + i], det) for i in range(m)]
    return OPTIMAL, primal, duals, tab.pivots


def _solve(A, b, dims, extra_rows=()) -> LPResult:
    rows, rhs, scales = _integer_rows(A, b)
    for row, bi in extra_rows:
        rows.append(list(row))
        rhs.append(bi)
        scales.append(1)
    status, primal, duals, pivots = _solve_integer(rows, rhs, list(dims))
    if status != OPTIMAL:
        return LPResult(status, pivots=pivots)
    value = sum(d * x for d, x in zip(dims, primal))
    duals = [y * s for y, s in zip(duals, scales)]
    all_b = [rat(x) for x in b] + [Fraction(bi) for _, bi in extra_rows]
    assert sum(y * bi for y, bi in zip(duals, all_b)) == value, "strong duality failed"
    return LPResult(OPTIMAL, value, tuple(primal), tuple(duals), pivots=pivots)


def lp_maximize(sys: LinearSystem) -> LPResult:
    """Exact optimum of the dimension-weighted sum over nonnegative real vectors."""
    res = _solve(sys.A, sys.b, sys.dims)
    res.D = sys.D
    if res.status == OPTIMAL:
        # primal feasibility and dual feasibility, exactly
        assert sys.is_feasible(res.primal)
        assert all(y >= 0 for y in res.dual)
        for j, d in enumerate(sys.dims):
            assert sum(y * row[j] for y, row in zip(res.dual, sys.A)) >= d
    return res


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    multipliers: tuple[Fraction, ...]
    combined: tuple[Fraction, ...]
    rhs: Fraction
    scale: Fraction
    genus_cap: int
    system: LinearSystem | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "multipliers": [rat_to_str(x) for x in self.multipliers],
            "combined": [rat_to_str(x) for x in self.combined],
            "rhs": rat_to_str(self.rhs),
            "scale": rat_to_str(self.scale),
            "genus_cap": self.genus_cap,
            **({"system": self.system.to_json()} if self.system is not None else {}),
        }


def verify_certificate(sys: LinearSystem, y: Sequence) -> Certificate:
    """Check that nonnegative row multipliers y prove a genus cap for ``sys``."""
    y = tuple(rat(x) for x in y)
    if len(y) != sys.n_rows:
        raise InvalidCertificate(
            f"expected {sys.n_rows} multipliers, got {len(y)}")
    for i, x in enumerate(y):
        if x < 0:
            raise InvalidCertificate(f"negative multiplier at row {i + 1}")
    combined = tuple(sum(yi * row[j] for yi, row in zip(y, sys.A))
                     for j in range(sys.n_cols))
    rhs = sum((yi * bi for yi, bi in zip(y, sys.b)), Fraction(0))
    if not combined:
        raise InvalidCertificate("combination does not dominate objective")
    c = min(cj / d for cj, d in zip(combined, sys.dims))
    if c <= 0:
        raise InvalidCertificate("combination does not dominate objective")
    return Certificate(y, combined, rhs, c, floor_rat(rhs / c), sys)


# ---------------------------------------------------------------------------
# Branch and bound
# ---------------------------------------------------------------------------

def _bound_rows(n: int, lower: dict, upper: dict) -> list:
    rows = []
    for j in sorted(upper):
        r = [0] * n
        r[j] = 1
        rows.append((r, upper[j]))
    for j in sorted(lower):
        r = [0] * n
        r[j] = -1
        rows.append((r, -lower[j]))
    return rows


def ilp_maximize(sys: LinearSystem) -> LPResult:
    """Exact integer optimum by depth-first branch and bound.

    Branches on the lowest-index fractional variable; the ``e_j <= floor``
    child is explored before the ``e_j >= ceil`` child.  Nodes whose
    relaxation value rounds down to at most the incumbent are pruned.
    """
    root = lp_maximize(sys)
    if root.status == UNBOUNDED:
        raise UnboundedSystem("increase D: system does not bound the genus")
    if root.status == INFEASIBLE:
        return LPResult(INFEASIBLE, D=sys.D)
    n = sys.n_cols
    best_val: int | None = None
    best_x = None
    nodes = 0
    stack = [({}, {}, root)]
    while stack:
        lower, upper, res = stack.pop()
        nodes += 1
        if res is None:
            res = _solve(sys.A, sys.b, sys.dims, _bound_rows(n, lower, upper))
        if res.status != OPTIMAL:
            continue
        if best_val is not None and floor_rat(res.value) <= best_val:
            continue
        frac = next((j for j, x in enumerate(res.primal) if x.denominator != 1), None)
        if frac is None:
            best_val = int(res.value)
            best_x = res.primal
            continue
        v = res.primal[frac]
        up_lower = dict(lower)
        up_lower[frac] = floor_rat(v) + 1
        down_upper = dict(upper)
        down_upper[frac] = floor_rat(v)
        stack.append((up_lower, upper, None))
        stack.append((lower, down_upper, None))
    if best_val is None:
        return LPResult(INFEASIBLE, D=sys.D, nodes=nodes)
    return LPResult(OPTIMAL, Fraction(best_val), tuple(best_x), root.dual,
                    D=sys.D, nodes=nodes)


def auto_degree(build, D_max: int = 30, start: int = 1) -> tuple[LinearSystem, LPResult]:
    """Solve with D = start, start+1, ... until the relaxation is bounded.

    ``build`` maps a degree D to a LinearSystem.
    """
    for D in range(start, D_max + 1):
        sys = build(D)
        res = lp_maximize(sys)
        if res.status != UNBOUNDED:
            return sys, res
    raise UnboundedSystem(
        f"increase D: system does not bound the genus for any D <= {D_max}")


# ---------------------------------------------------------------------------
# Enumeration at fixed genus
# ---------------------------------------------------------------------------

def _enum_worker(args):
    rows, rhs, dims, g, first = args
    return kernels.enumerate_fixed_sum(rows, rhs, dims, g, first)


def enumerate_points(sys: LinearSystem, g: int, jobs: int = 1,
                     backend: str | None = None) -> list[tuple[int, ...]]:
    """All e >= 0 with sum dims_j e_j == g and A e <= b, in lexicographic order."""
    if g < 0:
        return []
    if sys.n_cols == 0:
        return [()] if g == 0 else []
    rows, rhs, _ = _integer_rows(sys.A, sys.b)
    dims = list(sys.dims)
    if jobs > 1:
        firsts = range(g // dims[0] + 1)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = ex.map(_enum_worker, [(rows, rhs, dims, g, f) for f in firsts])
            found = [t for part in parts for t in part]
        return sorted(found)
    return kernels.enumerate_fixed_sum(rows, rhs, dims, g, None, backend=backend)


def enumerate_decompositions(sys: LinearSystem, g: int, jobs: int = 1,
                             backend: str | None = None) -> list[DecompositionVector]:
    """Feasible Jacobian decompositions of genus g, in lexicographic order of e."""
    if len(sys.classes) != sys.n_cols:
        raise ValueError("system carries no class data; use enumerate_points")
    return [DecompositionVector(tuple(sys.classes), e, sys.q)
            for e in enumerate_points(sys, g, jobs, backend)]
