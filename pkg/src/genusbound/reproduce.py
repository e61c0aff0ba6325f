"""Acceptance checks: each criterion is a function returning a ``Check``."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable

from . import bounds, lpsolve, oracles
from .exactnum import QuadValue, quad_sign
from .places import inequality_system, mobius_sum, place_counts
from .weil import (DecompositionVector, admissible_elliptic_traces, make_elliptic_class,
                   point_count, power_sums, product_class)

PLACES8_A = (
    (-2, -1, 0, 1, 2),
    (1, -1, -2, -2, -1),
    (2, 2, 0, -2, -2),
    (-2, 1, 3, 1, -2),
    (2, -2, 0, 2, -2),
    (-1, 1, -2, 3, 1),
    (-2, 2, 0, -2, 2),
    (5, -4, 3, -4, 5),
)
PLACES8_B = (3, 1, 2, 3, 6, 9, 18, 30)
F2_CERTIFICATE = (0, 0, 39, 44, 0, 78, 0, 32)
GENUS26 = [(4, 7, 5, 3, 7), (5, 6, 5, 4, 6), (6, 5, 5, 5, 5)]
FIELD_SIZES = (2, 3, 4, 5, 7, 8, 9)


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def elliptic_system(q: int, traces, D: int):
    return inequality_system(q, [make_elliptic_class(q, t) for t in traces], D)


def check_places8() -> tuple[bool, str]:
    sys = elliptic_system(2, range(-2, 3), 8)
    ok = sys.A == tuple(tuple(Fraction(x) for x in row) for row in PLACES8_A) \
        and sys.b == tuple(Fraction(x) for x in PLACES8_B)
    return ok, f"8x5 table and RHS {[int(x) for x in sys.b]}"


def check_lp26() -> tuple[bool, str]:
    sys = elliptic_system(2, range(-2, 3), 8)
    res = lpsolve.lp_maximize(sys)
    cert = lpsolve.verify_certificate(sys, res.dual)
    ok = res.status == lpsolve.OPTIMAL and res.value == 26 and cert.genus_cap == 26
    return ok, f"LP value {res.value}, dual certifies cap {cert.genus_cap}"


def check_certificate() -> tuple[bool, str]:
    sys = elliptic_system(2, range(-2, 3), 8)
    cert = lpsolve.verify_certificate(sys, F2_CERTIFICATE)
    ok = cert.combined == (72,) * 5 and cert.rhs == 1872 and cert.genus_cap == 26
    return ok, (f"combined {[int(x) for x in cert.combined]}, rhs {cert.rhs}, "
                f"cap {cert.genus_cap}")


def check_degree7() -> tuple[bool, str]:
    sys = elliptic_system(2, range(-2, 3), 7)
    res = lpsolve.lp_maximize(sys)
    feasible = all(sys.is_feasible((g // 2, 0, 0, 0, g // 2)) for g in range(2, 101, 2))
    return res.status == lpsolve.UNBOUNDED and feasible, \
        f"status {res.status}, (g/2,0,0,0,g/2) feasible for even g<=100: {feasible}"


def check_enumeration() -> tuple[bool, str]:
    sys = elliptic_system(2, range(-2, 3), 8)
    at26 = lpsolve.enumerate_points(sys, 26)
    at27 = lpsolve.enumerate_points(sys, 27)
    return at26 == GENUS26 and at27 == [], f"g=26: {at26}; g=27: {len(at27)} points"


def check_f3() -> tuple[bool, str]:
    sys = elliptic_system(3, range(-3, 4), 12)
    lp = lpsolve.lp_maximize(sys)
    t0 = time.perf_counter()
    ilp = lpsolve.ilp_maximize(sys)
    dt = time.perf_counter() - t0
    ok = lp.value == 2091 and ilp.value == 2085 and dt < 30
    return ok, f"LP {lp.value}, ILP {ilp.value} ({ilp.nodes} nodes, {dt:.1f}s)"


def smallest_bounding_degree(q: int, traces, D_max: int = 12):
    classes = [make_elliptic_class(q, t) for t in traces]
    sys, _ = lpsolve.auto_degree(lambda D: inequality_system(q, classes, D), D_max)
    return sys, lpsolve.ilp_maximize(sys)


def check_ordinary() -> tuple[bool, str]:
    s2, r2 = smallest_bounding_degree(2, (-1, 1))
    s3, r3 = smallest_bounding_degree(3, (-2, -1, 1, 2))
    ok = r2.value == 3 and r3.value == 26
    return ok, f"F2 cap {r2.value} at D={s2.D}; F3 cap {r3.value} at D={s3.D}"


def check_theorem_constants() -> tuple[bool, str]:
    S = bounds.AngleSet.from_classes([make_elliptic_class(2, t) for t in range(-2, 3)])
    r = bounds.angle_bound_r(S)
    b1, b2 = bounds.theorem_bounds(S)
    b1v, b2v = float(b1.value), float(b2.value)
    ok = r == 14 and 408120 <= b1v <= 408135 and 2.5e10 <= b2v <= 2.7e10
    return ok, f"r={r}, B1={b1v:.2f}, B2={b2v:.4e}"


def check_x11() -> tuple[bool, str]:
    classes = tuple(make_elliptic_class(2, t) for t in range(-2, 3))
    counts = [point_count(DecompositionVector(classes, e), 1) for e in GENUS26]
    return counts == [1, 3, 5], f"#X(F_2) = {counts}"


def check_x0_filter() -> tuple[bool, str]:
    n = bounds.x0_level_filter(26)
    L = 423 - 8 - 12 * 26
    excluded = L > 0 and L * L > 25 * 423
    return n == 422 and excluded, f"largest N = {n}; 423 excluded: {excluded}"


def check_waterhouse(backend: str | None = None) -> tuple[bool, str]:
    bad = [q for q in FIELD_SIZES
           if oracles.weierstrass_traces(q, backend) != admissible_elliptic_traces(q)]
    return not bad, f"q in {list(FIELD_SIZES)} agree" if not bad else f"mismatch at q={bad}"


def random_product_class(rng: random.Random):
    q = rng.choice(FIELD_SIZES)
    traces = admissible_elliptic_traces(q)
    d = rng.randint(1, 3)
    return product_class([make_elliptic_class(q, rng.choice(traces)) for _ in range(d)])


def symbolic_canonical_q2() -> Fraction:
    """Evaluate the canonical-T bound for all five F_2 traces with sympy alone."""
    import sympy as sp

    x = sp.symbols("x")
    sq2 = sp.sqrt(2)
    Pexpr = sp.Integer(1)
    for t in range(-2, 3):
        c = sp.Rational(t) / (2 * sq2)
        m = 1
        while sp.chebyshevt(m, c) > 0:
            m += 1
        Pexpr *= 1 - 2 * sp.chebyshevt(m, c) * x ** m + x ** (2 * m)
    T = sp.expand((Pexpr - 1) ** 2)
    val = sp.nsimplify(sp.expand((T.subs(x, sq2) + T.subs(x, 1 / sq2)) / 2))
    return Fraction(int(sp.numer(val)), int(sp.denom(val)))


def check_properties(seed: int = 20240601, n_classes: int = 200) -> tuple[bool, str]:
    rng = random.Random(seed)
    failures = []
    for _ in range(n_classes):
        c = random_product_class(rng)
        ps = power_sums(c, 30)
        vals = [None] + [ps[n] for n in range(1, 31)]
        for n in range(1, 31):
            if mobius_sum(vals, n).denominator != 1:
                failures.append(f"Gauss {c.label} n={n}")
            if ps[n] ** 2 > 4 * c.dim ** 2 * c.q ** n:
                failures.append(f"magnitude {c.label} n={n}")
        dec = DecompositionVector((c,), (rng.randint(0, 3),), c.q)
        pc = place_counts(dec, 12)
        for n in range(1, 13):
            lhs = sum(dd * pc.values[dd - 1] for dd in range(1, n + 1) if n % dd == 0)
            if lhs != point_count(dec, n):
                failures.append(f"round trip {c.label} n={n}")
    n_subsets = 0
    for q in (2, 3):
        traces = admissible_elliptic_traces(q)
        for k in range(1, len(traces) + 1):
            for sub in combinations(traces, k):
                S = bounds.AngleSet.from_classes([make_elliptic_class(q, t) for t in sub])
                canon = bounds.lemma_bound_canonical(S)[0].value
                b2 = bounds.bound_b2(q, bounds.angle_bound_r(S)).value
                n_subsets += 1
                if quad_sign(QuadValue(b2) - canon if not isinstance(b2, QuadValue)
                             else b2 - canon) <= 0:
                    failures.append(f"canonical >= B2 for q={q} {sub}")
    S = bounds.AngleSet.from_classes([make_elliptic_class(2, t) for t in range(-2, 3)])
    canon = bounds.lemma_bound_canonical(S)[0].value
    oracle = symbolic_canonical_q2()
    if not (canon == Fraction(92088257, 32) == oracle):
        failures.append(f"canonical q=2 gives {canon}, symbolic oracle {oracle}")
    detail = (f"{n_classes} classes x n<=30, {n_subsets} subsets, canonical(q=2) = {canon}"
              if not failures else "; ".join(failures[:5]))
    return not failures, detail


CRITERIA: list[tuple[int, str, Callable[[], tuple[bool, str]]]] = [
    (1, "place inequalities over F_2, D=8", check_places8),
    (2, "LP bound 26 with dual certificate", check_lp26),
    (3, "multiplier certificate (0,0,39,44,0,78,0,32)", check_certificate),
    (4, "D=7 relaxation unbounded", check_degree7),
    (5, "enumeration at genus 26 and 27", check_enumeration),
    (6, "F_3 LP 2091 and ILP 2085", check_f3),
    (7, "ordinary caps 3 over F_2 and 26 over F_3", check_ordinary),
    (8, "closed-form constants B1 and B2", check_theorem_constants),
    (9, "X(11) point counts disambiguate", check_x11),
    (10, "level filter at genus 26", check_x0_filter),
    (11, "Waterhouse traces vs Weierstrass enumeration", check_waterhouse),
    (12, "property suites", check_properties),
]


def run_check(number: int, name: str, fn) -> Check:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:   # a crash is a failure, reported rather than raised
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Check(number, name, ok, detail, time.perf_counter() - t0)


def run_all(only: set[int] | None = None) -> list[Check]:
    return [run_check(n, name, fn) for n, name, fn in CRITERIA if only is None or n in only]
