"""Dense univariate polynomials over Q.

A polynomial is a tuple of Fractions in ascending degree order with no
trailing zeros; the zero polynomial is ``()``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .exactnum import RatInterval

Poly = tuple


def poly(coeffs: Iterable) -> Poly:
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly) -> int:
    return len(f) - 1


def add(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return poly((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(n))


def sub(f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    return poly((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n))


def scale(f: Poly, c) -> Poly:
    return poly(c * x for x in f)


def mul(f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return ()
    out = [Fraction(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return poly(out)


def divmod_poly(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    lead = g[-1]
    if len(r) - 1 < dg:
        return (), poly(r)
    q = [Fraction(0)] * (len(r) - dg)
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] / lead
        q[k] = c
        if c:
            for j in range(dg + 1):
                r[k + j] -= c * g[j]
    return poly(q), poly(r[:dg])


def rem(f: Poly, g: Poly) -> Poly:
    return divmod_poly(f, g)[1]


def monic(f: Poly) -> Poly:
    if not f:
        return f
    return scale(f, 1 / f[-1])


def gcd(f: Poly, g: Poly) -> Poly:
    while g:
        f, g = g, rem(f, g)
    return monic(f)


def derivative(f: Poly) -> Poly:
    return poly(i * f[i] for i in range(1, len(f)))


def evaluate(f: Poly, x):
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def evaluate_interval(f: Poly, x: RatInterval) -> RatInterval:
    """Horner evaluation over an interval (an enclosure, not necessarily tight)."""
    acc = RatInterval(0, 0)
    for c in reversed(f):
        acc = acc * x + c
    return acc


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: monic squarefree, pairwise coprime (a_i, i) with f = lc * prod a_i**i."""
    if degree(f) < 1:
        return []
    f = monic(f)
    df = derivative(f)
    a = gcd(f, df)
    b = divmod_poly(f, a)[0]
    c = divmod_poly(df, a)[0]
    d = sub(c, derivative(b))
    out = []
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def squarefree_part(f: Poly) -> Poly:
    if degree(f) < 1:
        return monic(f)
    return divmod_poly(monic(f), gcd(f, derivative(f)))[0]


def sturm_sequence(f: Poly) -> list[Poly]:
    seq = [f, derivative(f)]
    while seq[-1] and degree(seq[-1]) > 0:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append(scale(r, -1))
    return [p for p in seq if p]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for u, v in zip(s, s[1:]) if u != v)


def variations_at(seq: list[Poly], x: Fraction) -> int:
    return _variations([_sign(evaluate(p, x)) for p in seq])


def variations_at_infinity(seq: list[Poly], positive: bool) -> int:
    signs = []
    for p in seq:
        s = _sign(p[-1])
        if not positive and degree(p) % 2:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_real_roots(seq: list[Poly]) -> int:
    """Number of distinct real roots of the squarefree polynomial seq[0]."""
    return variations_at_infinity(seq, False) - variations_at_infinity(seq, True)


def count_roots_in(seq: list[Poly], lo: Fraction, hi: Fraction) -> int:
    """Distinct roots in the half-open interval (lo, hi]."""
    return variations_at(seq, lo) - variations_at(seq, hi)


def root_bound(f: Poly) -> Fraction:
    """Cauchy bound: every root has absolute value below this."""
    lead = abs(f[-1])
    return 1 + max((abs(c) / lead for c in f[:-1]), default=Fraction(0))


def isolate_roots(f: Poly, lo: Fraction | None = None, hi: Fraction | None = None,
                  ) -> list[RatInterval]:
    """Disjoint intervals, each containing exactly one distinct real root of f in (lo, hi].

    Intervals are closed; a root sitting exactly on a bisection point is
    returned as a degenerate interval.
    """
    f = squarefree_part(f)
    if degree(f) < 1:
        return []
    if lo is None or hi is None:
        b = root_bound(f)
        lo, hi = -b, b
    seq = sturm_sequence(f)
    out: list[RatInterval] = []
    stack = [(Fraction(lo), Fraction(hi))]
    while stack:
        a, b = stack.pop()
        n = count_roots_in(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            if evaluate(f, b) == 0:
                out.append(RatInterval(b, b))
            else:
                out.append(RatInterval(a, b))
            continue
        m = (a + b) / 2
        stack.append((m, b))
        stack.append((a, m))
    out.sort(key=lambda iv: iv.lo)
    return out


def refine_root(f: Poly, iv: RatInterval, seq: list[Poly] | None = None) -> RatInterval:
    """Halve an isolating interval of a squarefree f, keeping the root."""
    if iv.lo == iv.hi:
        return iv
    if seq is None:
        seq = sturm_sequence(f)
    m = iv.mid
    if evaluate(f, m) == 0:
        return RatInterval(m, m)
    if count_roots_in(seq, iv.lo, m) == 1:
        return RatInterval(iv.lo, m)
    return RatInterval(m, iv.hi)
