"""Independent brute-force oracles.

These do not share code paths with the closed-form routines they check:
elliptic traces come from counting points on every Weierstrass equation over
an explicitly constructed F_q.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

from . import kernels
from .weil import prime_power


def _polymulmod(a, b, mod, p):
    """Multiply coefficient lists (ascending) modulo a monic polynomial ``mod`` over F_p."""
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    deg = len(mod) - 1
    for k in range(len(out) - 1, deg - 1, -1):
        c = out[k]
        if c:
            for j in range(deg + 1):
                out[k - deg + j] = (out[k - deg + j] - c * mod[j]) % p
    return (out + [0] * deg)[:deg]


def _is_irreducible(mod, p):
    deg = len(mod) - 1
    # a reducible polynomial of degree <= 3 has a root; general degrees use trial division
    for d in range(1, deg // 2 + 1):
        for tail in product(range(p), repeat=d):
            f = list(tail) + [1]
            r = list(mod)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k]
                if c:
                    for j in range(d + 1):
                        r[k - d + j] = (r[k - d + j] - c * f[j]) % p
            if not any(r[:d]):
                return False
    return True


@lru_cache(maxsize=None)
def gf_tables(q: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    """(p, add, mul) for F_q; element k encodes the polynomial with base-p digits of k."""
    p, a = prime_power(q)
    if a == 1:
        add = tuple((x + y) % p for x in range(q) for y in range(q))
        mul = tuple((x * y) % p for x in range(q) for y in range(q))
        return p, add, mul
    mod = next(list(t) + [1] for t in product(range(p), repeat=a)
               if _is_irreducible(list(t) + [1], p))

    def digits(x):
        return [(x // p ** i) % p for i in range(a)]

    def encode(ds):
        return sum(d * p ** i for i, d in enumerate(ds))

    add = tuple(encode([(u + v) % p for u, v in zip(digits(x), digits(y))])
                for x in range(q) for y in range(q))
    mul = tuple(encode(_polymulmod(digits(x), digits(y), mod, p))
                for x in range(q) for y in range(q))
    return p, add, mul


def weierstrass_traces(q: int, backend: str | None = None) -> list[int]:
    """Traces of Frobenius realized by nonsingular Weierstrass curves over F_q."""
    p, add, mul = gf_tables(q)
    return kernels.weierstrass_traces(q, p, list(add), list(mul), backend=backend)
