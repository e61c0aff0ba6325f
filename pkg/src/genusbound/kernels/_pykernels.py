"""Pure-Python reference kernels (always available)."""

from __future__ import annotations

from math import lcm


def _min_tail(rows, dims):
    L = lcm(*dims)
    w = [L // d for d in dims]
    n = len(dims)
    tails = []
    for row in rows:
        t = [0] * (n + 1)
        cur = None
        for j in range(n - 1, -1, -1):
            v = row[j] * w[j]
            cur = v if cur is None else min(cur, v)
            t[j] = cur
        tails.append(t)
    return L, tails


def enumerate_fixed_sum(rows, rhs, dims, g, first=None):
    """Nonnegative integer e with sum(dims[j] e[j]) == g and rows.e <= rhs.

    ``rows`` and ``rhs`` are integers.  Output is in lexicographic order.
    If ``first`` is given, e[0] is fixed to that value.  Prefixes are pruned
    when even the cheapest completion (all remaining weight on the column
    with the smallest per-dimension coefficient) violates a row.
    """
    n = len(dims)
    m = len(rows)
    L, tails = _min_tail(rows, dims)
    cols = [[rows[i][j] for i in range(m)] for j in range(n)]
    Lb = [L * b for b in rhs]
    out = []
    e = [0] * n

    def rec(j, R, partial):
        for i in range(m):
            if L * partial[i] + R * tails[i][j] > Lb[i]:
                return
        d = dims[j]
        col = cols[j]
        if j == n - 1:
            if R % d:
                return
            x = R // d
            for i in range(m):
                if partial[i] + col[i] * x > rhs[i]:
                    return
            e[j] = x
            out.append(tuple(e))
            return
        if j == 0 and first is not None:
            values = [first] if first * d <= R else []
        else:
            values = range(R // d + 1)
        for x in values:
            e[j] = x
            rec(j + 1, R - x * d, [p + c * x for p, c in zip(partial, col)])

    if n == 0:
        return [()] if g == 0 else []
    rec(0, g, [0] * m)
    return out


def weierstrass_traces(q, p, add, mul):
    """Traces q + 1 - #E(F_q) over all nonsingular Weierstrass equations.

    ``add`` and ``mul`` are flattened q*q tables of F_q; elements 0..p-1
    form the prime field with integer c represented by c mod p.
    """
    def A(x, y):
        return add[x * q + y]

    def M(x, y):
        return mul[x * q + y]

    neg = [0] * q
    for x in range(q):
        for y in range(q):
            if A(x, y) == 0:
                neg[x] = y

    def c(k):
        return k % p

    # solutions of y^2 + u y = w
    nsol = [0] * (q * q)
    for u in range(q):
        for y in range(q):
            nsol[u * q + A(M(y, y), M(u, y))] += 1

    cube = [M(M(x, x), x) for x in range(q)]
    sq = [M(x, x) for x in range(q)]
    traces = set()
    for a1 in range(q):
        a1sq = sq[a1]
        for a3 in range(q):
            a1a3 = M(a1, a3)
            b6a = sq[a3]
            for a2 in range(q):
                b2 = A(a1sq, M(c(4), a2))
                for a4 in range(q):
                    b4 = A(M(c(2), a4), a1a3)
                    for a6 in range(q):
                        b6 = A(b6a, M(c(4), a6))
                        b8 = A(A(A(M(a1sq, a6), M(M(c(4), a2), a6)), neg[M(a1a3, a4)]),
                               A(M(a2, sq[a3]), neg[sq[a4]]))
                        disc = A(A(neg[M(sq[b2], b8)], neg[M(c(8), M(sq[b4], b4))]),
                                 A(neg[M(c(27), sq[b6])], M(c(9), M(M(b2, b4), b6))))
                        if disc == 0:
                            continue
                        count = 1
                        for x in range(q):
                            u = A(M(a1, x), a3)
                            w = A(A(cube[x], M(a2, sq[x])), A(M(a4, x), a6))
                            count += nsol[u * q + w]
                        traces.add(q + 1 - count)
    return sorted(traces)
