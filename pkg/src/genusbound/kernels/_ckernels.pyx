# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same contracts as _pykernels, int64 arithmetic."""

from libc.stdlib cimport malloc, free
from math import lcm


cdef int _rec(int j, long long R, int n, int m,
              long long *cols, long long *rhs, long long *Lb, long long *tails,
              long long *dims, long long L, long long *partial, long long *e,
              long long first, list out) except -1:
    cdef int i
    cdef long long x, lo, hi, d
    cdef long long *nxt
    for i in range(m):
        if L * partial[i] + R * tails[i * (n + 1) + j] > Lb[i]:
            return 0
    d = dims[j]
    if j == n - 1:
        if R % d:
            return 0
        x = R // d
        for i in range(m):
            if partial[i] + cols[j * m + i] * x > rhs[i]:
                return 0
        e[j] = x
        out.append(tuple([e[k] for k in range(n)]))
        return 0
    lo, hi = 0, R // d
    if j == 0 and first >= 0:
        if first > hi:
            return 0
        lo, hi = first, first
    nxt = partial + m
    for x in range(lo, hi + 1):
        e[j] = x
        for i in range(m):
            nxt[i] = partial[i] + cols[j * m + i] * x
        _rec(j + 1, R - x * d, n, m, cols, rhs, Lb, tails, dims, L, nxt, e, first, out)
    return 0


def enumerate_fixed_sum(rows, rhs, dims, g, first=None):
    cdef int n = len(dims)
    cdef int m = len(rows)
    cdef int i, j
    cdef long long L, cur, v
    if n == 0:
        return [()] if g == 0 else []
    L = lcm(*dims)
    cdef long long *cols = <long long *> malloc(sizeof(long long) * (n * m + 1))
    cdef long long *crhs = <long long *> malloc(sizeof(long long) * (m + 1))
    cdef long long *Lb = <long long *> malloc(sizeof(long long) * (m + 1))
    cdef long long *tails = <long long *> malloc(sizeof(long long) * (m * (n + 1) + 1))
    cdef long long *cdims = <long long *> malloc(sizeof(long long) * n)
    cdef long long *partial = <long long *> malloc(sizeof(long long) * (m * (n + 1) + 1))
    cdef long long *e = <long long *> malloc(sizeof(long long) * n)
    out = []
    try:
        for j in range(n):
            cdims[j] = dims[j]
            e[j] = 0
            for i in range(m):
                cols[j * m + i] = rows[i][j]
        for i in range(m):
            crhs[i] = rhs[i]
            Lb[i] = L * rhs[i]
            partial[i] = 0
            tails[i * (n + 1) + n] = 0
            cur = rows[i][n - 1] * (L // dims[n - 1])
            tails[i * (n + 1) + n - 1] = cur
            for j in range(n - 2, -1, -1):
                v = rows[i][j] * (L // dims[j])
                if v < cur:
                    cur = v
                tails[i * (n + 1) + j] = cur
        _rec(0, g, n, m, cols, crhs, Lb, tails, cdims, L, partial, e,
             -1 if first is None else first, out)
    finally:
        free(cols); free(crhs); free(Lb); free(tails); free(cdims); free(partial); free(e)
    return out


def weierstrass_traces(int q, int p, add, mul):
    cdef int a1, a2, a3, a4, a6, x, u, w, count, y
    cdef int b2, b4, b6, b8, disc, a1sq, a1a3
    cdef int c2 = 2 % p, c4 = 4 % p, c8 = 8 % p, c9 = 9 % p, c27 = 27 % p
    cdef int *A = <int *> malloc(sizeof(int) * q * q)
    cdef int *M = <int *> malloc(sizeof(int) * q * q)
    cdef int *neg = <int *> malloc(sizeof(int) * q)
    cdef int *sq = <int *> malloc(sizeof(int) * q)
    cdef int *cube = <int *> malloc(sizeof(int) * q)
    cdef int *nsol = <int *> malloc(sizeof(int) * q * q)
    traces = set()
    try:
        for x in range(q * q):
            A[x] = add[x]
            M[x] = mul[x]
            nsol[x] = 0
        for x in range(q):
            for y in range(q):
                if A[x * q + y] == 0:
                    neg[x] = y
            sq[x] = M[x * q + x]
            cube[x] = M[sq[x] * q + x]
        for u in range(q):
            for y in range(q):
                nsol[u * q + A[sq[y] * q + M[u * q + y]]] += 1
        for a1 in range(q):
            a1sq = sq[a1]
            for a3 in range(q):
                a1a3 = M[a1 * q + a3]
                for a2 in range(q):
                    b2 = A[a1sq * q + M[c4 * q + a2]]
                    for a4 in range(q):
                        b4 = A[M[c2 * q + a4] * q + a1a3]
                        for a6 in range(q):
                            b6 = A[sq[a3] * q + M[c4 * q + a6]]
                            b8 = A[A[A[M[a1sq * q + a6] * q + M[M[c4 * q + a2] * q + a6]] * q
                                     + neg[M[a1a3 * q + a4]]] * q
                                   + A[M[a2 * q + sq[a3]] * q + neg[sq[a4]]]]
                            disc = A[A[neg[M[sq[b2] * q + b8]] * q
                                       + neg[M[c8 * q + M[sq[b4] * q + b4]]]] * q
                                     + A[neg[M[c27 * q + sq[b6]]] * q
                                         + M[c9 * q + M[M[b2 * q + b4] * q + b6]]]]
                            if disc == 0:
                                continue
                            count = 1
                            for x in range(q):
                                u = A[M[a1 * q + x] * q + a3]
                                w = A[A[cube[x] * q + M[a2 * q + sq[x]]] * q
                                      + A[M[a4 * q + x] * q + a6]]
                                count += nsol[u * q + w]
                            traces.add(q + 1 - count)
    finally:
        free(A); free(M); free(neg); free(sq); free(cube); free(nsol)
    return sorted(traces)
