# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; semantics identical to ``_pykernels``."""
import itertools

import numpy as np
cimport numpy as cnp

BACKEND = "cython"

cdef enum:
    MAXE = 4096
    MAXDIM = 8
    MAXV = 9


def matmul_mod(a, b, long long p):
    cdef cnp.int64_t[:, ::1] A = np.ascontiguousarray(a, dtype=np.int64)
    cdef cnp.int64_t[:, ::1] B = np.ascontiguousarray(b, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"cannot multiply {tuple(a.shape)} by {tuple(b.shape)}")
    cdef Py_ssize_t r = A.shape[0], k = A.shape[1], c = B.shape[1], i, j, t
    out = np.zeros((r, c), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] O = out
    cdef long long s
    for i in range(r):
        for j in range(c):
            s = 0
            for t in range(k):
                s = (s + A[i, t] * B[t, j]) % p
            O[i, j] = s
    return out


cdef inline bint _check_product(long long* vals, long long so, int sr, int sc,
                                long long fo, int fc, long long lo, long long p) nogil:
    # vals[lo:] == (sr x sc at so) @ (sc x fc at fo)
    cdef int i, j, t
    cdef long long s
    for i in range(sr):
        for j in range(fc):
            s = 0
            for t in range(sc):
                s += vals[so + i * sc + t] * vals[fo + t * fc + j]
            if s % p != vals[lo + i * fc + j]:
                return 0
    return 1


cdef inline void _write_product(long long* vals, long long so, int sr, int sc,
                                long long fo, int fc, long long lo, long long p) nogil:
    cdef int i, j, t
    cdef long long s
    for i in range(sr):
        for j in range(fc):
            s = 0
            for t in range(sc):
                s += vals[so + i * sc + t] * vals[fo + t * fc + j]
            vals[lo + i * fc + j] = s % p


cdef struct System:
    int n
    long long* off
    int* rows
    int* cols
    int* kind
    int* f1
    int* f2
    int* chk_ptr
    int* chk_first
    int* chk_second
    int* chk_long
    long long* vals
    long long p


cdef bint _checks(System* S, int k) nogil:
    cdef int q, f, s, lg
    for q in range(S.chk_ptr[k], S.chk_ptr[k + 1]):
        f = S.chk_first[q]
        s = S.chk_second[q]
        lg = S.chk_long[q]
        if not _check_product(S.vals, S.off[s], S.rows[s], S.cols[s], S.off[f], S.cols[f], S.off[lg], S.p):
            return 0
    return 1


cdef long long _rec(System* S, int k) nogil:
    if k == S.n:
        return 1
    cdef int r = S.rows[k], c = S.cols[k], m = r * c, i, j
    cdef long long o = S.off[k], total = 0
    if S.kind[k] == 1:
        for i in range(r):
            for j in range(c):
                S.vals[o + i * c + j] = 1 if i == j else 0
        return _rec(S, k + 1) if _checks(S, k) else 0
    if S.kind[k] == 2:
        _write_product(S.vals, S.off[S.f2[k]], S.rows[S.f2[k]], S.cols[S.f2[k]],
                       S.off[S.f1[k]], S.cols[S.f1[k]], o, S.p)
        return _rec(S, k + 1) if _checks(S, k) else 0
    for i in range(m):
        S.vals[o + i] = 0
    while True:
        if _checks(S, k):
            total += _rec(S, k + 1)
        # odometer, last entry fastest
        i = m - 1
        while i >= 0:
            S.vals[o + i] += 1
            if S.vals[o + i] < S.p:
                break
            S.vals[o + i] = 0
            i -= 1
        if i < 0:
            break
    return total


def count_solutions(e_off, e_rows, e_cols, e_kind, e_f1, e_f2,
                    chk_ptr, chk_first, chk_second, chk_long, long long total, long long p):
    cdef cnp.int64_t[::1] off = np.ascontiguousarray(e_off, dtype=np.int64)
    cdef int[::1] rows = np.ascontiguousarray(e_rows, dtype=np.intc)
    cdef int[::1] cols = np.ascontiguousarray(e_cols, dtype=np.intc)
    cdef int[::1] kind = np.ascontiguousarray(e_kind, dtype=np.intc)
    cdef int[::1] f1 = np.ascontiguousarray(e_f1, dtype=np.intc)
    cdef int[::1] f2 = np.ascontiguousarray(e_f2, dtype=np.intc)
    cdef int[::1] cp = np.ascontiguousarray(chk_ptr, dtype=np.intc)
    cdef int[::1] cf = np.ascontiguousarray(list(chk_first) + [0], dtype=np.intc)
    cdef int[::1] cs = np.ascontiguousarray(list(chk_second) + [0], dtype=np.intc)
    cdef int[::1] cl = np.ascontiguousarray(list(chk_long) + [0], dtype=np.intc)
    vals_arr = np.zeros(max(total, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] vals = vals_arr
    cdef System S
    S.n = off.shape[0]
    if S.n == 0:
        return 1
    S.off = <long long*> &off[0]
    S.rows = &rows[0]
    S.cols = &cols[0]
    S.kind = &kind[0]
    S.f1 = &f1[0]
    S.f2 = &f2[0]
    S.chk_ptr = &cp[0]
    S.chk_first = &cf[0]
    S.chk_second = &cs[0]
    S.chk_long = &cl[0]
    S.vals = <long long*> &vals[0]
    S.p = p
    cdef long long result
    with nogil:
        result = _rec(&S, 0)
    return int(result)


def coherence_sweep(int n, dims, long long p):
    """Triangle check vs subset-composite check on every assignment of the
    ``n``-simplex; returns ``(total, triangle_ok, subset_ok, disagreements)``."""
    cdef int nv = n + 1
    if len(dims) != nv:
        raise ValueError("need one dimension per vertex")
    if nv > MAXV or max(dims) > MAXDIM:
        raise ValueError("coherence_sweep supports n <= 8 and dims <= 8")
    cdef int d[MAXV]
    cdef long long off[MAXV][MAXV]
    cdef int i, j, k, a, b, q, m, t, u, x, y
    cdef long long E = 0
    for i in range(nv):
        d[i] = int(dims[i])
    for i in range(nv):
        for j in range(i + 1, nv):
            off[i][j] = E
            E += d[j] * d[i]
    if E > MAXE:
        raise ValueError("too many entries")
    subsets = [S for mm in range(3, nv + 1) for S in itertools.combinations(range(nv), mm)]
    cdef int ns = len(subsets)
    sub_arr = np.zeros((max(ns, 1), MAXV + 1), dtype=np.intc)
    for q, S in enumerate(subsets):
        sub_arr[q, 0] = len(S)
        for t, x in enumerate(S):
            sub_arr[q, t + 1] = x
    cdef int[:, ::1] subs = sub_arr
    cdef long long vals[MAXE]
    cdef long long acc[MAXDIM * MAXDIM]
    cdef long long tmp[MAXDIM * MAXDIM]
    cdef long long s
    cdef long long total = 0, tri_ok = 0, sub_ok = 0, disagree = 0
    cdef bint tok, sok
    for t in range(E):
        vals[t] = 0
    with nogil:
        while True:
            total += 1
            # triangle check
            tok = 1
            for i in range(nv):
                if not tok:
                    break
                for j in range(i + 1, nv):
                    if not tok:
                        break
                    for k in range(j + 1, nv):
                        if not _check_product(vals, off[j][k], d[k], d[j], off[i][j], d[i], off[i][k], p):
                            tok = 0
                            break
            # subset check: iterate composites along S, compare to direct edge
            sok = 1
            for q in range(ns):
                m = subs[q, 0]
                a = subs[q, 1]
                b = subs[q, 2]
                for t in range(d[b] * d[a]):
                    acc[t] = vals[off[a][b] + t]
                for u in range(2, m):
                    a = subs[q, u]
                    b = subs[q, u + 1]
                    # tmp = M_ab (d[b] x d[a]) @ acc (d[a] x d[first])
                    for x in range(d[b]):
                        for y in range(d[subs[q, 1]]):
                            s = 0
                            for t in range(d[a]):
                                s += vals[off[a][b] + x * d[a] + t] * acc[t * d[subs[q, 1]] + y]
                            tmp[x * d[subs[q, 1]] + y] = s % p
                    for t in range(d[b] * d[subs[q, 1]]):
                        acc[t] = tmp[t]
                a = subs[q, 1]
                b = subs[q, m]
                for t in range(d[b] * d[a]):
                    if acc[t] != vals[off[a][b] + t]:
                        sok = 0
                        break
                if not sok:
                    break
            tri_ok += tok
            sub_ok += sok
            if tok != sok:
                disagree += 1
            # odometer over all entries, last fastest
            t = <int> E - 1
            while t >= 0:
                vals[t] += 1
                if vals[t] < p:
                    break
                vals[t] = 0
                t -= 1
            if t < 0:
                break
    return int(total), int(tri_ok), int(sub_ok), int(disagree)
