"""Pure-Python implementations of the hot kernels.

Used when the compiled extension is unavailable or ``QSTACK_PURE=1``.  The
compiled module in ``_kernels.pyx`` must agree with these on every input.
"""
from __future__ import annotations

import itertools

import numpy as np

BACKEND = "python"


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape} by {b.shape}")
    r, k = a.shape
    c = b.shape[1]
    out = np.zeros((r, c), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            s = 0
            for t in range(k):
                s += int(a[i, t]) * int(b[t, j])
            out[i, j] = s % p
    return out


def _mul_flat(x, xo, r, k, y, yo, c, p):
    """(r x k) at x[xo:] times (k x c) at y[yo:] -> list of r*c residues."""
    out = [0] * (r * c)
    for i in range(r):
        for j in range(c):
            s = 0
            for t in range(k):
                s += x[xo + i * k + t] * y[yo + t * c + j]
            out[i * c + j] = s % p
    return out


def count_solutions(
    e_off, e_rows, e_cols, e_kind, e_f1, e_f2, chk_ptr, chk_first, chk_second, chk_long, total, p
) -> int:
    """Count assignments of a compiled constraint system by depth-first search.

    Edge ``k`` (in search order) is free (kind 0), identity (1) or forced as
    ``M[e_f2[k]] @ M[e_f1[k]]`` (2).  After placing edge ``k`` the triangles
    ``chk_ptr[k]:chk_ptr[k+1]`` are checked.
    """
    n = len(e_off)
    vals = [0] * total

    def place(k: int, entries) -> bool:
        o = e_off[k]
        vals[o : o + len(entries)] = entries
        for q in range(chk_ptr[k], chk_ptr[k + 1]):
            f, s, lg = chk_first[q], chk_second[q], chk_long[q]
            prod = _mul_flat(vals, e_off[s], e_rows[s], e_cols[s], vals, e_off[f], e_cols[f], p)
            o2 = e_off[lg]
            if prod != vals[o2 : o2 + len(prod)]:
                return False
        return True

    def rec(k: int) -> int:
        if k == n:
            return 1
        r, c = e_rows[k], e_cols[k]
        kind = e_kind[k]
        if kind == 1:
            return rec(k + 1) if place(k, [1 if i == j else 0 for i in range(r) for j in range(c)]) else 0
        if kind == 2:
            f, s = e_f1[k], e_f2[k]
            prod = _mul_flat(vals, e_off[s], e_rows[s], e_cols[s], vals, e_off[f], e_cols[f], p)
            return rec(k + 1) if place(k, prod) else 0
        total_k = 0
        for entries in itertools.product(range(p), repeat=r * c):
            if place(k, list(entries)):
                total_k += rec(k + 1)
        return total_k

    return rec(0)


def _simplex_layout(n, dims):
    pairs = [(i, j) for i in range(n + 1) for j in range(i + 1, n + 1)]
    offs, o = {}, 0
    for i, j in pairs:
        offs[(i, j)] = o
        o += dims[j] * dims[i]
    return pairs, offs, o


def coherence_sweep(n: int, dims, p: int, chunk: int = 1 << 18) -> tuple[int, int, int, int]:
    """Run the triangle check and the subset-composite check on every
    assignment of matrices to the edges of the ``n``-simplex.

    Returns ``(total, triangle_ok, subset_ok, disagreements)``.
    """
    dims = [int(d) for d in dims]
    if len(dims) != n + 1:
        raise ValueError("need one dimension per vertex")
    pairs, offs, E = _simplex_layout(n, dims)
    total = p**E
    subsets = [S for m in range(3, n + 2) for S in itertools.combinations(range(n + 1), m)]
    triples = list(itertools.combinations(range(n + 1), 3))
    powers = p ** np.arange(E - 1, -1, -1, dtype=np.int64) if E else np.zeros(0, dtype=np.int64)
    tri_ok = sub_ok = disagree = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % p if E else np.zeros((len(idx), 0), dtype=np.int64)
        mats = {}
        for i, j in pairs:
            o = offs[(i, j)]
            mats[(i, j)] = digits[:, o : o + dims[j] * dims[i]].reshape(len(idx), dims[j], dims[i])

        def same(x, y):
            if x.shape[1] == 0 or x.shape[2] == 0:
                return np.ones(len(idx), dtype=bool)
            return np.all((x == y).reshape(len(idx), -1), axis=1)

        t_ok = np.ones(len(idx), dtype=bool)
        for i, j, k in triples:
            prod = np.matmul(mats[(j, k)], mats[(i, j)]) % p
            t_ok &= same(prod, mats[(i, k)])
        s_ok = np.ones(len(idx), dtype=bool)
        for S in subsets:
            acc = mats[(S[0], S[1])]
            for a, b in zip(S[1:], S[2:]):
                acc = np.matmul(mats[(a, b)], acc) % p
            s_ok &= same(acc, mats[(S[0], S[-1])])
        tri_ok += int(t_ok.sum())
        sub_ok += int(s_ok.sum())
        disagree += int((t_ok != s_ok).sum())
    return total, tri_ok, sub_ok, disagree
