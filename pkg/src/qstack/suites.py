"""Randomized and exhaustive verification suites exposed through ``qstack verify``.

Every suite checks a library operation against an independent oracle and
returns a summary dict with ``passed``/``failed`` counts.
"""
from __future__ import annotations

import itertools
import time
from fractions import Fraction
from typing import Callable

import numpy as np

from . import kernels
from .action import GaugeElement, count_points, orbit_census, tilde_dims
from .higgs import HiggsDatum, diagram_integrable, integrability_check, random_commuting
from .nakajima import SolveConfig, build_moment_map, equivariance_check, eval_moment, random_doubled_rep, solve_zero_locus, trace_sum
from .quivers import FramingFn, frame, tilde
from .reps import (
    Triple, compose_maps, compose_via_trace, count_reps, degenerate_along, forward_chain, restrict_along,
    triple_c, triple_e, triple_s, triple_t,
)
from .rings import QQ, Floats, Matrix, PrimeField, gl_order
from .simplicial import SSet2


def naive_matmul(a: list[list], b: list[list], cols: int, mod: int | None = None) -> list[list]:
    """Schoolbook product of nested lists; ``cols`` is the column count of ``b``."""
    out = []
    for row in a:
        new = []
        for j in range(cols):
            s = 0
            for t in range(len(b)):
                s += row[t] * b[t][j]
            new.append(s % mod if mod else s)
        out.append(new)
    return out


def _summary(name: str, passed: int, failed: int, t0: float, **extra) -> dict:
    out = {"suite": name, "passed": passed, "failed": failed, "ok": failed == 0, "seconds": round(time.perf_counter() - t0, 3)}
    out.update(extra)
    return out


def _rand_dims(rng, lo=0, hi=4, k=3):
    return [int(x) for x in rng.integers(lo, hi + 1, size=k)]


def trace_composition(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    passed = failed = 0
    worst = 0.0
    for ring in (PrimeField(7), QQ, Floats()):
        for _ in range(cases):
            U, V, W = _rand_dims(rng, 0, 4)
            f = Matrix.random(ring, rng, V, U)
            g = Matrix.random(ring, rng, W, V)
            got = compose_via_trace(Triple.of(g), Triple.of(f)).mat
            want = naive_matmul(g.tolist(), f.tolist(), U, ring.p if isinstance(ring, PrimeField) else None)
            if ring.exact:
                ok = got.shape == (W, U) and (got.rows == 0 or got.cols == 0 or got.tolist() == want)
            else:
                w = np.array(want, dtype=float).reshape(W, U)
                err = float(np.linalg.norm(got.data - w)) / float(np.linalg.norm(w)) if np.linalg.norm(w) else float(np.linalg.norm(got.data))
                worst = max(worst, err)
                ok = err <= 1e-12
            passed += ok
            failed += not ok
    return _summary("trace-composition", passed, failed, t0, worst_relative_error=worst)


def internal_category(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    passed = failed = 0
    for k in range(cases):
        ring = PrimeField(5) if k % 2 == 0 else QQ
        a, b, c, d = _rand_dims(rng, 0, 4, 4)
        f = Triple.of(Matrix.random(ring, rng, b, a))
        g = Triple.of(Matrix.random(ring, rng, c, b))
        h = Triple.of(Matrix.random(ring, rng, d, c))
        ok = triple_c(h, triple_c(g, f)) == triple_c(triple_c(h, g), f)
        ok &= triple_c(f, triple_e(ring, a)) == f and triple_c(triple_e(ring, b), f) == f
        ok &= triple_s(triple_e(ring, a)) == a == triple_t(triple_e(ring, a))
        ok &= triple_s(triple_c(g, f)) == triple_s(f) and triple_t(triple_c(g, f)) == triple_t(g)
        passed += ok
        failed += not ok
    return _summary("internal-category", passed, failed, t0)


def _bijection_instances():
    ab = SSet2.build(["a", "b"], [("e_ab", "a", "b")])
    abc = SSet2.build(["a", "b", "c"], [("e_ab", "a", "b"), ("e_bc", "b", "c")])
    jordan = SSet2.build(["v"], [("B", "v", "v")])
    return [
        ("a->b", ab, FramingFn.all_regular(ab), {"a": 1, "b": 1}, 2),
        ("a->b", ab, FramingFn.all_regular(ab), {"a": 1, "b": 1}, 3),
        ("a->b->c, c framed", abc, FramingFn.framed(abc, ["c"]), {"a": 1, "b": 1, "c": 1}, 2),
        ("jordan", jordan, FramingFn.all_regular(jordan), {"v": 1}, 2),
        ("jordan", jordan, FramingFn.all_regular(jordan), {"v": 1}, 3),
    ]


def _brute_count(shape: SSet2, dims, p: int) -> int:
    """Enumerate every matrix assignment and test all triangles directly."""
    edges = sorted(shape.edges, key=lambda e: e.id)
    sizes = [dims[e.tgt] * dims[e.src] for e in edges]
    total = 0
    for flat in itertools.product(range(p), repeat=sum(sizes)):
        mats, o = {}, 0
        for e, s in zip(edges, sizes):
            r, c = dims[e.tgt], dims[e.src]
            mats[e.id] = [list(flat[o + i * c : o + (i + 1) * c]) for i in range(r)]
            o += s
        ok = all(
            mats[e.id] == [[int(i == j) for j in range(dims[e.src])] for i in range(dims[e.src])]
            for e in edges if e.identity
        )
        for t in shape.triangles:
            if not ok:
                break
            ok = naive_matmul(mats[t.second], mats[t.first], dims[shape.edge(t.first).src], p) == mats[t.long]
        total += ok
    return total


def tilde_bijection(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    passed = failed = 0
    rows = []
    for name, I, f, dims, p in _bijection_instances():
        T = tilde(I, f)
        td = tilde_dims(dims, f)
        lhs = count_reps(T, td, PrimeField(p))
        brute = _brute_count(T, td, p)
        group = 1
        for v in f.regular():
            group *= gl_order(dims[v], p)
        rhs = group * count_reps(I, dims, PrimeField(p))
        ok = lhs == rhs == brute
        rows.append({"instance": name, "p": p, "tilde_count": lhs, "gauge_times_rep": rhs})
        passed += ok
        failed += not ok
    return _summary("tilde-bijection", passed, failed, t0, instances=rows)


def coequalizer(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    passed = failed = 0
    for _, I, f, dims, p in _bijection_instances():
        rep = orbit_census(I, dims, p, f)
        ok = rep.stacky_count == Fraction(rep.rep_count, rep.gauge_order)
        ok &= sum(o.size for o in rep.orbits) == rep.rep_count
        ok &= count_points(I, dims, p, f).stacky_count == rep.stacky_count
        passed += ok
        failed += not ok
    return _summary("coequalizer", passed, failed, t0)


def coherence(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    total = disagree = 0
    for dims in itertools.product(range(3), repeat=4):
        n, _, _, d = kernels.coherence_sweep(3, dims, 2)
        total += n
        disagree += d
    return _summary("coherence", total - disagree, disagree, t0, assignments=total, backend=kernels.BACKEND)


def functoriality(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    field = PrimeField(5)
    passed = failed = 0
    done = 0
    while done < cases:
        n = int(rng.integers(1, 4))
        q = int(rng.integers(n, n + 3))
        m = int(rng.integers(0, q + 1))
        # sigma: [q] -> [n] monotone surjection; iota: [m] -> [q] strictly monotone
        cuts = sorted(rng.choice(np.arange(1, q + 1), size=n, replace=False).tolist()) if n else []
        sigma = [sum(1 for c in cuts if c <= i) for i in range(q + 1)]
        iota = sorted(rng.choice(np.arange(q + 1), size=m + 1, replace=False).tolist())
        dims = [int(x) for x in rng.integers(0, 3, size=n + 1)]
        spine = [Matrix.random(field, rng, dims[i + 1], dims[i]) for i in range(n)]
        chain = forward_chain(field, spine)
        lhs = restrict_along(iota, degenerate_along(sigma, chain))
        rhs_map = compose_maps(iota, sigma)
        # oracle: arrow (i, j) is the product of spine arrows between sigma(iota(i)) and sigma(iota(j))
        ok = True
        for i, j in itertools.combinations(range(m + 1), 2):
            a, b = rhs_map[i], rhs_map[j]
            want = [[int(x == y) for y in range(dims[a])] for x in range(dims[a])]
            for k in range(a, b):
                want = naive_matmul(spine[k].tolist(), want, dims[a], field.p)
            got = lhs.mats[f"{i}_{j}"]
            ok &= got.shape == (dims[b], dims[a]) and (got.rows == 0 or got.cols == 0 or got.tolist() == want)
        passed += ok
        failed += not ok
        done += 1
    return _summary("functoriality", passed, failed, t0)


def higgs(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    passed = failed = 0
    F2 = PrimeField(2)
    for n in range(0, 3):
        for entries in itertools.product(range(2), repeat=2 * n * n):
            phi = [np.array(entries[:n * n]).reshape(n, n), np.array(entries[n * n:]).reshape(n, n)]
            h = HiggsDatum(n, 2, tuple(Matrix(F2, p.astype(np.int64)) for p in phi))
            ok = integrability_check(h) == diagram_integrable(h)
            passed += ok
            failed += not ok
    for k in range(cases):
        n, m = int(rng.integers(1, 5)), int(rng.integers(1, 4))
        if k % 2:
            h = random_commuting(QQ, rng, n, m)
        else:
            h = HiggsDatum(n, m, tuple(Matrix.random(QQ, rng, n, n) for _ in range(m)))
        ok = integrability_check(h) == diagram_integrable(h)
        ok &= m != 1 or integrability_check(h)
        passed += ok
        failed += not ok
    return _summary("higgs", passed, failed, t0)


def direct_moment(m, r) -> dict:
    """Oracle: in-minus-out formula evaluated edge by edge with schoolbook products."""
    Q, star = m.quiver, m.doubled.star
    out = {}
    for v in m.terms:
        dv = r.dims[v]
        acc = [[Fraction(0)] * dv for _ in range(dv)]
        for e in Q.edges:
            x, y = r.mats[e.id].tolist(), r.mats[star[e.id]].tolist()
            parts = []
            if e.tgt == v:
                parts.append((1, naive_matmul(x, y, dv)))
            if e.src == v:
                parts.append((-1, naive_matmul(y, x, dv)))
            for sign, prod in parts:
                for i in range(dv):
                    for j in range(dv):
                        acc[i][j] += sign * prod[i][j]
        out[v] = acc
    return out


def moment_map(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    passed = failed = 0
    quivers = [
        SSet2.build(["v"], [("B", "v", "v")]),
        SSet2.build(["a", "b"], [("e", "a", "b")]),
        SSet2.build(["a", "b", "c"], [("x", "a", "b"), ("y", "b", "c"), ("z", "c", "a"), ("l", "b", "b")]),
    ]
    for k in range(cases):
        I = quivers[k % len(quivers)]
        framed = bool(k % 2)
        Q, f = frame(I) if framed else (I, FramingFn.all_regular(I))
        m = build_moment_map(Q, f)
        dims = {v: int(rng.integers(0, 3)) for v in Q.vertices}
        r = random_doubled_rep(m, dims, QQ, rng)
        got = eval_moment(m, r)
        want = direct_moment(m, r)
        ok = all(got[v].tolist() == want[v] for v in m.terms)
        g = GaugeElement(QQ, {v: _random_invertible(rng, dims[v]) for v in f.regular()})
        ok &= equivariance_check(m, r, g) == 0.0
        if not framed:
            ok &= trace_sum(m, r) == 0
        passed += ok
        failed += not ok
    return _summary("moment-map", passed, failed, t0)


def _random_invertible(rng, n: int) -> Matrix:
    while True:
        m = Matrix.random(QQ, rng, n, n)
        if m.is_invertible():
            return m


def nakajima(seed: int, cases: int) -> dict:
    t0 = time.perf_counter()
    J = SSet2.build(["v"], [("B", "v", "v")])
    Q, f = frame(J)
    passed = failed = 0
    for k in range(cases):
        res = solve_zero_locus(Q, f, {"v": 1, "fr_v": 1}, SolveConfig(seed=seed + k))
        ij = abs(float((res.rep.mats["j_v*"] @ res.rep.mats["j_v"]).data[0, 0]))
        ok = res.converged and res.residual <= 1e-10 and ij <= 1e-9
        passed += ok
        failed += not ok
    return _summary("nakajima", passed, failed, t0)


SUITES: dict[str, Callable[[int, int], dict]] = {
    "trace-composition": trace_composition,
    "internal-category": internal_category,
    "tilde-bijection": tilde_bijection,
    "coequalizer": coequalizer,
    "coherence": coherence,
    "functoriality": functoriality,
    "higgs": higgs,
    "moment-map": moment_map,
    "nakajima": nakajima,
}
