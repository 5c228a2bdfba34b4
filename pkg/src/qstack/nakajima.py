"""Moment maps on doubled framed quivers and their zero loci.

For a framed quiver ``Q`` with doubled edges ``a, a*``, the moment map at a
regular vertex ``v`` is

    mu_v = sum_{a : tgt(a) = v} x_a x_{a*}  -  sum_{a : src(a) = v} x_{a*} x_a

(``convention="opposite"`` flips the overall sign).  Zero loci are found with
a damped Gauss-Newton (Levenberg-Marquardt) iteration on float matrices.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .action import GaugeElement, act
from .quivers import Doubled, FramingFn, double, frame
from .reps import Rep, RepError, add, compose_via_trace, scale, zero_triple
from .rings import Floats, Matrix, PrimeField, Ring
from .simplicial import SSet2, SimplicialError

MAX_VARIABLES = 10**5
CONVENTIONS = ("standard", "opposite")


@dataclass(frozen=True)
class Term:
    """``sign * scale * x_{path[1]} x_{path[0]}``: traverse ``path[0]`` then ``path[1]``."""

    sign: int
    path: tuple[str, str]
    scale: object = 1


@dataclass(frozen=True)
class MomentExpr:
    quiver: SSet2
    framing: FramingFn
    doubled: Doubled
    terms: Mapping[str, tuple[Term, ...]]
    convention: str = "standard"

    @property
    def shape(self) -> SSet2:
        return self.doubled.shape

    @property
    def vertices(self) -> list[str]:
        return list(self.terms)


def nakajima_quiver(I: SSet2, framed: Sequence[str] | None = None) -> tuple[SSet2, FramingFn]:
    """``I`` with a framing node glued at each vertex (or at ``framed`` only)."""
    return frame(I, framed)


def build_moment_map(Q: SSet2, f: FramingFn, convention: str = "standard") -> MomentExpr:
    """Assemble mu for the double of the (already framed) quiver ``Q``."""
    if Q.triangles:
        raise SimplicialError("moment maps are defined for quivers without 2-simplices")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    f.check_total(Q)
    d = double(Q)
    star = d.star
    flip = 1 if convention == "standard" else -1
    terms: dict[str, tuple[Term, ...]] = {}
    for v in f.regular():
        lst = []
        for e in Q.edges:
            if e.tgt == v:
                lst.append(Term(flip, (star[e.id], e.id)))
            if e.src == v:
                lst.append(Term(-flip, (e.id, star[e.id])))
        terms[v] = tuple(lst)
    return MomentExpr(Q, f, d, terms, convention)


def eval_moment(m: MomentExpr, r: Rep) -> dict[str, Matrix]:
    """Evaluate mu using only trace composition, scaling and addition."""
    if not r.shape.same_as(m.shape):
        raise RepError("representation is not on the doubled quiver of this moment map")
    out = {}
    for v, terms in m.terms.items():
        acc = zero_triple(r.ring, r.dims[v], r.dims[v])
        for t in terms:
            first, second = t.path
            c = compose_via_trace(r.triple(second), r.triple(first))
            acc = add(acc, scale(r.ring.coerce(t.sign) * r.ring.coerce(t.scale), c))
        out[v] = acc.mat
    return out


def trace_sum(m: MomentExpr, r: Rep):
    """Sum over vertices of tr(mu_v); identically zero without framing nodes."""
    total = r.ring.coerce(0)
    for mat in eval_moment(m, r).values():
        for i in range(mat.rows):
            total = total + mat.data[i, i]
    if isinstance(r.ring, PrimeField):
        total %= r.ring.p
    return total


def equivariance_check(m: MomentExpr, r: Rep, g: GaugeElement) -> float:
    """max_v || mu_v(g.r) - g_v mu_v(r) g_v^-1 ||."""
    before = eval_moment(m, r)
    after = eval_moment(m, act(g, r, m.framing))
    worst = 0.0
    for v in m.terms:
        gv = g.mats[v]
        expected = gv @ before[v] @ gv.inverse()
        worst = max(worst, after[v].distance(expected))
    return worst


# ---------------------------------------------------------------------------
# numerical solving


@dataclass(frozen=True)
class SolveConfig:
    levels: Mapping[str, float] = field(default_factory=dict)
    tol: float = 1e-10
    max_iter: int = 200
    seed: int = 0
    damping: float = 1e-3

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")


@dataclass(frozen=True)
class SolveResult:
    rep: Rep
    residual: float
    iterations: int
    converged: bool
    jacobian_rank: int
    seed: int

    def to_json(self) -> dict:
        return {
            "rep": self.rep.to_json(),
            "residual": float(self.residual),
            "iterations": self.iterations,
            "converged": self.converged,
            "jacobian_rank": self.jacobian_rank,
            "seed": self.seed,
        }


class _Layout:
    def __init__(self, m: MomentExpr, dims: Mapping[str, int]):
        self.m = m
        self.dims = dict(dims)
        shape = m.shape
        for v in shape.vertices:
            if v not in self.dims:
                raise RepError(f"no dimension given for vertex {v!r}")
        self.edges = sorted(e.id for e in shape.edges)
        self.offsets, self.shapes = {}, {}
        o = 0
        for eid in self.edges:
            e = shape.edge(eid)
            shp = (self.dims[e.tgt], self.dims[e.src])
            self.offsets[eid] = o
            self.shapes[eid] = shp
            o += shp[0] * shp[1]
        self.n_vars = o
        self.row_off, o = {}, 0
        for v in m.terms:
            self.row_off[v] = o
            o += self.dims[v] ** 2
        self.n_res = o

    def unpack(self, x: np.ndarray) -> dict[str, np.ndarray]:
        return {e: x[self.offsets[e] : self.offsets[e] + s[0] * s[1]].reshape(s) for e, s in self.shapes.items()}

    def moment(self, mats: Mapping[str, np.ndarray]) -> dict[str, np.ndarray]:
        out = {}
        for v, terms in self.m.terms.items():
            acc = np.zeros((self.dims[v], self.dims[v]))
            for t in terms:
                acc += t.sign * float(t.scale) * (mats[t.path[1]] @ mats[t.path[0]])
            out[v] = acc
        return out

    def residual(self, x: np.ndarray, levels: Mapping[str, float]) -> np.ndarray:
        mu = self.moment(self.unpack(x))
        parts = [(mu[v] - float(levels.get(v, 0.0)) * np.eye(self.dims[v])).reshape(-1) for v in self.m.terms]
        return np.concatenate(parts) if parts else np.zeros(0)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        mats = self.unpack(x)
        J = np.zeros((self.n_res, self.n_vars))
        for v, terms in self.m.terms.items():
            r0, dv = self.row_off[v], self.dims[v]
            rows = slice(r0, r0 + dv * dv)
            for t in terms:
                c = t.sign * float(t.scale)
                a, b = t.path  # term = X_b @ X_a
                Xa, Xb = mats[a], mats[b]
                # d(Xb Xa) = dXb Xa + Xb dXa, row-major vec(A dX B) = (A kron B^T) vec(dX)
                ob, sb = self.offsets[b], Xb.size
                oa, sa = self.offsets[a], Xa.size
                if sb:
                    J[rows, ob : ob + sb] += c * np.kron(np.eye(Xb.shape[0]), Xa.T)
                if sa:
                    J[rows, oa : oa + sa] += c * np.kron(Xb, np.eye(Xa.shape[1]))
        return J

    def max_block_residual(self, r: np.ndarray) -> float:
        worst = 0.0
        for v in self.m.terms:
            o, dv = self.row_off[v], self.dims[v]
            if dv:
                worst = max(worst, float(np.linalg.norm(r[o : o + dv * dv])))
        return worst

    def to_rep(self, x: np.ndarray, ring: Floats) -> Rep:
        mats = {e: Matrix(ring, a.copy()) for e, a in self.unpack(x).items()}
        return Rep(self.m.shape, self.dims, mats, ring)


def jacobian_rank(J: np.ndarray) -> int:
    if J.size == 0:
        return 0
    s = np.linalg.svd(J, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > 1e-8 * s[0]))


def solve_zero_locus(Q: SSet2, f: FramingFn, dims: Mapping[str, int], cfg: SolveConfig,
                     convention: str = "standard", tol_ring: float = 1e-9) -> SolveResult:
    """Levenberg-Marquardt on ``mu(r) - lambda Id`` from a seeded random start.

    Non-convergence is reported through ``converged=False`` with the best
    iterate, not raised.
    """
    m = build_moment_map(Q, f, convention)
    lay = _Layout(m, dims)
    if lay.n_vars > MAX_VARIABLES:
        raise RepError(f"{lay.n_vars} variables exceed the limit {MAX_VARIABLES}")
    rng = np.random.default_rng(cfg.seed)
    x = rng.standard_normal(lay.n_vars)
    r = lay.residual(x, cfg.levels)
    cost = float(r @ r)
    lam = cfg.damping
    it = 0
    converged = lay.max_block_residual(r) <= cfg.tol
    while not converged and it < cfg.max_iter:
        it += 1
        J = lay.jacobian(x)
        A = J.T @ J
        g = J.T @ r
        try:
            step = np.linalg.solve(A + lam * np.eye(lay.n_vars), -g)
        except np.linalg.LinAlgError:
            lam *= 10
            continue
        x_new = x + step
        r_new = lay.residual(x_new, cfg.levels)
        cost_new = float(r_new @ r_new)
        if cost_new < cost:
            x, r, cost = x_new, r_new, cost_new
            lam = max(lam / 10, 1e-15)
        else:
            lam *= 10
            if lam > 1e16:
                break
        converged = lay.max_block_residual(r) <= cfg.tol
    residual = lay.max_block_residual(r)
    rank = jacobian_rank(lay.jacobian(x))
    return SolveResult(lay.to_rep(x, Floats(tol_ring)), residual, it, residual <= cfg.tol, rank, cfg.seed)


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("QSTACK_THREADS", "1")))
    except ValueError:
        return 1


def solve_multistart(Q: SSet2, f: FramingFn, dims: Mapping[str, int], cfg: SolveConfig, starts: int,
                     convention: str = "standard") -> tuple[SolveResult, list[SolveResult]]:
    """Independent solves with seeds ``cfg.seed + k``; best by residual, then seed."""
    from dataclasses import replace

    cfgs = [replace(cfg, seed=cfg.seed + k) for k in range(starts)]
    run = lambda c: solve_zero_locus(Q, f, dims, c, convention)  # noqa: E731
    workers = min(_threads(), max(1, starts))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, cfgs))
    else:
        results = [run(c) for c in cfgs]
    best = min(results, key=lambda s: (not s.converged, s.residual, s.seed))
    return best, results


def random_doubled_rep(m: MomentExpr, dims: Mapping[str, int], ring: Ring, rng: np.random.Generator) -> Rep:
    mats = {}
    for e in m.shape.edges:
        mats[e.id] = Matrix.random(ring, rng, dims[e.tgt], dims[e.src])
    return Rep(m.shape, dict(dims), mats, ring)
