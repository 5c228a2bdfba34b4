"""Gauge action on representations and finite-field point counts.

The gauge group is the product of ``GL(d_v)`` over regular vertices; framing
vertices carry the identity.  An element acts on edge matrices by
``x_e -> g_tgt x_e g_src^-1``.  The stacky quotient is modelled by its action
groupoid: orbits with stabilizers, whose groupoid cardinality equals
``|Rep| / |G|``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .quivers import FramingFn, iso_edge, iso_inverse_edge, prime, composite_edge, tilde_layout
from .reps import ENUMERATION_LIMIT, EnumerationGuardError, Rep, RepError, count_reps, enumerate_reps, validate_rep
from .rings import Matrix, PrimeField, Ring, RingError, all_matrices, gl_order
from .simplicial import SSet2


@dataclass(frozen=True, eq=False)
class GaugeElement:
    ring: Ring
    mats: Mapping[str, Matrix]

    @classmethod
    def identity(cls, ring: Ring, dims: Mapping[str, int], f: FramingFn) -> "GaugeElement":
        return cls(ring, {v: Matrix.identity(ring, dims[v]) for v in f.regular()})

    def __matmul__(self, other: "GaugeElement") -> "GaugeElement":
        return GaugeElement(self.ring, {v: self.mats[v] @ other.mats[v] for v in self.mats})

    def inverse(self) -> "GaugeElement":
        return GaugeElement(self.ring, {v: m.inverse() for v, m in self.mats.items()})

    def key(self) -> tuple:
        return tuple((v, self.mats[v].key()) for v in sorted(self.mats))

    def __eq__(self, other) -> bool:
        return isinstance(other, GaugeElement) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def at(self, v: str, dims: Mapping[str, int]) -> Matrix:
        if v in self.mats:
            return self.mats[v]
        return Matrix.identity(self.ring, dims[v])


def _check_gauge(g: GaugeElement, r: Rep, f: FramingFn) -> None:
    for v in f.regular():
        if v not in g.mats:
            raise RepError(f"gauge element missing regular vertex {v!r}")
        if g.mats[v].shape != (r.dims[v], r.dims[v]):
            raise RepError(f"gauge matrix at {v!r} has shape {g.mats[v].shape}, expected {(r.dims[v],) * 2}")
    extra = set(g.mats) - set(f.regular())
    if extra:
        raise RepError(f"gauge element has entries at non-regular vertices {sorted(extra)}")


def act(g: GaugeElement, r: Rep, f: FramingFn) -> Rep:
    _check_gauge(g, r, f)
    inv = {}
    for v, m in g.mats.items():
        try:
            inv[v] = m.inverse()
        except RingError:
            raise RepError(f"gauge matrix at {v!r} is singular") from None
    mats = {}
    for e in r.shape.edges:
        x = r.mats[e.id]
        if e.tgt in g.mats:
            x = g.mats[e.tgt] @ x
        if e.src in inv:
            x = x @ inv[e.src]
        mats[e.id] = x
    return Rep(r.shape, r.dims, mats, r.ring)


def gauge_group(field: PrimeField, dims: Mapping[str, int], f: FramingFn) -> Iterator[GaugeElement]:
    """Every element of prod_{regular v} GL(d_v, F_p)."""
    regular = f.regular()
    factors = [[m for m in all_matrices(field, dims[v], dims[v]) if m.is_invertible()] for v in regular]
    for combo in itertools.product(*factors):
        yield GaugeElement(field, dict(zip(regular, combo)))


def gauge_order(field: PrimeField, dims: Mapping[str, int], f: FramingFn) -> int:
    out = 1
    for v in f.regular():
        out *= gl_order(int(dims[v]), field.p)
    return out


# ---------------------------------------------------------------------------
# tilde encoding of (g, rho, psi)


def tilde_dims(dims: Mapping[str, int], f: FramingFn) -> dict[str, int]:
    out = dict(dims)
    for v in f.regular():
        out[prime(v)] = dims[v]
    return out


def tilde_encode(g: GaugeElement, rho: Rep, f: FramingFn) -> Rep:
    layout = tilde_layout(rho.shape, f)
    psi = act(g, rho, f)
    ring = rho.ring
    mats = {}
    for v in f.regular():
        mats[iso_edge(v)] = g.mats[v]
        mats[iso_inverse_edge(v)] = g.mats[v].inverse()
        mats[f"id_{v}"] = Matrix.identity(ring, rho.dims[v])
        mats[f"id_{prime(v)}"] = Matrix.identity(ring, rho.dims[v])
    for eid in layout.single_edges:
        mats[eid] = rho.mats[eid]
    for eid in layout.doubled_edges:
        e = rho.shape.edge(eid)
        mats[eid] = rho.mats[eid]
        mats[prime(eid)] = psi.mats[eid]
        if not f.is_framing(e.src) and not f.is_framing(e.tgt):
            mats[composite_edge(e.tgt, eid)] = g.mats[e.tgt] @ rho.mats[eid]
    return Rep(layout.shape, tilde_dims(rho.dims, f), mats, ring)


def tilde_decode(t: Rep, I: SSet2, f: FramingFn, tol: float | None = None) -> tuple[GaugeElement, Rep, Rep]:
    """Recover ``(g, rho, psi)`` from a representation of ``tilde(I, f)``."""
    layout = tilde_layout(I, f)
    if not t.shape.same_as(layout.shape):
        raise RepError("representation is not on tilde(I, f)")
    problems = validate_rep(t, tol)
    if problems:
        raise RepError("invalid representation of tilde: " + "; ".join(problems))
    dims = {v: t.dims[v] for v in I.vertices}
    g = GaugeElement(t.ring, {v: t.mats[iso_edge(v)] for v in f.regular()})
    rho = Rep(I, dims, {e.id: t.mats[e.id] for e in I.edges}, t.ring)
    psi_mats = {}
    for e in I.edges:
        psi_mats[e.id] = t.mats[prime(e.id)] if e.id in layout.doubled_edges else t.mats[e.id]
    psi = Rep(I, dims, psi_mats, t.ring)
    return g, rho, psi


# ---------------------------------------------------------------------------
# counting


@dataclass(frozen=True)
class Orbit:
    representative: Rep
    size: int
    stabilizer_order: int


@dataclass(frozen=True)
class CountReport:
    shape_id: str
    dims: Mapping[str, int]
    p: int
    rep_count: int
    gauge_order: int
    stacky_count: Fraction
    orbit_count: int | None = None
    orbits: tuple[Orbit, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.stacky_count != Fraction(self.rep_count, self.gauge_order):
            raise ValueError("stacky count must equal rep_count / gauge_order")

    def to_json(self) -> dict:
        out = {
            "shape_id": self.shape_id,
            "dims": {v: int(self.dims[v]) for v in sorted(self.dims)},
            "p": self.p,
            "rep_count": str(self.rep_count),
            "gauge_order": str(self.gauge_order),
            "stacky_count": f"{self.stacky_count.numerator}/{self.stacky_count.denominator}",
        }
        if self.orbit_count is not None:
            out["orbit_count"] = str(self.orbit_count)
            out["stabilizer_orders"] = [str(o.stabilizer_order) for o in self.orbits]
        return out


def shape_id(shape: SSet2) -> str:
    import hashlib

    return hashlib.sha256(shape.dumps().encode()).hexdigest()[:16]


def count_points(shape: SSet2, dims: Mapping[str, int], p: int, f: FramingFn | None = None) -> CountReport:
    field_ = PrimeField(p)
    f = f or FramingFn.all_regular(shape)
    f.check_total(shape)
    n = count_reps(shape, dims, field_)
    order = gauge_order(field_, dims, f)
    return CountReport(shape_id(shape), dict(dims), p, n, order, Fraction(n, order))


def orbit_census(shape: SSet2, dims: Mapping[str, int], p: int, f: FramingFn | None = None) -> CountReport:
    """Orbits of the gauge action with exact stabilizer orders."""
    field_ = PrimeField(p)
    f = f or FramingFn.all_regular(shape)
    f.check_total(shape)
    stream = enumerate_reps(shape, dims, field_)
    order = gauge_order(field_, dims, f)
    if stream.count * order > ENUMERATION_LIMIT:
        raise EnumerationGuardError(f"|Rep|*|G| = {stream.count * order} exceeds the limit 2^24")
    group = list(gauge_group(field_, dims, f))
    if len(group) != order:
        raise AssertionError("gauge group enumeration disagrees with the closed-form order")
    seen: set = set()
    orbits = []
    for r in stream:
        k = r.key()
        if k in seen:
            continue
        images = {}
        stab = 0
        for g in group:
            img = act(g, r, f)
            ik = img.key()
            images.setdefault(ik, img)
            if ik == k:
                stab += 1
        seen.update(images)
        if len(images) * stab != order:
            raise AssertionError("orbit-stabilizer relation violated")
        orbits.append(Orbit(r, len(images), stab))
    total = sum(o.size for o in orbits)
    if total != stream.count:
        raise AssertionError(f"orbits cover {total} reps, expected {stream.count}")
    stacky = sum((Fraction(1, o.stabilizer_order) for o in orbits), Fraction(0))
    return CountReport(shape_id(shape), dict(dims), p, stream.count, order, stacky, len(orbits), tuple(orbits))
