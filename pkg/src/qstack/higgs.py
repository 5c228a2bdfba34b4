"""K-twisted Higgs data over a point.

With ``K = k^m`` and a fixed basis, a Higgs field on ``V = k^n`` is a list
of ``m`` square matrices ``phi_1..phi_m``.  Flattening convention: ``V (x) K``
has the ``K`` index running fastest, so ``phi`` stacks to the ``nm x n``
matrix whose row ``i*m + k`` is row ``i`` of ``phi_k``.  ``Lambda^2 K`` has
basis ``e_i ^ e_j`` for ``i < j`` in lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .quivers import higgs_shape
from .reps import Rep, RepError, Triple, tensor1, triple_e, validate_rep
from .rings import Matrix, Ring, ring_from_json
from .simplicial import square


@dataclass(frozen=True, eq=False)
class HiggsDatum:
    n: int
    m: int
    phi: tuple[Matrix, ...]

    def __post_init__(self):
        if len(self.phi) != self.m:
            raise RepError(f"expected {self.m} Higgs components, got {len(self.phi)}")
        for k, p in enumerate(self.phi):
            if p.shape != (self.n, self.n):
                raise RepError(f"component {k} has shape {p.shape}, expected {(self.n, self.n)}")

    @classmethod
    def of(cls, ring: Ring, phi: Sequence[Sequence[Sequence]], n: int | None = None) -> "HiggsDatum":
        if n is None:
            n = len(phi[0]) if phi else 0
        mats = tuple(Matrix.of(ring, p, (n, n)) for p in phi)
        return cls(n, len(mats), mats)

    @property
    def ring(self) -> Ring:
        if not self.phi:
            raise RepError("a Higgs datum with m = 0 has no ring")
        return self.phi[0].ring

    def stacked(self) -> Matrix:
        """phi as a map ``V -> V (x) K``."""
        ring = self.ring
        out = ring.zeros(self.n * self.m, self.n)
        for k, p in enumerate(self.phi):
            out[k :: self.m] = p.data
        return Matrix(ring, out)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "ring": self.ring.to_json(),
            "phi": [p.to_json() for p in self.phi],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "HiggsDatum":
        ring = ring_from_json(obj.get("ring", {"ring": "Q"}))
        n, m = int(obj["n"]), int(obj["m"])
        phi = tuple(Matrix.from_json(ring, p, (n, n)) for p in obj["phi"])
        return cls(n, m, phi)


def wedge_matrix(ring: Ring, m: int) -> Matrix:
    """``K (x) K -> Lambda^2 K``: e_i(x)e_j -> e_i^e_j (i<j), -e_j^e_i (i>j), 0 (i=j)."""
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    index = {pr: q for q, pr in enumerate(pairs)}
    out = ring.zeros(len(pairs), m * m)
    for i in range(m):
        for j in range(m):
            if i < j:
                out[index[(i, j)], i * m + j] = ring.coerce(1)
            elif i > j:
                out[index[(j, i)], i * m + j] = ring.coerce(-1)
    return Matrix(ring, ring.normalize(out))


def higgs_dims(n: int, m: int) -> dict[str, int]:
    return {"a": n, "b": n * m, "c": n * m * m, "d": n * (m * (m - 1) // 2), "b'": 0}


def higgs_to_diagram(h: HiggsDatum) -> Rep:
    """The representation of the Higgs shape determined by ``h``.

    ``e_bc = phi (x) id_K`` and ``e_cd = id_E (x) wedge``; the composite edges
    are filled along the ``b'`` route (zero), so the diagram validates exactly
    when ``h`` is integrable.
    """
    ring = h.ring
    dims = higgs_dims(h.n, h.m)
    e_ab = h.stacked()
    e_bc = e_ab.kron(Matrix.identity(ring, h.m))
    e_cd = Matrix.identity(ring, h.n).kron(wedge_matrix(ring, h.m))
    mats = {
        "e_ab": e_ab,
        "e_bc": e_bc,
        "e_cd": e_cd,
        "e_ab'": Matrix.zeros(ring, 0, h.n),
        "e_b'd": Matrix.zeros(ring, dims["d"], 0),
        "e_ac": e_bc @ e_ab,
        "e_ad": Matrix.zeros(ring, dims["d"], h.n),
    }
    return Rep(higgs_shape().shape, dims, mats, ring)


def integrability_check(h: HiggsDatum, tol: float | None = None) -> bool:
    """All components pairwise commute."""
    for i in range(h.m):
        for j in range(i + 1, h.m):
            comm = h.phi[i] @ h.phi[j] - h.phi[j] @ h.phi[i]
            if not comm.is_zero(tol):
                return False
    return True


def diagram_integrable(h: HiggsDatum, tol: float | None = None) -> bool:
    return not validate_rep(higgs_to_diagram(h), tol)


def tensor_consistency(h: HiggsDatum) -> bool:
    """``e_bc`` equals ``tensor1(e_ab, e(m))`` in the fixed basis ordering."""
    rep = higgs_to_diagram(h)
    t = tensor1(rep.triple("e_ab"), triple_e(h.ring, h.m))
    return t.mat == rep.mats["e_bc"]


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class HiggsMorphismDatum:
    source: HiggsDatum
    target: HiggsDatum
    f: Matrix

    def __post_init__(self):
        if self.source.m != self.target.m:
            raise RepError(f"twist ranks differ: {self.source.m} vs {self.target.m}")
        if self.f.shape != (self.target.n, self.source.n):
            raise RepError(f"morphism matrix has shape {self.f.shape}, expected {(self.target.n, self.source.n)}")


def higgs_morphism_check(d: HiggsMorphismDatum, tol: float | None = None) -> bool:
    """``f phi_i = psi_i f`` for every component."""
    for p, q in zip(d.source.phi, d.target.phi):
        if not (d.f @ p).equals(q @ d.f, tol):
            return False
    return True


def morphism_square(d: HiggsMorphismDatum) -> Rep:
    """The square ``u = phi, v = f, w = f (x) id_K, y = psi`` with its diagonal ``w u``."""
    ring = d.f.ring
    m = d.source.m
    u = d.source.stacked()
    w = d.f.kron(Matrix.identity(ring, m))
    dims = {"a": d.source.n, "b": d.source.n * m, "c": d.target.n, "d": d.target.n * m}
    mats = {"u": u, "v": d.f, "w": w, "y": d.target.stacked(), "diag": w @ u}
    return Rep(square(), dims, mats, ring)


def higgs_identity(h: HiggsDatum) -> HiggsMorphismDatum:
    return HiggsMorphismDatum(h, h, Matrix.identity(h.ring, h.n))


def higgs_source(d: HiggsMorphismDatum) -> HiggsDatum:
    return d.source


def higgs_target(d: HiggsMorphismDatum) -> HiggsDatum:
    return d.target


def _same_datum(a: HiggsDatum, b: HiggsDatum) -> bool:
    return a.n == b.n and a.m == b.m and all(x == y for x, y in zip(a.phi, b.phi))


def compose_higgs_morphisms(g: HiggsMorphismDatum, f: HiggsMorphismDatum) -> HiggsMorphismDatum:
    if not _same_datum(f.target, g.source):
        raise RepError("target of the first morphism is not the source of the second")
    return HiggsMorphismDatum(f.source, g.target, g.f @ f.f)


def polynomial_in(phi: Matrix, coeffs: Sequence) -> Matrix:
    """``sum_k c_k phi^k`` (Horner)."""
    n = phi.rows
    acc = Matrix.zeros(phi.ring, n, n)
    for c in reversed(list(coeffs)):
        acc = acc @ phi + Matrix.identity(phi.ring, n).scale(c)
    return acc


def as_triple(d: HiggsMorphismDatum) -> Triple:
    return Triple.of(d.f)


def random_commuting(ring: Ring, rng: np.random.Generator, n: int, m: int, degree: int = 2) -> HiggsDatum:
    """Integrable datum: every component is a polynomial in one random matrix."""
    base = Matrix.random(ring, rng, n, n)
    phi = []
    for _ in range(m):
        coeffs = [ring.coerce(int(c)) for c in rng.integers(-3, 4, size=degree + 1)]
        phi.append(polynomial_in(base, coeffs))
    return HiggsDatum(n, m, tuple(phi))
