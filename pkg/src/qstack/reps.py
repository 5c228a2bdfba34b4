"""Matrix representations of 2-truncated simplicial sets.

A :class:`Rep` assigns a dimension to each vertex and a matrix to each edge;
it is valid when identity edges carry identities and every triangle
commutes.  Over a point, these are exactly the field-valued points of the
moduli of quiver bundles of the given shape.

Also here: arrow-level operations on :class:`Triple` (composition through the
trace pairing, units, direct sum, scaling, sum, tensor product), simplicial
functoriality on chains, and brute-force enumeration over ``F_p``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import kernels
from ._pykernels import _mul_flat
from .rings import Floats, Matrix, PrimeField, Ring, RingError
from .simplicial import SSet2, SimplicialError, one_skeleton, simplex_edge_id, standard_simplex, validate

ENUMERATION_LIMIT = 2**24


class RepError(ValueError):
    pass


class EnumerationGuardError(RepError):
    pass


# ---------------------------------------------------------------------------
# Triples: a single arrow (source dim, target dim, matrix)


@dataclass(frozen=True, eq=False)
class Triple:
    src_dim: int
    tgt_dim: int
    mat: Matrix

    def __post_init__(self):
        if self.mat.shape != (self.tgt_dim, self.src_dim):
            raise RepError(f"matrix shape {self.mat.shape} does not match {self.tgt_dim}x{self.src_dim}")

    @classmethod
    def of(cls, mat: Matrix) -> "Triple":
        return cls(mat.cols, mat.rows, mat)

    @property
    def ring(self) -> Ring:
        return self.mat.ring

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Triple)
            and (self.src_dim, self.tgt_dim) == (other.src_dim, other.tgt_dim)
            and self.mat == other.mat
        )

    def __hash__(self) -> int:
        return hash((self.src_dim, self.tgt_dim, self.mat.key()))

    def equals(self, other: "Triple", tol: float | None = None) -> bool:
        return (self.src_dim, self.tgt_dim) == (other.src_dim, other.tgt_dim) and self.mat.equals(other.mat, tol)


def compose_via_trace(g: Triple, f: Triple) -> Triple:
    """Composite ``g . f`` computed by contracting ``U* (x) V (x) V* (x) W``.

    ``f: U -> V`` and ``g: V -> W`` are placed in one 4-tensor and the middle
    ``V (x) V*`` pair is evaluated with the trace pairing.
    """
    if f.tgt_dim != g.src_dim:
        raise RepError(f"cannot compose: target {f.tgt_dim} != source {g.src_dim}")
    ring = f.ring
    if g.ring != ring:
        raise RingError("ring mismatch")
    U, V, W = f.src_dim, f.tgt_dim, g.tgt_dim
    if U == 0 or V == 0 or W == 0:
        return Triple(U, W, Matrix.zeros(ring, W, U))
    # tensor[u, v, v', w] = f[v, u] * g[w, v']
    tensor = np.multiply.outer(f.mat.data.T, g.mat.data.T)
    contracted = np.trace(tensor, axis1=1, axis2=2)  # (U, W)
    return Triple(U, W, Matrix(ring, ring.normalize(np.ascontiguousarray(contracted.T))))


def triple_s(t: Triple) -> int:
    return t.src_dim


def triple_t(t: Triple) -> int:
    return t.tgt_dim


def triple_e(ring: Ring, n: int) -> Triple:
    return Triple(n, n, Matrix.identity(ring, n))


def triple_c(g: Triple, f: Triple) -> Triple:
    return compose_via_trace(g, f)


def zero_triple(ring: Ring, src: int, tgt: int) -> Triple:
    return Triple(src, tgt, Matrix.zeros(ring, tgt, src))


def oplus1(a: Triple, b: Triple) -> Triple:
    return Triple(a.src_dim + b.src_dim, a.tgt_dim + b.tgt_dim, a.mat.block_diag(b.mat))


def scale(lam, t: Triple) -> Triple:
    if isinstance(lam, Matrix):
        raise RingError("scale expects a scalar")
    if t.ring.exact and isinstance(lam, float) and not float(lam).is_integer():
        raise RingError(f"scalar {lam!r} is not in {t.ring.name}")
    return Triple(t.src_dim, t.tgt_dim, t.mat.scale(lam))


def add(a: Triple, b: Triple) -> Triple:
    if (a.src_dim, a.tgt_dim) != (b.src_dim, b.tgt_dim):
        raise RepError(f"cannot add {a.tgt_dim}x{a.src_dim} and {b.tgt_dim}x{b.src_dim}")
    return Triple(a.src_dim, a.tgt_dim, a.mat + b.mat)


def tensor0(m: int, n: int) -> int:
    return m * n


def tensor1(a: Triple, b: Triple) -> Triple:
    """Kronecker product; the second factor's index runs fastest."""
    return Triple(tensor0(a.src_dim, b.src_dim), tensor0(a.tgt_dim, b.tgt_dim), a.mat.kron(b.mat))


# ---------------------------------------------------------------------------
# Representations


@dataclass(frozen=True, eq=False)
class Rep:
    shape: SSet2
    dims: Mapping[str, int]
    mats: Mapping[str, Matrix]
    ring: Ring

    def mat(self, eid: str) -> Matrix:
        return self.mats[eid]

    def triple(self, eid: str) -> Triple:
        e = self.shape.edge(eid)
        return Triple(self.dims[e.src], self.dims[e.tgt], self.mats[eid])

    def key(self) -> tuple:
        return tuple((e, self.mats[e].key()) for e in sorted(self.mats))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Rep)
            and self.shape.same_as(other.shape)
            and dict(self.dims) == dict(other.dims)
            and self.ring == other.ring
            and self.key() == other.key()
        )

    def __hash__(self) -> int:
        return hash(self.key())

    def replace(self, **mats: Matrix) -> "Rep":
        new = dict(self.mats)
        new.update(mats)
        return Rep(self.shape, self.dims, new, self.ring)

    def to_json(self, shape_ref: str | None = None) -> dict:
        return {
            "shape_ref": shape_ref if shape_ref is not None else self.shape.dumps(),
            "ring": self.ring.to_json(),
            "dims": {v: int(self.dims[v]) for v in sorted(self.dims)},
            "mats": {e: self.mats[e].to_json() for e in sorted(self.mats)},
        }

    @classmethod
    def from_json(cls, obj: Mapping, shape: SSet2 | None = None) -> "Rep":
        from .rings import ring_from_json

        ring = ring_from_json(obj["ring"])
        if shape is None:
            shape = SSet2.loads(obj["shape_ref"])
        dims = {v: int(d) for v, d in obj["dims"].items()}
        mats = {}
        for e in shape.edges:
            mats[e.id] = Matrix.from_json(ring, obj["mats"][e.id], (dims[e.tgt], dims[e.src]))
        return cls(shape, dims, mats, ring)


def make_rep(shape: SSet2, dims: Mapping[str, int], mats: Mapping[str, Matrix | Sequence], ring: Ring) -> Rep:
    """Build a Rep, coercing nested lists and filling identity edges."""
    out = {}
    for e in shape.edges:
        shp = (dims[e.tgt], dims[e.src])
        if e.id in mats:
            m = mats[e.id]
            out[e.id] = m if isinstance(m, Matrix) else Matrix.of(ring, m, shp)
        elif e.identity:
            out[e.id] = Matrix.identity(ring, dims[e.src])
        else:
            raise RepError(f"no matrix given for edge {e.id!r}")
    return Rep(shape, dict(dims), out, ring)


def zero_rep(shape: SSet2, dims: Mapping[str, int], ring: Ring) -> Rep:
    mats = {}
    for e in shape.edges:
        mats[e.id] = (
            Matrix.identity(ring, dims[e.src]) if e.identity else Matrix.zeros(ring, dims[e.tgt], dims[e.src])
        )
    return Rep(shape, dict(dims), mats, ring)


def validate_rep(r: Rep, tol: float | None = None) -> list[str]:
    """Diagnostics for every violated invariant of ``r`` (empty when valid).

    Float triangles are accepted when the Frobenius residual is ``<= tol``
    (default: the ring's tolerance); exact rings compare exactly.
    """
    out = [f"shape: {p}" for p in validate(r.shape)]
    if out:
        return out
    if tol is None:
        tol = r.ring.tol if isinstance(r.ring, Floats) else 0.0
    for v in r.shape.vertices:
        d = r.dims.get(v)
        if not isinstance(d, (int, np.integer)) or d < 0:
            out.append(f"vertex {v!r}: invalid dimension {d!r}")
    if out:
        return out
    for e in r.shape.edges:
        m = r.mats.get(e.id)
        want = (r.dims[e.tgt], r.dims[e.src])
        if m is None:
            out.append(f"edge {e.id!r}: missing matrix")
        elif m.ring != r.ring:
            out.append(f"edge {e.id!r}: matrix over {m.ring.name}, expected {r.ring.name}")
        elif m.shape != want:
            out.append(f"edge {e.id!r}: shape {m.shape}, expected {want}")
        elif e.identity and not _close(m, Matrix.identity(r.ring, want[0]), tol):
            out.append(f"edge {e.id!r}: identity edge does not carry the identity")
    if out:
        return out
    for t in r.shape.triangles:
        prod = r.mats[t.second] @ r.mats[t.first]
        if not _close(prod, r.mats[t.long], tol):
            out.append(f"triangle {t.id!r}: {t.second} . {t.first} != {t.long} (residual {prod.distance(r.mats[t.long]):.3g})")
    return out


def _close(a: Matrix, b: Matrix, tol: float) -> bool:
    if a.ring.exact:
        return a == b
    return a.shape == b.shape and a.distance(b) <= tol


def triangle_residuals(r: Rep) -> dict[str, float]:
    return {t.id: (r.mats[t.second] @ r.mats[t.first]).distance(r.mats[t.long]) for t in r.shape.triangles}


# ---------------------------------------------------------------------------
# Chains: representations of standard simplices and their 1-skeleta


def chain_dimension(r: Rep) -> int:
    n = len(r.shape.vertices) - 1
    full, skel = standard_simplex(n), one_skeleton(n)
    if r.shape.same_as(full) or r.shape.same_as(skel):
        return n
    raise RepError("expected a representation of a standard simplex or its 1-skeleton")


def forward_chain(ring: Ring, spine: Sequence[Matrix], skeleton: bool = False) -> Rep:
    """The unique valid rep of Delta^n with the given consecutive arrows."""
    n = len(spine)
    dims = {}
    for i, m in enumerate(spine):
        dims[str(i)] = m.cols
        dims[str(i + 1)] = m.rows
        if i and spine[i - 1].rows != m.cols:
            raise RepError(f"spine arrows {i - 1} and {i} are not composable")
    if n == 0:
        raise RepError("use a one-vertex shape for an empty chain")
    mats = {}
    for i in range(n + 1):
        acc = None
        for j in range(i + 1, n + 1):
            acc = spine[j - 1] if acc is None else spine[j - 1] @ acc
            mats[simplex_edge_id(i, j)] = acc
    shape = one_skeleton(n) if skeleton else standard_simplex(n)
    return Rep(shape, dims, mats, ring)


def _spine_composite(r: Rep, a: int, b: int) -> Matrix:
    if a == b:
        return Matrix.identity(r.ring, r.dims[str(a)])
    acc = r.mats[simplex_edge_id(a, a + 1)]
    for k in range(a + 1, b):
        acc = r.mats[simplex_edge_id(k, k + 1)] @ acc
    return acc


def pullback_along(theta: Sequence[int], r: Rep) -> Rep:
    """Chain functoriality: output arrow ``(i, j)`` is the composite of the
    input spine from ``theta(i)`` to ``theta(j)`` (an identity when equal)."""
    n = chain_dimension(r)
    m = len(theta) - 1
    if m < 0 or any(theta[i] > theta[i + 1] for i in range(m)) or theta[0] < 0 or theta[-1] > n:
        raise RepError(f"{list(theta)} is not a monotone map into [{n}]")
    skeleton = not r.shape.triangles
    shape = one_skeleton(m) if skeleton else standard_simplex(m)
    dims = {str(i): r.dims[str(theta[i])] for i in range(m + 1)}
    mats = {}
    for i, j in itertools.combinations(range(m + 1), 2):
        mats[simplex_edge_id(i, j)] = _spine_composite(r, theta[i], theta[j])
    return Rep(shape, dims, mats, r.ring)


def restrict_along(iota: Sequence[int], r: Rep) -> Rep:
    """Compose subchains prescribed by a strictly monotone ``iota: [m] -> [n]``."""
    if any(iota[i] >= iota[i + 1] for i in range(len(iota) - 1)):
        raise RepError(f"{list(iota)} is not strictly monotone")
    return pullback_along(iota, r)


def degenerate_along(sigma: Sequence[int], r: Rep) -> Rep:
    """Insert identities as prescribed by a monotone surjection ``sigma: [q] -> [n]``."""
    n = chain_dimension(r)
    if any(sigma[i] > sigma[i + 1] for i in range(len(sigma) - 1)) or sorted(set(sigma)) != list(range(n + 1)):
        raise RepError(f"{list(sigma)} is not a monotone surjection onto [{n}]")
    return pullback_along(sigma, r)


def compose_maps(first: Sequence[int], second: Sequence[int]) -> list[int]:
    """``second . first`` for monotone maps given as value lists."""
    return [second[x] for x in first]


def check_chain_coherence(r: Rep, tol: float | None = None) -> bool:
    """Every iterated composite along a subset ``S`` agrees with the direct
    edge from ``min S`` to ``max S``."""
    n = chain_dimension(r)
    if not r.shape.triangles:
        raise RepError("coherence is checked on standard simplices, not 1-skeleta")
    if n > 8:
        raise RepError("coherence check supports n <= 8")
    if tol is None:
        tol = r.ring.tol if isinstance(r.ring, Floats) else 0.0
    for size in range(2, n + 2):
        for S in itertools.combinations(range(n + 1), size):
            acc = r.mats[simplex_edge_id(S[0], S[1])]
            for a, b in zip(S[1:], S[2:]):
                acc = r.mats[simplex_edge_id(a, b)] @ acc
            if not _close(acc, r.mats[simplex_edge_id(S[0], S[-1])], tol):
                return False
    return True


# ---------------------------------------------------------------------------
# Constraint compilation and enumeration over F_p


@dataclass(frozen=True)
class ConstraintSystem:
    """Edges in a fixed search order with flat entry offsets.

    ``kind`` is 0 for a free edge, 1 for an identity edge and 2 for an edge
    forced as ``M[force_second] @ M[force_first]``; ``checks[k]`` lists the
    triangles (first, second, long positions) verified once edge ``k`` is set.
    """

    shape: SSet2
    dims: Mapping[str, int]
    order: tuple[str, ...]
    offsets: tuple[int, ...]
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    kind: tuple[int, ...]
    force_first: tuple[int, ...]
    force_second: tuple[int, ...]
    checks: tuple[tuple[tuple[int, int, int], ...], ...]
    total_entries: int

    @property
    def free_entries(self) -> int:
        return sum(r * c for r, c, k in zip(self.rows, self.cols, self.kind) if k == 0)

    def kernel_args(self):
        chk_ptr = [0]
        cf, cs, cl = [], [], []
        for lst in self.checks:
            for f, s, lg in lst:
                cf.append(f)
                cs.append(s)
                cl.append(lg)
            chk_ptr.append(len(cf))
        return (
            list(self.offsets), list(self.rows), list(self.cols), list(self.kind),
            list(self.force_first), list(self.force_second), chk_ptr, cf, cs, cl, self.total_entries,
        )


def _search_order(shape: SSet2) -> list[str]:
    placed: set[str] = set()
    remaining = sorted(e.id for e in shape.edges)
    longs = {t.long for t in shape.triangles}
    order = []
    while remaining:
        pick = None
        for eid in remaining:
            if shape.edge(eid).identity:
                pick = eid
                break
        if pick is None:
            for t in shape.triangles:
                if t.long in remaining and t.first in placed and t.second in placed:
                    pick = t.long
                    break
        if pick is None:
            non_long = [e for e in remaining if e not in longs]
            pick = non_long[0] if non_long else remaining[0]
        order.append(pick)
        placed.add(pick)
        remaining.remove(pick)
    return order


def compile_constraints(shape: SSet2, dims: Mapping[str, int], order: Sequence[str] | None = None) -> ConstraintSystem:
    problems = validate(shape)
    if problems:
        raise SimplicialError("; ".join(problems))
    for v in shape.vertices:
        if v not in dims:
            raise RepError(f"no dimension given for vertex {v!r}")
        if int(dims[v]) < 0:
            raise RepError(f"negative dimension at {v!r}")
    order = list(order) if order is not None else sorted(e.id for e in shape.edges)
    if sorted(order) != sorted(e.id for e in shape.edges):
        raise RepError("order must list every edge once")
    pos = {eid: k for k, eid in enumerate(order)}
    offs, rows, cols, kind, ff, fs = [], [], [], [], [], []
    o = 0
    forcing: dict[int, str] = {}
    for k, eid in enumerate(order):
        e = shape.edge(eid)
        r, c = int(dims[e.tgt]), int(dims[e.src])
        offs.append(o)
        rows.append(r)
        cols.append(c)
        o += r * c
        f1 = f2 = -1
        if e.identity:
            kd = 1
        else:
            kd = 0
            for t in shape.triangles:
                if t.long == eid and pos[t.first] < k and pos[t.second] < k:
                    kd, f1, f2 = 2, pos[t.first], pos[t.second]
                    forcing[k] = t.id
                    break
        kind.append(kd)
        ff.append(f1)
        fs.append(f2)
    checks: list[list[tuple[int, int, int]]] = [[] for _ in order]
    for t in shape.triangles:
        k = max(pos[t.first], pos[t.second], pos[t.long])
        if forcing.get(k) == t.id:
            continue
        checks[k].append((pos[t.first], pos[t.second], pos[t.long]))
    return ConstraintSystem(
        shape, dict(dims), tuple(order), tuple(offs), tuple(rows), tuple(cols), tuple(kind),
        tuple(ff), tuple(fs), tuple(tuple(c) for c in checks), o,
    )


def _guard(system: ConstraintSystem, field: PrimeField) -> None:
    if field.p ** system.total_entries > ENUMERATION_LIMIT:
        raise EnumerationGuardError(
            f"{field.p}^{system.total_entries} assignments exceed the enumeration limit 2^24; "
            "reduce the dimension vector or use a smaller field"
        )


def count_reps(shape: SSet2, dims: Mapping[str, int], field: PrimeField) -> int:
    """Exact number of F_p-points, counted by the compiled kernel."""
    _guard(compile_constraints(shape, dims), field)
    system = compile_constraints(shape, dims, _search_order(shape))
    return kernels.count_solutions(*system.kernel_args(), field.p)


class RepEnumeration:
    """Lazy, single-consumer stream of every valid rep, in lexicographic order
    (edges sorted by id, entries row-major); ``count`` is exact."""

    def __init__(self, shape: SSet2, dims: Mapping[str, int], field: PrimeField):
        self.shape = shape
        self.dims = dict(dims)
        self.field = field
        self.system = compile_constraints(shape, dims)
        _guard(self.system, field)
        self._count: int | None = None

    @property
    def count(self) -> int:
        if self._count is None:
            self._count = count_reps(self.shape, self.dims, self.field)
        return self._count

    def __iter__(self) -> Iterator[Rep]:
        for vals in self.assignments():
            yield self._to_rep(vals)

    def assignments(self) -> Iterator[list[int]]:
        sy, p = self.system, self.field.p
        n = len(sy.order)
        vals = [0] * sy.total_entries

        def place(k, entries) -> bool:
            o = sy.offsets[k]
            vals[o : o + len(entries)] = entries
            for f, s, lg in sy.checks[k]:
                prod = _mul_flat(vals, sy.offsets[s], sy.rows[s], sy.cols[s], vals, sy.offsets[f], sy.cols[f], p)
                o2 = sy.offsets[lg]
                if prod != vals[o2 : o2 + len(prod)]:
                    return False
            return True

        def rec(k):
            if k == n:
                yield list(vals)
                return
            r, c = sy.rows[k], sy.cols[k]
            if sy.kind[k] == 1:
                if place(k, [1 if i == j else 0 for i in range(r) for j in range(c)]):
                    yield from rec(k + 1)
            elif sy.kind[k] == 2:
                f, s = sy.force_first[k], sy.force_second[k]
                if place(k, _mul_flat(vals, sy.offsets[s], sy.rows[s], sy.cols[s], vals, sy.offsets[f], sy.cols[f], p)):
                    yield from rec(k + 1)
            else:
                for entries in itertools.product(range(p), repeat=r * c):
                    if place(k, list(entries)):
                        yield from rec(k + 1)

        yield from rec(0)

    def _to_rep(self, vals: list[int]) -> Rep:
        sy = self.system
        mats = {}
        for k, eid in enumerate(sy.order):
            o, r, c = sy.offsets[k], sy.rows[k], sy.cols[k]
            mats[eid] = Matrix(self.field, np.array(vals[o : o + r * c], dtype=np.int64).reshape(r, c))
        return Rep(self.shape, self.dims, mats, self.field)


def enumerate_reps(shape: SSet2, dims: Mapping[str, int], field: PrimeField) -> RepEnumeration:
    return RepEnumeration(shape, dims, field)
