"""Finite 2-truncated simplicial sets.

A 2-truncated simplicial set is given by vertices, directed edges and
triangles.  A triangle ``(first, second, long)`` witnesses that ``long`` is the
composite "first, then second".  Edges may be tagged as identity (degenerate)
edges at a vertex; triangles referring to them express relations such as
``g^-1 g = id``.

Orientation convention: an edge goes from its source ``src`` (the d0 face in
the quiver literature this library follows) to its target ``tgt`` (d1).  This
is the opposite of the usual simplicial face indexing and is used everywhere.

Cells above dimension two are always degenerate and are not stored.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

MAX_SIMPLEX_DIM = 16


class SimplicialError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    tgt: str
    identity: bool = False


@dataclass(frozen=True, order=True)
class Triangle:
    id: str
    first: str
    second: str
    long: str


@dataclass(frozen=True)
class SSet2:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()
    triangles: tuple[Triangle, ...] = ()

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Iterable[Edge | tuple] = (),
        triangles: Iterable[Triangle | tuple] = (),
        *,
        check: bool = True,
    ) -> "SSet2":
        es = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        ts = tuple(t if isinstance(t, Triangle) else Triangle(*t) for t in triangles)
        out = cls(tuple(str(v) for v in vertices), es, ts)
        if check:
            problems = validate(out)
            if problems:
                raise SimplicialError("; ".join(problems))
        return out

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def triangle_map(self) -> dict[str, Triangle]:
        return {t.id: t for t in self.triangles}

    def edge(self, eid: str) -> Edge:
        try:
            return self.edge_map[eid]
        except KeyError:
            raise SimplicialError(f"no edge {eid!r}") from None

    @property
    def nondegenerate_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if not e.identity)

    def counts(self) -> tuple[int, int, int]:
        """(vertices, non-identity edges, triangles)."""
        return len(self.vertices), len(self.nondegenerate_edges), len(self.triangles)

    def identity_edge(self, v: str) -> Edge | None:
        for e in self.edges:
            if e.identity and e.src == v:
                return e
        return None

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        edges = []
        for e in sorted(self.edges, key=lambda e: e.id):
            d = {"id": e.id, "src": e.src, "tgt": e.tgt}
            if e.identity:
                d["identity"] = True
            edges.append(d)
        return {
            "vertices": sorted(self.vertices),
            "edges": edges,
            "triangles": [
                {"id": t.id, "first": t.first, "second": t.second, "long": t.long}
                for t in sorted(self.triangles, key=lambda t: t.id)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, obj: Mapping) -> "SSet2":
        return cls.build(
            obj["vertices"],
            [Edge(e["id"], e["src"], e["tgt"], bool(e.get("identity", False))) for e in obj.get("edges", ())],
            [Triangle(t["id"], t["first"], t["second"], t["long"]) for t in obj.get("triangles", ())],
        )

    @classmethod
    def loads(cls, text: str) -> "SSet2":
        return cls.from_json(json.loads(text))

    def sorted(self) -> "SSet2":
        return SSet2(tuple(sorted(self.vertices)), tuple(sorted(self.edges)), tuple(sorted(self.triangles)))

    def same_as(self, other: "SSet2") -> bool:
        """Equality ignoring declaration order."""
        return self.sorted() == other.sorted()


def validate(A: SSet2) -> list[str]:
    """Return one diagnostic per violated invariant; empty when ``A`` is well formed."""
    out: list[str] = []
    seen: set[str] = set()
    for v in A.vertices:
        if v in seen:
            out.append(f"vertex {v!r}: duplicate id")
        seen.add(v)
    verts = set(A.vertices)
    edges: dict[str, Edge] = {}
    for e in A.edges:
        if e.id in edges:
            out.append(f"edge {e.id!r}: duplicate id")
            continue
        edges[e.id] = e
        for end in (e.src, e.tgt):
            if end not in verts:
                out.append(f"edge {e.id!r}: unknown vertex {end!r}")
        if e.identity and e.src != e.tgt:
            out.append(f"edge {e.id!r}: identity edge with src {e.src!r} != tgt {e.tgt!r}")
    tids: set[str] = set()
    for t in A.triangles:
        if t.id in tids:
            out.append(f"triangle {t.id!r}: duplicate id")
            continue
        tids.add(t.id)
        missing = [x for x in (t.first, t.second, t.long) if x not in edges]
        if missing:
            out.append(f"triangle {t.id!r}: unknown edge(s) {', '.join(map(repr, missing))}")
            continue
        f, s, lg = edges[t.first], edges[t.second], edges[t.long]
        bad = []
        if f.src != lg.src:
            bad.append("src(first) != src(long)")
        if f.tgt != s.src:
            bad.append("tgt(first) != src(second)")
        if s.tgt != lg.tgt:
            bad.append("tgt(second) != tgt(long)")
        if bad:
            out.append(f"triangle {t.id!r}: " + ", ".join(bad))
    return out


def _check_dim(n: int) -> None:
    if not isinstance(n, int) or not 0 <= n <= MAX_SIMPLEX_DIM:
        raise SimplicialError(f"simplex dimension must be in [0, {MAX_SIMPLEX_DIM}], got {n!r}")


def simplex_edge_id(i: int, j: int) -> str:
    return f"{i}_{j}"


def standard_simplex(n: int) -> SSet2:
    _check_dim(n)
    verts = [str(i) for i in range(n + 1)]
    edges = [Edge(simplex_edge_id(i, j), str(i), str(j)) for i, j in itertools.combinations(range(n + 1), 2)]
    tris = [
        Triangle(f"{i}_{j}_{k}", simplex_edge_id(i, j), simplex_edge_id(j, k), simplex_edge_id(i, k))
        for i, j, k in itertools.combinations(range(n + 1), 3)
    ]
    return SSet2(tuple(verts), tuple(edges), tuple(tris))


def one_skeleton(n: int) -> SSet2:
    s = standard_simplex(n)
    return SSet2(s.vertices, s.edges, ())


def square() -> SSet2:
    """Delta^1 x Delta^1 with its diagonal; representations are commuting squares."""
    return SSet2(
        ("a", "b", "c", "d"),
        (
            Edge("u", "a", "b"),
            Edge("v", "a", "c"),
            Edge("w", "b", "d"),
            Edge("y", "c", "d"),
            Edge("diag", "a", "d"),
        ),
        (Triangle("upper", "u", "w", "diag"), Triangle("lower", "v", "y", "diag")),
    )


def opposite(A: SSet2) -> SSet2:
    return SSet2(
        A.vertices,
        tuple(Edge(e.id, e.tgt, e.src, e.identity) for e in A.edges),
        tuple(Triangle(t.id, t.second, t.first, t.long) for t in A.triangles),
    )


def _fresh(name: str, taken: set[str], suffix: str) -> str:
    while name in taken:
        name += suffix
    return name


def glue_at_vertices(
    A: SSet2,
    B: SSet2,
    pairs: Sequence[tuple[str, str]] = (),
    *,
    rename: Callable[[str], str] | None = None,
    suffix: str = "_b",
) -> SSet2:
    """Pushout of ``A <- discrete -> B`` along an injective vertex matching.

    Ids of ``A`` are kept.  Ids of ``B`` are passed through ``rename`` (if
    given) and then suffixed until they no longer clash; paired vertices of
    ``B`` take the id of their partner in ``A``.
    """
    a_side = [a for a, _ in pairs]
    b_side = [b for _, b in pairs]
    if len(set(a_side)) != len(a_side) or len(set(b_side)) != len(b_side):
        raise SimplicialError("vertex matching is not injective")
    for a in a_side:
        if a not in A.vertices:
            raise SimplicialError(f"unknown vertex {a!r} of the first operand")
    for b in b_side:
        if b not in B.vertices:
            raise SimplicialError(f"unknown vertex {b!r} of the second operand")
    rn = rename or (lambda x: x)
    vmap = dict((b, a) for a, b in pairs)
    taken_v = set(A.vertices)
    verts = list(A.vertices)
    for v in B.vertices:
        if v in vmap:
            continue
        new = _fresh(rn(v), taken_v, suffix)
        taken_v.add(new)
        vmap[v] = new
        verts.append(new)
    taken_e = {e.id for e in A.edges}
    emap: dict[str, str] = {}
    edges = list(A.edges)
    for e in B.edges:
        new = _fresh(rn(e.id), taken_e, suffix)
        taken_e.add(new)
        emap[e.id] = new
        edges.append(Edge(new, vmap[e.src], vmap[e.tgt], e.identity))
    taken_t = {t.id for t in A.triangles}
    tris = list(A.triangles)
    for t in B.triangles:
        new = _fresh(rn(t.id), taken_t, suffix)
        taken_t.add(new)
        tris.append(Triangle(new, emap[t.first], emap[t.second], emap[t.long]))
    out = SSet2(tuple(verts), tuple(edges), tuple(tris))
    problems = validate(out)
    if problems:
        raise SimplicialError("; ".join(problems))
    return out


def relabel(A: SSet2, vertex: Mapping[str, str] | None = None, edge: Mapping[str, str] | None = None) -> SSet2:
    vm = dict(vertex or {})
    em = dict(edge or {})
    v = lambda x: vm.get(x, x)  # noqa: E731
    e = lambda x: em.get(x, x)  # noqa: E731
    return SSet2(
        tuple(v(x) for x in A.vertices),
        tuple(Edge(e(x.id), v(x.src), v(x.tgt), x.identity) for x in A.edges),
        tuple(Triangle(t.id, e(t.first), e(t.second), e(t.long)) for t in A.triangles),
    )


def _incidence_graph(A: SSet2):
    import networkx as nx

    g = nx.DiGraph()
    for v in A.vertices:
        g.add_node(("v", v), kind="v")
    for e in A.edges:
        g.add_node(("e", e.id), kind="e-id" if e.identity else "e")
        g.add_edge(("e", e.id), ("v", e.src), role="src")
        g.add_edge(("e", e.id), ("v", e.tgt), role="tgt")
        if e.src == e.tgt:
            g.edges[("e", e.id), ("v", e.src)]["role"] = "loop"
    for t in A.triangles:
        g.add_node(("t", t.id), kind="t")
        for role in ("first", "second", "long"):
            key = (("t", t.id), ("e", getattr(t, role)))
            if g.has_edge(*key):
                g.edges[key]["role"] += "+" + role
            else:
                g.add_edge(*key, role=role)
    return g


def isomorphic(A: SSet2, B: SSet2) -> bool:
    """Structural equality up to renaming of ids."""
    import networkx as nx

    if (len(A.vertices), len(A.edges), len(A.triangles)) != (len(B.vertices), len(B.edges), len(B.triangles)):
        return False
    return nx.is_isomorphic(
        _incidence_graph(A),
        _incidence_graph(B),
        node_match=lambda x, y: x["kind"] == y["kind"],
        edge_match=lambda x, y: x["role"] == y["role"],
    )


DEGENERATE = "__degenerate__"


@dataclass(frozen=True)
class SSetMap:
    """A map of 2-truncated simplicial sets.

    ``edge_map`` sends an edge either to an edge of the target or to
    ``(DEGENERATE, vertex)`` when the edge is collapsed to an identity.
    """

    source: SSet2
    target: SSet2
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str | tuple[str, str]] = field(default_factory=dict)

    def image_ends(self, eid: str) -> tuple[str, str]:
        img = self.edge_map[eid]
        if isinstance(img, tuple):
            return img[1], img[1]
        e = self.target.edge(img)
        return e.src, e.tgt

    def validate(self) -> list[str]:
        out = []
        for v in self.source.vertices:
            if self.vertex_map.get(v) not in self.target.vertices:
                out.append(f"vertex {v!r}: image missing")
        for e in self.source.edges:
            if e.id not in self.edge_map:
                out.append(f"edge {e.id!r}: image missing")
                continue
            img = self.edge_map[e.id]
            if not isinstance(img, tuple) and img not in self.target.edge_map:
                out.append(f"edge {e.id!r}: unknown image {img!r}")
                continue
            s, t = self.image_ends(e.id)
            if (s, t) != (self.vertex_map.get(e.src), self.vertex_map.get(e.tgt)):
                out.append(f"edge {e.id!r}: endpoints not preserved")
            if e.identity and not (isinstance(img, tuple) or self.target.edge(img).identity):
                out.append(f"edge {e.id!r}: identity edge sent to a non-identity edge")
        if out:
            return out
        tri_set = {(t.first, t.second, t.long) for t in self.target.triangles}
        for t in self.source.triangles:
            f, s, lg = (self.edge_map[x] for x in (t.first, t.second, t.long))
            if not isinstance(f, tuple) and not isinstance(s, tuple) and not isinstance(lg, tuple):
                ok = (f, s, lg) in tri_set
            elif isinstance(f, tuple) and isinstance(s, tuple):
                ok = isinstance(lg, tuple)
            elif isinstance(f, tuple):
                ok = s == lg
            elif isinstance(s, tuple):
                ok = f == lg
            else:
                ok = False
            if not ok:
                out.append(f"triangle {t.id!r}: image is not a triangle or degenerate configuration")
        return out


def simplex_operator(theta: Sequence[int], n: int) -> SSetMap:
    """The map Delta^m -> Delta^n induced by a monotone ``theta: [m] -> [n]``."""
    m = len(theta) - 1
    if any(theta[i] > theta[i + 1] for i in range(m)) or (theta and (theta[0] < 0 or theta[-1] > n)):
        raise SimplicialError(f"{list(theta)} is not a monotone map into [{n}]")
    src, tgt = standard_simplex(m), standard_simplex(n)
    em: dict[str, str | tuple[str, str]] = {}
    for i, j in itertools.combinations(range(m + 1), 2):
        a, b = theta[i], theta[j]
        em[simplex_edge_id(i, j)] = (DEGENERATE, str(a)) if a == b else simplex_edge_id(a, b)
    return SSetMap(src, tgt, {str(i): str(theta[i]) for i in range(m + 1)}, em)
