"""Quiver-to-quiver constructions: framing, doubling, the gauge-action
graph (``tilde``) and the Higgs integrability shape."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .simplicial import Edge, SimplicialError, SSet2, Triangle, glue_at_vertices, opposite, validate

REGULAR = "regular"
FRAMING = "framing"


@dataclass(frozen=True)
class FramingFn:
    """Marks each vertex of a quiver as ``regular`` or ``framing``."""

    roles: tuple[tuple[str, str], ...]

    @classmethod
    def of(cls, roles: Mapping[str, str]) -> "FramingFn":
        for v, r in roles.items():
            if r not in (REGULAR, FRAMING):
                raise ValueError(f"vertex {v!r}: role must be 'regular' or 'framing', got {r!r}")
        return cls(tuple(sorted(roles.items())))

    @classmethod
    def all_regular(cls, I: SSet2) -> "FramingFn":
        return cls.of({v: REGULAR for v in I.vertices})

    @classmethod
    def framed(cls, I: SSet2, framing: Iterable[str]) -> "FramingFn":
        fr = set(framing)
        unknown = fr - set(I.vertices)
        if unknown:
            raise ValueError(f"unknown framing vertices {sorted(unknown)}")
        return cls.of({v: FRAMING if v in fr else REGULAR for v in I.vertices})

    @property
    def mapping(self) -> dict[str, str]:
        return dict(self.roles)

    def is_framing(self, v: str) -> bool:
        return self.mapping[v] == FRAMING

    def regular(self) -> list[str]:
        return [v for v, r in self.roles if r == REGULAR]

    def framing(self) -> list[str]:
        return [v for v, r in self.roles if r == FRAMING]

    def check_total(self, I: SSet2) -> None:
        missing = set(I.vertices) - set(self.mapping)
        if missing:
            raise ValueError(f"framing function missing vertices {sorted(missing)}")

    def to_json(self) -> dict:
        return dict(self.roles)

    @classmethod
    def from_json(cls, obj: Mapping[str, str]) -> "FramingFn":
        return cls.of(dict(obj))


def _require_valid(I: SSet2) -> None:
    problems = validate(I)
    if problems:
        raise SimplicialError("invalid shape: " + "; ".join(problems))


def framing_vertex(v: str) -> str:
    return f"fr_{v}"


def framing_edge(v: str) -> str:
    return f"j_{v}"


def frame(I: SSet2, vertices: Iterable[str] | None = None) -> tuple[SSet2, FramingFn]:
    """Glue a copy of ``0 -> 1`` at each vertex (``v`` identified with ``0``).

    By default every vertex gets a framing node; pass ``vertices`` to frame a
    subset only.
    """
    _require_valid(I)
    targets = list(I.vertices) if vertices is None else list(vertices)
    for v in targets:
        if v not in I.vertices:
            raise SimplicialError(f"cannot frame unknown vertex {v!r}")
    out = I
    for v in targets:
        arrow = SSet2(("0", "1"), (Edge(framing_edge(v), "0", "1"),))
        if framing_vertex(v) in out.vertices or framing_edge(v) in out.edge_map:
            raise SimplicialError(f"framing ids for {v!r} clash with existing ids")
        out = glue_at_vertices(out, arrow, [(v, "0")], rename=lambda x, v=v: framing_vertex(v) if x == "1" else x)
    roles = {v: REGULAR for v in I.vertices}
    roles.update({framing_vertex(v): FRAMING for v in targets})
    return out, FramingFn.of(roles)


def reverse_id(eid: str) -> str:
    return f"{eid}*"


@dataclass(frozen=True)
class Doubled:
    shape: SSet2
    reverse: tuple[tuple[str, str], ...]

    @property
    def star(self) -> dict[str, str]:
        """The reversal involution ``a -> a*`` on edges (both directions)."""
        d = dict(self.reverse)
        d.update({b: a for a, b in self.reverse})
        return d

    @property
    def original_edges(self) -> list[str]:
        return [a for a, _ in self.reverse]


def double(J: SSet2) -> Doubled:
    """Glue ``J`` and ``J^op`` along their vertex sets; reversed edges get a ``*`` suffix."""
    _require_valid(J)
    op = opposite(J)
    out = glue_at_vertices(J, op, [(v, v) for v in J.vertices], rename=reverse_id)
    rev = []
    for e in J.edges:
        if reverse_id(e.id) not in out.edge_map or out.edge(reverse_id(e.id)).src != e.tgt:
            raise SimplicialError(f"reversed copy of {e.id!r} clashes with an existing id")
        rev.append((e.id, reverse_id(e.id)))
    return Doubled(out, tuple(rev))


def prime(x: str) -> str:
    return f"{x}'"


def iso_edge(v: str) -> str:
    return f"g_{v}"


def iso_inverse_edge(v: str) -> str:
    return f"ginv_{v}"


def composite_edge(v: str, e: str) -> str:
    return f"(g_{v},{e})"


@dataclass(frozen=True)
class TildeLayout:
    """Bookkeeping for the cells of ``tilde(I, f)``."""

    shape: SSet2
    framing: FramingFn
    doubled_edges: tuple[str, ...]
    single_edges: tuple[str, ...]


def tilde(I: SSet2, f: FramingFn) -> SSet2:
    return tilde_layout(I, f).shape


def tilde_layout(I: SSet2, f: FramingFn) -> TildeLayout:
    """Simplicial set whose representations are triples ``(g, rho, psi)`` with ``g . rho = psi``."""
    _require_valid(I)
    if I.triangles:
        raise SimplicialError("tilde requires a quiver without 2-simplices")
    if any(e.identity for e in I.edges):
        raise SimplicialError("tilde requires a quiver without identity edges")
    f.check_total(I)
    reg = [v for v in I.vertices if not f.is_framing(v)]
    fr = [v for v in I.vertices if f.is_framing(v)]

    verts = list(reg) + [prime(v) for v in reg] + list(fr)
    if len(set(verts)) != len(verts):
        raise SimplicialError("primed vertex ids clash with existing ids")

    def copy2(v: str) -> str:
        return v if f.is_framing(v) else prime(v)

    edges: list[Edge] = []
    tris: list[Triangle] = []
    doubled, single = [], []
    for v in reg:
        edges.append(Edge(iso_edge(v), v, prime(v)))
        edges.append(Edge(iso_inverse_edge(v), prime(v), v))
        edges.append(Edge(f"id_{v}", v, v, True))
        edges.append(Edge(f"id_{prime(v)}", prime(v), prime(v), True))
        tris.append(Triangle(f"alpha_{v}", iso_edge(v), iso_inverse_edge(v), f"id_{v}"))
        tris.append(Triangle(f"beta_{v}", iso_inverse_edge(v), iso_edge(v), f"id_{prime(v)}"))
    for e in I.edges:
        fs, ft = f.is_framing(e.src), f.is_framing(e.tgt)
        if fs and ft:
            single.append(e.id)
            edges.append(e)
            continue
        doubled.append(e.id)
        edges.append(Edge(e.id, e.src, e.tgt))
        edges.append(Edge(prime(e.id), copy2(e.src), copy2(e.tgt)))
        if not fs and not ft:
            comp = composite_edge(e.tgt, e.id)
            edges.append(Edge(comp, e.src, prime(e.tgt)))
            tris.append(Triangle(f"alpha_{e.id}", e.id, iso_edge(e.tgt), comp))
            tris.append(Triangle(f"beta_{e.id}", iso_edge(e.src), prime(e.id), comp))
        elif ft:
            tris.append(Triangle(f"delta_{e.id}", iso_edge(e.src), prime(e.id), e.id))
        else:
            tris.append(Triangle(f"epsilon_{e.id}", e.id, iso_edge(e.tgt), prime(e.id)))
    out = SSet2(tuple(verts), tuple(edges), tuple(tris))
    problems = validate(out)
    if problems:
        raise SimplicialError("tilde construction produced an invalid shape: " + "; ".join(problems))
    return TildeLayout(out, f, tuple(doubled), tuple(single))


@dataclass(frozen=True)
class LabeledShape:
    shape: SSet2
    labels: tuple[tuple[str, str], ...]

    @property
    def label_map(self) -> dict[str, str]:
        return dict(self.labels)


HIGGS_VERTICES = ("a", "b", "c", "d", "b'")
HIGGS_EDGES = ("e_ab", "e_bc", "e_cd", "e_ab'", "e_b'd")


def higgs_shape() -> LabeledShape:
    """The pentagon shape whose commutative representations carry Higgs data.

    Besides the five named edges, two composite edges ``e_ac`` and ``e_ad``
    carry the triangles that force ``a -> b -> c -> d`` to agree with
    ``a -> b' -> d``.
    """
    edges = (
        Edge("e_ab", "a", "b"),
        Edge("e_bc", "b", "c"),
        Edge("e_cd", "c", "d"),
        Edge("e_ab'", "a", "b'"),
        Edge("e_b'd", "b'", "d"),
        Edge("e_ac", "a", "c"),
        Edge("e_ad", "a", "d"),
    )
    tris = (
        Triangle("t_abc", "e_ab", "e_bc", "e_ac"),
        Triangle("t_acd", "e_ac", "e_cd", "e_ad"),
        Triangle("t_ab'd", "e_ab'", "e_b'd", "e_ad"),
    )
    shape = SSet2(HIGGS_VERTICES, edges, tris)
    labels = {v: "vertex" for v in HIGGS_VERTICES}
    labels.update({e: "edge" for e in HIGGS_EDGES})
    labels.update({"e_ac": "composite", "e_ad": "composite"})
    labels.update({t.id: "commutativity" for t in tris})
    return LabeledShape(shape, tuple(sorted(labels.items())))
