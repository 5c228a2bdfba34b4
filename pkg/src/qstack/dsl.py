"""Line-oriented text format for quivers.

::

    quiver NAME
    vertex ID [framed]
    edge ID : SRC -> TGT [identity]
    triangle ID : FIRST . SECOND => LONG     # LONG = SECOND after FIRST
    dim VERTEX = INT

``#`` starts a comment.  Identifiers may contain letters, digits and
``_ ' * ( ) , ^ ~ + [ ]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .quivers import FRAMING, REGULAR, FramingFn
from .simplicial import Edge, SSet2, Triangle, validate

ID = r"[A-Za-z0-9_'*(),^~+\[\]]+"

_QUIVER = re.compile(rf"quiver\s+(?P<name>{ID})$")
_VERTEX = re.compile(rf"vertex\s+(?P<id>{ID})(?:\s+(?P<framed>framed))?$")
_EDGE = re.compile(rf"edge\s+(?P<id>{ID})\s*:\s*(?P<src>{ID})\s*->\s*(?P<tgt>{ID})(?:\s+(?P<identity>identity))?$")
_TRIANGLE = re.compile(rf"triangle\s+(?P<id>{ID})\s*:\s*(?P<first>{ID})\s+\.\s+(?P<second>{ID})\s*=>\s*(?P<long>{ID})$")
_DIM = re.compile(rf"dim\s+(?P<v>{ID})\s*=\s*(?P<n>\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass
class QuiverDoc:
    name: str
    vertices: list[tuple[str, bool]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    triangles: list[Triangle] = field(default_factory=list)
    dims: dict[str, int] = field(default_factory=dict)

    def shape(self) -> SSet2:
        return SSet2.build([v for v, _ in self.vertices], self.edges, self.triangles)

    def framing(self) -> FramingFn:
        return FramingFn.of({v: FRAMING if fr else REGULAR for v, fr in self.vertices})

    @property
    def framed_vertices(self) -> list[str]:
        return [v for v, fr in self.vertices if fr]

    @classmethod
    def from_shape(cls, name: str, shape: SSet2, framing: FramingFn | None = None,
                   dims: dict[str, int] | None = None) -> "QuiverDoc":
        fr = framing.mapping if framing is not None else {}
        return cls(
            name,
            [(v, fr.get(v) == FRAMING) for v in shape.vertices],
            list(shape.edges),
            list(shape.triangles),
            dict(dims or {}),
        )


def parse(text: str) -> QuiverDoc:
    doc: QuiverDoc | None = None
    seen_v: dict[str, int] = {}
    seen_e: dict[str, int] = {}
    seen_t: dict[str, int] = {}
    pending: list[tuple[int, int, str, str]] = []  # (line, col, kind, ref)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        stripped = line.lstrip()
        if not stripped:
            continue
        col = len(line) - len(stripped) + 1

        def ref_col(token: str) -> int:
            idx = line.find(token, col - 1 + len(stripped.split()[0]))
            return idx + 1 if idx >= 0 else col

        keyword = stripped.split()[0]
        if doc is None and keyword != "quiver":
            raise ParseError("expected 'quiver NAME' as the first declaration", lineno, col)
        if keyword == "quiver":
            mt = _QUIVER.match(stripped)
            if not mt:
                raise ParseError("malformed quiver header", lineno, col)
            if doc is not None:
                raise ParseError("duplicate quiver header", lineno, col)
            doc = QuiverDoc(mt["name"])
        elif keyword == "vertex":
            mt = _VERTEX.match(stripped)
            if not mt:
                raise ParseError("malformed vertex declaration", lineno, col)
            if mt["id"] in seen_v:
                raise ParseError(f"duplicate vertex id {mt['id']!r} (first declared on line {seen_v[mt['id']]})", lineno, ref_col(mt["id"]))
            seen_v[mt["id"]] = lineno
            doc.vertices.append((mt["id"], mt["framed"] is not None))
        elif keyword == "edge":
            mt = _EDGE.match(stripped)
            if not mt:
                raise ParseError("malformed edge declaration, expected 'edge ID : SRC -> TGT'", lineno, col)
            if mt["id"] in seen_e:
                raise ParseError(f"duplicate edge id {mt['id']!r}", lineno, ref_col(mt["id"]))
            seen_e[mt["id"]] = lineno
            for ref in (mt["src"], mt["tgt"]):
                pending.append((lineno, ref_col(ref), "vertex", ref))
            doc.edges.append(Edge(mt["id"], mt["src"], mt["tgt"], mt["identity"] is not None))
        elif keyword == "triangle":
            mt = _TRIANGLE.match(stripped)
            if not mt:
                raise ParseError("malformed triangle, expected 'triangle ID : FIRST . SECOND => LONG'", lineno, col)
            if mt["id"] in seen_t:
                raise ParseError(f"duplicate triangle id {mt['id']!r}", lineno, ref_col(mt["id"]))
            seen_t[mt["id"]] = lineno
            for ref in (mt["first"], mt["second"], mt["long"]):
                pending.append((lineno, ref_col(ref), "edge", ref))
            doc.triangles.append(Triangle(mt["id"], mt["first"], mt["second"], mt["long"]))
        elif keyword == "dim":
            mt = _DIM.match(stripped)
            if not mt:
                raise ParseError("malformed dim, expected 'dim VERTEX = INT'", lineno, col)
            pending.append((lineno, ref_col(mt["v"]), "vertex", mt["v"]))
            doc.dims[mt["v"]] = int(mt["n"])
        else:
            raise ParseError(f"unknown keyword {keyword!r}", lineno, col)
    if doc is None:
        raise ParseError("empty document", 1)
    for lineno, col, kind, ref in pending:
        known = seen_v if kind == "vertex" else seen_e
        if ref not in known:
            raise ParseError(f"unresolved {kind} reference {ref!r}", lineno, col)
    problems = validate(SSet2(tuple(v for v, _ in doc.vertices), tuple(doc.edges), tuple(doc.triangles)))
    if problems:
        raise ParseError("; ".join(problems), len(text.splitlines()) or 1)
    return doc


def print_doc(doc: QuiverDoc) -> str:
    lines = [f"quiver {doc.name}"]
    for v, fr in doc.vertices:
        lines.append(f"vertex {v}" + (" framed" if fr else ""))
    for e in doc.edges:
        lines.append(f"edge {e.id} : {e.src} -> {e.tgt}" + (" identity" if e.identity else ""))
    for t in doc.triangles:
        lines.append(f"triangle {t.id} : {t.first} . {t.second} => {t.long}")
    for v, n in doc.dims.items():
        lines.append(f"dim {v} = {n}")
    return "\n".join(lines) + "\n"


def parse_dims(text: str) -> dict[str, int]:
    """``"a=1,b=2"`` -> ``{"a": 1, "b": 2}``."""
    out: dict[str, int] = {}
    if not text.strip():
        return out
    for part in text.split(","):
        if "=" not in part:
            raise ValueError(f"expected VERTEX=INT, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = int(v)
    return out


def parse_levels(text: str) -> dict[str, float]:
    out: dict[str, float] = {}
    if not text.strip():
        return out
    for part in text.split(","):
        if "=" not in part:
            raise ValueError(f"expected VERTEX=FLOAT, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = float(v)
    return out
