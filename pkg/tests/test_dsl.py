from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qstack.dsl import ParseError, QuiverDoc, parse, parse_dims, parse_levels, print_doc
from qstack.quivers import FramingFn, double, frame, tilde
from qstack.simplicial import SSet2, one_skeleton, square, standard_simplex, validate

FIXTURES = sorted((Path(__file__).parent / "fixtures").glob("*.qv"))


def test_fixture_corpus_size():
    assert len(FIXTURES) >= 10
    assert any(p.name == "tilde_example.qv" for p in FIXTURES)


def test_parse_a2_example():
    doc = parse("quiver A2\nvertex a\nvertex b\nvertex f framed\nedge e1: a -> b\nedge e2: b -> f")
    assert doc.name == "A2"
    assert doc.shape().counts() == (3, 2, 0)
    assert doc.framed_vertices == ["f"]
    assert doc.framing().regular() == ["a", "b"]


def test_unresolved_triangle_edge():
    text = "quiver t\nvertex a\nvertex b\nvertex c\nedge e1 : a -> b\nedge e2 : b -> c\ntriangle t: e1 . e2 => e3\n"
    with pytest.raises(ParseError, match="unresolved edge reference 'e3'") as exc:
        parse(text)
    assert exc.value.line == 7
    assert exc.value.column == text.splitlines()[6].index("e3") + 1


def test_example_builds_tilde():
    doc = parse((Path(__file__).parent / "fixtures" / "tilde_example.qv").read_text())
    T = tilde(doc.shape(), doc.framing())
    assert T.counts() == (5, 9, 7)
    assert validate(T) == []


@pytest.mark.parametrize(
    "text,fragment,line",
    [
        ("vertex a\n", "expected 'quiver NAME'", 1),
        ("quiver q\nvertex a\nvertex a\n", "duplicate vertex", 3),
        ("quiver q\nvertex a\nedge x : a -> a\nedge x : a -> a\n", "duplicate edge", 4),
        ("quiver q\nvertex a\nedge x : a -> b\n", "unresolved vertex reference 'b'", 3),
        ("quiver q\nvertex a\nedge x a -> a\n", "malformed edge", 3),
        ("quiver q\nvertex a\nbogus a\n", "unknown keyword", 3),
        ("quiver q\nvertex a\ndim a = x\n", "malformed dim", 3),
        ("quiver q\nvertex a\ndim z = 1\n", "unresolved vertex reference 'z'", 3),
        ("quiver q\nquiver r\n", "duplicate quiver header", 2),
        ("", "empty document", 1),
        ("quiver q\nvertex a\nvertex b\nedge i : a -> b identity\n", "identity", 4),
    ],
)
def test_errors(text, fragment, line):
    with pytest.raises(ParseError, match=fragment) as exc:
        parse(text)
    assert exc.value.line == line


def test_error_column_points_at_token():
    text = "quiver q\nvertex a\n  edge x : a -> nope\n"
    with pytest.raises(ParseError) as exc:
        parse(text)
    assert exc.value.column == text.splitlines()[2].index("nope") + 1


def test_comments_and_blank_lines():
    doc = parse("# header\n\nquiver q   # name\nvertex a # first\n\nedge l : a -> a\n")
    assert doc.shape().counts() == (1, 1, 0)


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    doc = parse(path.read_text())
    printed = print_doc(doc)
    again = parse(printed)
    assert again == doc
    assert print_doc(again) == printed


def test_round_trip_constructed_shapes():
    I = SSet2.build(["a", "b"], [("e", "a", "b")])
    fr, f = frame(I)
    shapes = [
        (standard_simplex(3), None),
        (square(), None),
        (fr, f),
        (double(fr).shape, f),
        (tilde(I, FramingFn.all_regular(I)), None),
    ]
    for shape, framing in shapes:
        doc = QuiverDoc.from_shape("x", shape, framing, {v: 1 for v in shape.vertices})
        assert parse(print_doc(doc)) == doc
        assert parse(print_doc(doc)).shape().same_as(shape)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 5), st.booleans(), st.data())
def test_round_trip_property(n, full, data):
    shape = standard_simplex(n) if full else one_skeleton(n)
    framed = data.draw(st.lists(st.sampled_from(shape.vertices), unique=True))
    dims = {v: data.draw(st.integers(0, 9)) for v in data.draw(st.lists(st.sampled_from(shape.vertices), unique=True))}
    doc = QuiverDoc.from_shape("p", shape, FramingFn.framed(shape, framed), dims)
    assert parse(print_doc(doc)) == doc


def test_parse_dims_and_levels():
    assert parse_dims("a=1, b=2") == {"a": 1, "b": 2}
    assert parse_dims("") == {}
    assert parse_levels("v=0.5") == {"v": 0.5}
    with pytest.raises(ValueError):
        parse_dims("a")
    with pytest.raises(ValueError):
        parse_levels("v")
