import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from qstack.quivers import frame
from qstack.simplicial import (
    Edge, SSet2, SimplicialError, Triangle, glue_at_vertices, isomorphic, one_skeleton, opposite,
    simplex_operator, square, standard_simplex, validate,
)


def counts(A):
    return len(A.vertices), len(A.edges), len(A.triangles)


@pytest.mark.parametrize("n,expected", [(0, (1, 0, 0)), (2, (3, 3, 1)), (4, (5, 10, 10))])
def test_standard_simplex_counts(n, expected):
    assert counts(standard_simplex(n)) == expected


@pytest.mark.parametrize("n", range(9))
def test_simplex_counts_match_enumeration(n):
    A = standard_simplex(n)
    pairs = list(itertools.combinations(range(n + 1), 2))
    triples = list(itertools.combinations(range(n + 1), 3))
    assert len(A.edges) == len(pairs) == comb(n + 1, 2)
    assert len(A.triangles) == len(triples) == comb(n + 1, 3)
    by_id = A.edge_map
    for t in A.triangles:
        f, s, lg = by_id[t.first], by_id[t.second], by_id[t.long]
        assert f.src == lg.src and f.tgt == s.src and s.tgt == lg.tgt


@pytest.mark.parametrize("bad", [-1, 17, 2.5, "3"])
def test_standard_simplex_range(bad):
    with pytest.raises(SimplicialError):
        standard_simplex(bad)
    with pytest.raises(SimplicialError):
        one_skeleton(bad)


@pytest.mark.parametrize("n,expected", [(1, (2, 1, 0)), (2, (3, 3, 0)), (3, (4, 6, 0))])
def test_one_skeleton(n, expected):
    assert counts(one_skeleton(n)) == expected


def test_square():
    S = square()
    assert counts(S) == (4, 5, 2)
    assert validate(S) == []
    assert counts(opposite(S)) == (4, 5, 2)
    assert validate(opposite(S)) == []


def test_opposite_edge_and_triangle():
    op = opposite(standard_simplex(1))
    (e,) = op.edges
    assert (e.src, e.tgt) == ("1", "0")
    op2 = opposite(standard_simplex(2))
    assert validate(op2) == []
    (t,) = op2.triangles
    assert (t.first, t.second, t.long) == ("1_2", "0_1", "0_2")


@pytest.mark.parametrize("A", [standard_simplex(3), square(), one_skeleton(4)])
def test_opposite_involution(A):
    assert opposite(opposite(A)).same_as(A)


def test_glue_path():
    P = glue_at_vertices(standard_simplex(1), standard_simplex(1), [("1", "0")])
    assert counts(P) == (3, 2, 0)
    assert validate(P) == []
    assert isomorphic(P, SSet2.build(["x", "y", "z"], [("p", "x", "y"), ("q", "y", "z")]))


def test_glue_disjoint_union():
    A, B = standard_simplex(2), square()
    U = glue_at_vertices(A, B, [])
    assert len(U.vertices) == len(A.vertices) + len(B.vertices)
    assert len(U.edges) == len(A.edges) + len(B.edges)


def test_glue_reproduces_framing():
    I = SSet2.build(["a", "b"], [("e", "a", "b")])
    arrow = SSet2.build(["s", "t"], [("j", "s", "t")])
    G = glue_at_vertices(I, arrow, [("a", "s")])
    G = glue_at_vertices(G, arrow, [("b", "s")])
    fr, _ = frame(I)
    assert isomorphic(G, fr)


def test_glue_errors():
    A = standard_simplex(1)
    with pytest.raises(SimplicialError):
        glue_at_vertices(A, A, [("0", "0"), ("1", "0")])
    with pytest.raises(SimplicialError):
        glue_at_vertices(A, A, [("9", "0")])
    with pytest.raises(SimplicialError):
        glue_at_vertices(A, A, [("0", "9")])


def test_validate_diagnostics():
    assert validate(standard_simplex(3)) == []
    bad = SSet2(
        ("a", "b", "c"),
        (Edge("x", "a", "b"), Edge("y", "a", "c"), Edge("z", "a", "c")),
        (Triangle("t", "x", "y", "z"),),
    )
    diags = validate(bad)
    assert len(diags) == 1 and "'t'" in diags[0]
    bad_id = SSet2(("a", "b"), (Edge("i", "a", "b", identity=True),))
    diags = validate(bad_id)
    assert len(diags) == 1 and "'i'" in diags[0]


def test_validate_dangling_and_duplicates():
    assert validate(SSet2(("a",), (Edge("x", "a", "q"),)))
    assert validate(SSet2(("a", "a")))
    assert validate(SSet2(("a",), (Edge("x", "a", "a"), Edge("x", "a", "a"))))
    with pytest.raises(SimplicialError):
        SSet2.build(["a"], [("x", "a", "q")])


@pytest.mark.parametrize("A", [standard_simplex(4), square(), one_skeleton(3), opposite(square())])
def test_serialization_round_trip(A):
    text = A.dumps()
    B = SSet2.loads(text)
    assert B.dumps() == text
    assert B.same_as(A)


def test_simplex_operator_maps_validate():
    for theta in ([0, 2], [0, 1, 1], [0, 0], [1, 2, 3]):
        n = 3
        assert simplex_operator(theta, n).validate() == []
    with pytest.raises(SimplicialError):
        simplex_operator([2, 1], 3)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8))
def test_constructors_validate(n):
    assert validate(standard_simplex(n)) == []
    assert validate(one_skeleton(n)) == []
    assert validate(opposite(standard_simplex(n))) == []


@st.composite
def small_shapes(draw):
    n = draw(st.integers(0, 4))
    A = standard_simplex(n) if draw(st.booleans()) else one_skeleton(n)
    return A


@settings(max_examples=40, deadline=None)
@given(small_shapes(), small_shapes(), small_shapes(), st.data())
def test_glue_associative(A, B, C, data):
    # one pair between A and B, one between B and C, disjoint on B's side
    a = data.draw(st.sampled_from(A.vertices))
    b1 = data.draw(st.sampled_from(B.vertices))
    rest = [v for v in B.vertices if v != b1]
    if not rest:
        return
    b2 = data.draw(st.sampled_from(rest))
    c = data.draw(st.sampled_from(C.vertices))
    AB = glue_at_vertices(A, B, [(a, b1)], suffix="_B")
    left = glue_at_vertices(AB, C, [(b2 + "_B" if b2 + "_B" in AB.vertices else b2, c)], suffix="_C")
    BC = glue_at_vertices(B, C, [(b2, c)], suffix="_C")
    right = glue_at_vertices(A, BC, [(a, b1)], suffix="_B")
    assert validate(left) == [] and validate(right) == []
    assert isomorphic(left, right)


@settings(max_examples=40, deadline=None)
@given(small_shapes())
def test_opposite_involution_property(A):
    assert opposite(opposite(A)).same_as(A)
    assert counts(opposite(A)) == counts(A)
