from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qstack.jsonio import dumps
from qstack.rings import QQ, Floats, Matrix, PrimeField, RingError, all_matrices, ring_from_json


@pytest.mark.parametrize("p", [1, 4, 9, 67, 2.5])
def test_prime_field_rejects(p):
    with pytest.raises(RingError):
        PrimeField(p)


def test_prime_field_arithmetic():
    F = PrimeField(7)
    a = Matrix.of(F, [[3, 5], [1, 2]])
    inv = a.inverse()
    assert (a @ inv) == Matrix.identity(F, 2)
    assert Matrix.of(F, [[-1]]).tolist() == [[6]]
    with pytest.raises(RingError):
        Matrix.of(F, [[1, 2], [2, 4]]).inverse()


def test_rationals_exact():
    a = Matrix.of(QQ, [["1/2", 1], [3, "2/3"]])
    inv = a.inverse()
    assert a @ inv == Matrix.identity(QQ, 2)
    assert inv.to_json()[0][0] == "-1/4"


def test_zero_sized_matrices():
    z = Matrix.zeros(QQ, 0, 3)
    assert z.shape == (0, 3) and (Matrix.zeros(QQ, 2, 0) @ z).shape == (2, 3)
    assert Matrix.identity(PrimeField(2), 0).is_invertible()


def test_float_tolerance_equality():
    R = Floats(1e-6)
    a = Matrix.of(R, [[1.0, 2.0]])
    assert a.equals(Matrix.of(R, [[1.0, 2.0 + 1e-9]]))
    assert not a.equals(Matrix.of(R, [[1.0, 2.1]]))


def test_ring_json():
    for ring in (PrimeField(5), QQ, Floats(1e-7)):
        assert ring_from_json(ring.to_json()) == ring


def test_all_matrices():
    assert len(list(all_matrices(PrimeField(3), 1, 2))) == 9


def test_jsonio_deterministic():
    obj = {"b": [1.0 / 3, Fraction(2, 4)], "a": None, "c": True}
    assert dumps(obj) == '{"a":null,"b":[0.33333333333333331,"1/2"],"c":true}'


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**20), st.sampled_from([2, 3, 5, 61]), st.integers(1, 4))
def test_inverse_property(seed, p, n):
    F = PrimeField(p)
    rng = np.random.default_rng(seed)
    a = Matrix.random(F, rng, n, n)
    if a.is_invertible():
        assert a @ a.inverse() == Matrix.identity(F, n) == a.inverse() @ a
