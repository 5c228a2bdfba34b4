import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from qstack import kernels
from qstack._pykernels import coherence_sweep as py_sweep, count_solutions as py_count, matmul_mod as py_matmul
from qstack.quivers import FramingFn, tilde
from qstack.reps import _search_order, compile_constraints
from qstack.simplicial import SSet2, square, standard_simplex

needs_compiled = pytest.mark.skipif(kernels.compiled is None, reason="compiled extension not built")

SYSTEMS = [
    (standard_simplex(2), {"0": 1, "1": 2, "2": 1}, 3),
    (square(), dict.fromkeys("abcd", 1), 3),
    (standard_simplex(3), {"0": 1, "1": 1, "2": 1, "3": 2}, 2),
    (SSet2.build(["v"], [("B", "v", "v"), ("i", "v", "v", True)], [("t", "i", "B", "B")]), {"v": 2}, 2),
]


def _tilde_case():
    I = SSet2.build(["a", "b", "c"], [("e_ab", "a", "b"), ("e_bc", "b", "c")])
    f = FramingFn.framed(I, ["c"])
    return tilde(I, f), {"a": 1, "b": 1, "c": 1, "a'": 1, "b'": 1}, 3


@needs_compiled
@pytest.mark.parametrize("case", SYSTEMS + [_tilde_case()])
def test_count_parity(case):
    shape, dims, p = case
    for order in (None, _search_order(shape)):
        args = compile_constraints(shape, dims, order).kernel_args()
        assert kernels.compiled.count_solutions(*args, p) == py_count(*args, p)


@needs_compiled
@pytest.mark.parametrize("dims", [(1, 1, 1, 1), (2, 1, 0, 2), (1, 2, 1, 1), (0, 0, 0, 0)])
def test_coherence_parity(dims):
    assert kernels.compiled.coherence_sweep(3, dims, 2) == py_sweep(3, dims, 2)


@needs_compiled
def test_coherence_parity_simplex2():
    assert kernels.compiled.coherence_sweep(2, (2, 1, 2), 3) == py_sweep(2, (2, 1, 2), 3)


@needs_compiled
def test_matmul_parity():
    rng = np.random.default_rng(0)
    for p in (2, 5, 61):
        a = rng.integers(0, p, size=(4, 3)).astype(np.int64)
        b = rng.integers(0, p, size=(3, 5)).astype(np.int64)
        want = (a @ b) % p
        assert np.array_equal(np.asarray(kernels.compiled.matmul_mod(a, b, p)), want)
        assert np.array_equal(np.asarray(py_matmul(a, b, p)), want)


def test_coherence_sweep_counts():
    total, tri_ok, sub_ok, disagree = kernels.coherence_sweep(3, (1, 1, 1, 1), 2)
    assert total == 2**6
    # valid chains are determined by their three spine arrows
    assert tri_ok == sub_ok == 2**3
    assert disagree == 0


def test_backend_env_switch():
    env = dict(os.environ, QSTACK_PURE="1")
    out = subprocess.run(
        [sys.executable, "-c", "from qstack import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"


def test_active_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    if kernels.compiled is not None and not os.environ.get("QSTACK_PURE"):
        assert kernels.BACKEND == "cython"
