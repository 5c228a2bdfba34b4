"""Compare the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each row reports the best-of-N wall time per backend and the speedup, and
checks that both backends return identical results.
"""
from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from qstack import _pykernels as pure
from qstack import kernels
from qstack.reps import _search_order, compile_constraints
from qstack.simplicial import square, standard_simplex


def cases():
    rng = np.random.default_rng(0)
    a = rng.integers(0, 61, (60, 60), dtype=np.int64)
    b = rng.integers(0, 61, (60, 60), dtype=np.int64)
    yield "matmul_mod 60x60 F61", "matmul_mod", (a, b, 61)

    for label, shape, dims, p in [
        ("count square F2 dims 2", square(), {v: 2 for v in square().vertices}, 2),
        ("count 2-simplex F3 dims 2", standard_simplex(2), {"0": 2, "1": 2, "2": 2}, 3),
    ]:
        system = compile_constraints(shape, dims, _search_order(shape))
        yield label, "count_solutions", (*system.kernel_args(), p)

    yield "coherence sweep 3-simplex F2 (2,2,2,1)", "coherence_sweep", (3, (2, 2, 2, 1), 2)
    yield "coherence sweep 3-simplex F2 (2,2,2,2)", "coherence_sweep", (3, (2, 2, 2, 2), 2)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if kernels.compiled is None:
        print("compiled extension not available; build with `pip install --no-build-isolation -e .`", file=sys.stderr)
        return 1
    print(f"{'case':42} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for label, name, call_args in cases():
        fast, slow = getattr(kernels.compiled, name), getattr(pure, name)
        r_fast, r_slow = fast(*call_args), slow(*call_args)
        same = np.array_equal(r_fast, r_slow) if isinstance(r_fast, np.ndarray) else r_fast == r_slow
        if not same:
            print(f"{label}: backends disagree ({r_fast} vs {r_slow})", file=sys.stderr)
            return 1
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat))
        print(f"{label:42} {t_fast:10.4f} {t_slow:10.4f} {t_slow / max(t_fast, 1e-9):7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
