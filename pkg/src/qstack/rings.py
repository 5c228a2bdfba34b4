"""Scalar rings and dense matrices over them.

Three rings are supported: prime fields ``F_p`` (exact, stored as int64
residues), the rationals (exact, ``fractions.Fraction`` in object arrays)
and 64-bit floats (comparisons within a tolerance).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class RingError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class Ring:
    """Base class; subclasses fix dtype, normalization and equality."""

    name: str = "ring"
    exact: bool = True
    dtype: object = object

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def coerce(self, x):
        raise NotImplementedError

    def array(self, rows) -> np.ndarray:
        arr = np.array(rows, dtype=object)
        out = np.empty(arr.shape, dtype=self.dtype)
        flat_in = arr.reshape(-1)
        flat_out = out.reshape(-1)
        for k, x in enumerate(flat_in):
            flat_out[k] = self.coerce(x)
        return self.normalize(out)

    def zeros(self, r: int, c: int) -> np.ndarray:
        if self.dtype is object:
            out = np.empty((r, c), dtype=object)
            out.fill(self.coerce(0))
            return out
        return np.zeros((r, c), dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.coerce(1)
        return out

    def arrays_equal(self, a: np.ndarray, b: np.ndarray, tol: float = 0.0) -> bool:
        return a.shape == b.shape and bool(np.all(a == b))

    def residual(self, a: np.ndarray, b: np.ndarray) -> float:
        """Frobenius norm of ``a - b`` as a float (0.0 for equal exact arrays)."""
        d = self.normalize(a - b)
        if d.size == 0:
            return 0.0
        if self.dtype is object:
            return float(sum(abs(Fraction(x)) ** 2 for x in d.reshape(-1))) ** 0.5
        return float(np.linalg.norm(d.astype(np.float64)))

    def inverse(self, a: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def random_array(self, rng: np.random.Generator, r: int, c: int) -> np.ndarray:
        raise NotImplementedError

    def encode(self, x):
        raise NotImplementedError

    def decode(self, x):
        return self.coerce(x)

    def to_json(self) -> dict:
        raise NotImplementedError


def _gauss_jordan_inverse(ring: Ring, a: np.ndarray, div) -> np.ndarray:
    n = a.shape[0]
    if a.shape != (n, n):
        raise RingError(f"cannot invert non-square {a.shape} matrix")
    m = np.concatenate([a.copy(), ring.eye(n)], axis=1)
    for col in range(n):
        pivot = None
        for row in range(col, n):
            if m[row, col] != 0:
                pivot = row
                break
        if pivot is None:
            raise RingError("matrix is singular")
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
        m[col] = ring.normalize(div(m[col], m[col, col]))
        for row in range(n):
            if row != col and m[row, col] != 0:
                m[row] = ring.normalize(m[row] - m[row, col] * m[col])
    return m[:, n:]


class PrimeField(Ring):
    exact = True
    dtype = np.int64

    def __init__(self, p: int):
        if int(p) != p:
            raise RingError(f"F_p requires an integer modulus, got {p!r}")
        p = int(p)
        if not (2 <= p <= 64 and _is_prime(p)):
            raise RingError(f"F_p requires a prime 2 <= p <= 64, got {p}")
        self.p = p
        self.name = f"F{p}"

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("F", self.p))

    def normalize(self, arr):
        return np.mod(arr, self.p)

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, (float, np.floating)) and not float(x).is_integer():
            raise RingError(f"{x!r} is not an element of F_{self.p}")
        return int(x) % self.p

    def inv_scalar(self, x: int) -> int:
        x = int(x) % self.p
        if x == 0:
            raise RingError("0 has no inverse")
        return pow(x, -1, self.p)

    def inverse(self, a):
        return _gauss_jordan_inverse(self, a.astype(np.int64), lambda row, piv: row * self.inv_scalar(piv))

    def random_array(self, rng, r, c):
        return rng.integers(0, self.p, size=(r, c), dtype=np.int64)

    def encode(self, x):
        return int(x)

    def to_json(self):
        return {"ring": "Fp", "p": self.p}


class Rationals(Ring):
    name = "Q"
    exact = True
    dtype = object

    def __repr__(self) -> str:
        return "Rationals()"

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Q")

    def coerce(self, x) -> Fraction:
        if isinstance(x, str):
            return Fraction(x)
        if isinstance(x, (np.integer,)):
            return Fraction(int(x))
        return Fraction(x)

    def inv_scalar(self, x) -> Fraction:
        if x == 0:
            raise RingError("0 has no inverse")
        return 1 / Fraction(x)

    def inverse(self, a):
        return _gauss_jordan_inverse(self, a, lambda row, piv: row * (1 / piv))

    def random_array(self, rng, r, c, height: int = 5):
        num = rng.integers(-height, height + 1, size=(r, c))
        den = rng.integers(1, height + 1, size=(r, c))
        out = np.empty((r, c), dtype=object)
        for i in range(r):
            for j in range(c):
                out[i, j] = Fraction(int(num[i, j]), int(den[i, j]))
        return out

    def encode(self, x) -> str:
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def to_json(self):
        return {"ring": "Q"}


class Floats(Ring):
    name = "R"
    exact = False
    dtype = np.float64

    def __init__(self, tol: float = 1e-9):
        self.tol = float(tol)

    def __repr__(self) -> str:
        return f"Floats(tol={self.tol})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Floats)

    def __hash__(self) -> int:
        return hash("R")

    def coerce(self, x) -> float:
        return float(x)

    def arrays_equal(self, a, b, tol=None):
        if a.shape != b.shape:
            return False
        if a.size == 0:
            return True
        return float(np.linalg.norm(a - b)) <= (self.tol if tol is None else tol)

    def inv_scalar(self, x) -> float:
        if x == 0:
            raise RingError("0 has no inverse")
        return 1.0 / x

    def inverse(self, a):
        if a.shape[0] == 0:
            return a.copy()
        if np.linalg.matrix_rank(a) < a.shape[0]:
            raise RingError("matrix is singular")
        return np.linalg.inv(a)

    def random_array(self, rng, r, c):
        return rng.standard_normal((r, c))

    def encode(self, x) -> float:
        return float(x)

    def to_json(self):
        return {"ring": "R", "tol": self.tol}


QQ = Rationals()


def ring_from_json(obj: dict) -> Ring:
    kind = obj.get("ring")
    if kind == "Fp":
        return PrimeField(obj["p"])
    if kind == "Q":
        return QQ
    if kind == "R":
        return Floats(obj.get("tol", 1e-9))
    raise RingError(f"unknown ring {obj!r}")


@dataclass(frozen=True, eq=False)
class Matrix:
    """Dense row-major matrix over a :class:`Ring`; ``rows x cols`` may be zero."""

    ring: Ring
    data: np.ndarray

    def __post_init__(self):
        if self.data.ndim != 2:
            raise RingError("matrix data must be two-dimensional")
        self.data.setflags(write=False)

    @classmethod
    def of(cls, ring: Ring, rows: Sequence[Sequence], shape: tuple[int, int] | None = None) -> "Matrix":
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return cls.zeros(ring, *shape)
        arr = ring.array(rows)
        if arr.ndim != 2:
            raise RingError("matrix rows must be a rectangular nested list")
        return cls(ring, arr)

    @classmethod
    def zeros(cls, ring: Ring, r: int, c: int) -> "Matrix":
        return cls(ring, ring.zeros(r, c))

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls(ring, ring.eye(n))

    @classmethod
    def random(cls, ring: Ring, rng: np.random.Generator, r: int, c: int) -> "Matrix":
        return cls(ring, ring.random_array(rng, r, c))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def _check(self, other: "Matrix") -> None:
        if self.ring != other.ring:
            raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise RingError(f"cannot multiply {self.shape} by {other.shape}")
        if self.data.dtype == object:
            out = self.ring.zeros(self.rows, other.cols)
            if self.cols:
                out = self.data @ other.data
        else:
            out = self.data @ other.data
        return Matrix(self.ring, self.ring.normalize(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise RingError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(self.ring, self.ring.normalize(self.data + other.data))

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, self.ring.normalize(-self.data))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, lam) -> "Matrix":
        lam = self.ring.coerce(lam)
        return Matrix(self.ring, self.ring.normalize(self.data * lam))

    def kron(self, other: "Matrix") -> "Matrix":
        self._check(other)
        r, c = self.rows * other.rows, self.cols * other.cols
        if r == 0 or c == 0:
            return Matrix.zeros(self.ring, r, c)
        return Matrix(self.ring, self.ring.normalize(np.kron(self.data, other.data)))

    def block_diag(self, other: "Matrix") -> "Matrix":
        self._check(other)
        out = self.ring.zeros(self.rows + other.rows, self.cols + other.cols)
        out[: self.rows, : self.cols] = self.data
        out[self.rows :, self.cols :] = other.data
        return Matrix(self.ring, out)

    def inverse(self) -> "Matrix":
        return Matrix(self.ring, self.ring.normalize(self.ring.inverse(self.data)))

    def is_invertible(self) -> bool:
        if self.rows != self.cols:
            return False
        try:
            self.ring.inverse(self.data)
        except RingError:
            return False
        return True

    def is_zero(self, tol: float | None = None) -> bool:
        return self.ring.arrays_equal(self.data, self.ring.zeros(*self.shape), *(() if tol is None else (tol,)))

    def equals(self, other: "Matrix", tol: float | None = None) -> bool:
        self._check(other)
        if tol is None:
            return self.ring.arrays_equal(self.data, other.data)
        return self.ring.arrays_equal(self.data, other.data, tol)

    def distance(self, other: "Matrix") -> float:
        return self.ring.residual(self.data, other.data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix) or self.ring != other.ring or self.shape != other.shape:
            return False
        return bool(np.all(self.data == other.data))

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        return (self.shape, tuple(self.data.reshape(-1).tolist()))

    def tolist(self) -> list[list]:
        return [[self.data[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def to_json(self) -> list[list]:
        return [[self.ring.encode(x) for x in row] for row in self.tolist()]

    @classmethod
    def from_json(cls, ring: Ring, rows: list, shape: tuple[int, int] | None = None) -> "Matrix":
        if shape is not None and (shape[0] == 0 or shape[1] == 0):
            return cls.zeros(ring, *shape)
        if not rows:
            return cls.zeros(ring, 0, 0 if shape is None else shape[1])
        return cls(ring, ring.array([[ring.decode(x) for x in row] for row in rows]))

    def __repr__(self) -> str:
        return f"Matrix({self.ring.name}, {self.shape}, {self.tolist()!r})"


def gl_order(d: int, p: int) -> int:
    """|GL_d(F_p)| = prod_{i<d} (p^d - p^i)."""
    out = 1
    for i in range(d):
        out *= p**d - p**i
    return out


def all_matrices(field: PrimeField, r: int, c: int) -> Iterable[Matrix]:
    """Every ``r x c`` matrix over ``field`` in row-major lexicographic order."""
    import itertools

    for entries in itertools.product(range(field.p), repeat=r * c):
        yield Matrix(field, np.array(entries, dtype=np.int64).reshape(r, c))
