"""Exact dense linear algebra over prime fields F_p.

Every other module computes through the operations here.  Matrices are
dense int64 numpy arrays with entries kept in [0, p); all arithmetic
reduces mod p before any intermediate value can reach 2**63, so results
are exact for any prime p < 2**31.  No floating point anywhere.

Conventions fixed once for the whole package:
  * zero-row and zero-column matrices are first class citizens;
  * solvers make deterministic canonical choices (free variables zeroed,
    cokernel coordinates complementary to pivot rows), so every
    downstream coordinate system is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch, NotSquare

_PRIME_CACHE: set[int] = set()


def validate_prime(p: int) -> int:
    """Check by trial division that p is a prime with 2 <= p < 2**31."""
    p = int(p)
    if p in _PRIME_CACHE:
        return p
    if p < 2 or p >= 2**31:
        raise ValueError(f"modulus must satisfy 2 <= p < 2**31, got {p}")
    if p % 2 == 0:
        if p != 2:
            raise ValueError(f"modulus {p} is not prime")
    else:
        d = 3
        while d * d <= p:
            if p % d == 0:
                raise ValueError(f"modulus {p} is not prime")
            d += 2
    _PRIME_CACHE.add(p)
    return p


@dataclass(frozen=True)
class FpScalar:
    """A residue in [0, p) over a verified prime modulus."""

    value: int
    p: int

    def __post_init__(self):
        validate_prime(self.p)
        if not 0 <= self.value < self.p:
            raise ValueError(f"residue {self.value} outside [0, {self.p})")

    def __add__(self, other: "FpScalar") -> "FpScalar":
        self._check(other)
        return FpScalar((self.value + other.value) % self.p, self.p)

    def __mul__(self, other: "FpScalar") -> "FpScalar":
        self._check(other)
        return FpScalar((self.value * other.value) % self.p, self.p)

    def __neg__(self) -> "FpScalar":
        return FpScalar((-self.value) % self.p, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse")
        return FpScalar(pow(self.value, self.p - 2, self.p), self.p)

    def _check(self, other: "FpScalar") -> None:
        if self.p != other.p:
            raise ValueError(f"mixed moduli {self.p} and {other.p}")


def _mul_chunk(p: int) -> int:
    # largest inner-dimension block whose accumulated products stay below 2**63
    return max(1, (2**62) // max(1, (p - 1) ** 2))


class FpMatrix:
    """Immutable dense matrix over F_p."""

    __slots__ = ("p", "array")

    def __init__(self, p: int, data):
        validate_prime(p)
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr = np.remainder(arr, p)
        arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "array", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FpMatrix is immutable")

    # --- constructors ---

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(p, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, np.eye(n, dtype=np.int64))

    @classmethod
    def from_flat(cls, p: int, rows: int, cols: int, entries: Sequence[int]) -> "FpMatrix":
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        return cls(p, np.array(entries, dtype=np.int64).reshape(rows, cols))

    # --- shape ---

    @property
    def rows(self) -> int:
        return self.array.shape[0]

    @property
    def cols(self) -> int:
        return self.array.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.array.shape

    @property
    def is_zero(self) -> bool:
        return not self.array.any()

    # --- arithmetic ---

    def _check_p(self, other: "FpMatrix") -> None:
        if self.p != other.p:
            raise ValueError(f"mixed moduli {self.p} and {other.p}")

    def __add__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_p(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"add {self.shape} vs {other.shape}")
        return FpMatrix(self.p, (self.array + other.array) % self.p)

    def __sub__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_p(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"sub {self.shape} vs {other.shape}")
        return FpMatrix(self.p, (self.array - other.array) % self.p)

    def __neg__(self) -> "FpMatrix":
        return FpMatrix(self.p, (-self.array) % self.p)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        self._check_p(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"matmul {self.shape} @ {other.shape}")
        inner = self.cols
        if inner == 0:
            return FpMatrix.zeros(self.p, self.rows, other.cols)
        step = _mul_chunk(self.p)
        if inner <= step:
            return FpMatrix(self.p, (self.array @ other.array) % self.p)
        acc = np.zeros((self.rows, other.cols), dtype=np.int64)
        for lo in range(0, inner, step):
            hi = lo + step
            acc = (acc + self.array[:, lo:hi] @ other.array[lo:hi, :]) % self.p
        return FpMatrix(self.p, acc)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, (self.array * (int(c) % self.p)) % self.p)

    def transpose(self) -> "FpMatrix":
        return FpMatrix(self.p, self.array.T)

    # --- access / conversion ---

    def entry(self, i: int, j: int) -> int:
        return int(self.array[i, j])

    def scalar(self, i: int, j: int) -> FpScalar:
        return FpScalar(int(self.array[i, j]), self.p)

    def to_flat_list(self) -> list[int]:
        return [int(v) for v in self.array.reshape(-1)]

    def to_rows(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.array]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.p == other.p and self.shape == other.shape and bool(
            np.array_equal(self.array, other.array)
        )

    def __hash__(self) -> int:
        return hash((self.p, self.shape, self.array.tobytes()))

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, shape={self.shape})"


def hstack(blocks: Sequence[FpMatrix]) -> FpMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("hstack of no blocks")
    p = blocks[0].p
    rows = blocks[0].rows
    for b in blocks:
        if b.p != p or b.rows != rows:
            raise DimensionMismatch("hstack blocks disagree")
    return FpMatrix(p, np.hstack([b.array for b in blocks]))


def vstack(blocks: Sequence[FpMatrix]) -> FpMatrix:
    blocks = list(blocks)
    if not blocks:
        raise ValueError("vstack of no blocks")
    p = blocks[0].p
    cols = blocks[0].cols
    for b in blocks:
        if b.p != p or b.cols != cols:
            raise DimensionMismatch("vstack blocks disagree")
    return FpMatrix(p, np.vstack([b.array for b in blocks]))


def block_diag(p: int, blocks: Sequence[FpMatrix]) -> FpMatrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        if b.p != p:
            raise ValueError("block with wrong modulus")
        out[r : r + b.rows, c : c + b.cols] = b.array
        r += b.rows
        c += b.cols
    return FpMatrix(p, out)


class RrefResult(NamedTuple):
    reduced: FpMatrix
    pivot_columns: tuple[int, ...]
    rank: int


def rref(m: FpMatrix) -> RrefResult:
    """Reduced row echelon form over F_p (Gauss-Jordan, exact).

    Returns (reduced, pivot_columns, rank).  The reduced form is the
    unique RREF of m; pivot columns are strictly increasing.
    """
    p = m.p
    a = m.array.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        rest = np.nonzero(a[:, c])[0]
        rest = rest[rest != r]
        if rest.size:
            a[rest] = (a[rest] - np.outer(a[rest, c], a[r])) % p
        pivots.append(c)
        r += 1
    return RrefResult(FpMatrix(p, a), tuple(pivots), len(pivots))


def rank(m: FpMatrix) -> int:
    return rref(m).rank


def kernel_basis(m: FpMatrix) -> FpMatrix:
    """Columns form a basis of {v : m v = 0}; column count = cols - rank.

    Basis vectors are indexed by the free (non-pivot) columns in
    increasing order, with the free coordinate set to 1.
    """
    reduced, pivots, rk = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(m.cols) if c not in pivot_set]
    out = np.zeros((m.cols, len(free)), dtype=np.int64)
    red = reduced.array
    for k, c in enumerate(free):
        out[c, k] = 1
        for r_i, pc in enumerate(pivots):
            out[pc, k] = (-red[r_i, c]) % m.p
    return FpMatrix(m.p, out)


def solve_right(a: FpMatrix, b: FpMatrix) -> Optional[FpMatrix]:
    """Return some x with a x = b, or None when the system is inconsistent.

    Deterministic choice: free variables are set to 0 after row
    reduction of the augmented matrix.  Raises DimensionMismatch when
    the row counts differ.
    """
    if a.p != b.p:
        raise ValueError(f"mixed moduli {a.p} and {b.p}")
    if a.rows != b.rows:
        raise DimensionMismatch(f"solve_right rows {a.rows} vs {b.rows}")
    aug = FpMatrix(a.p, np.hstack([a.array, b.array]))
    reduced, pivots, rk = rref(aug)
    for pc in pivots:
        if pc >= a.cols:
            return None
    out = np.zeros((a.cols, b.cols), dtype=np.int64)
    red = reduced.array
    for r_i, pc in enumerate(pivots):
        out[pc, :] = red[r_i, a.cols :]
    return FpMatrix(a.p, out)


def cokernel_projection(m: FpMatrix) -> tuple[FpMatrix, int]:
    """Canonical projection of F_p^rows onto the cokernel of m.

    Returns (proj, dim) where proj is surjective of shape (dim, rows),
    its kernel is exactly the column space of m, and dim = rows - rank.
    The quotient coordinates are the positions complementary to the
    pivot rows of the column space (RREF of m transposed), so the choice
    is deterministic.
    """
    reduced, pivots, rk = rref(m.transpose())
    pivot_set = set(pivots)
    nonpiv = [i for i in range(m.rows) if i not in pivot_set]
    dim = m.rows - rk
    out = np.zeros((dim, m.rows), dtype=np.int64)
    red = reduced.array
    for k, j in enumerate(nonpiv):
        out[k, j] = 1
        for r_i, pc in enumerate(pivots):
            out[k, pc] = (-red[r_i, j]) % m.p
    return FpMatrix(m.p, out), dim


def invert(m: FpMatrix) -> Optional[FpMatrix]:
    """Return the inverse of m, or None when m is singular.

    Raises NotSquare for rectangular input.
    """
    if m.rows != m.cols:
        raise NotSquare(f"invert called on shape {m.shape}")
    n = m.rows
    aug = FpMatrix(m.p, np.hstack([m.array, np.eye(n, dtype=np.int64)]))
    reduced, pivots, rk = rref(aug)
    if pivots != tuple(range(n)):
        return None
    return FpMatrix(m.p, reduced.array[:, n:])
