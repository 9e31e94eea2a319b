"""Vectorised field tables and integer point encoding.

Points of ``(F_q^n)^k`` are encoded as integers in ``[0, q**(k*n))`` with the
first flat coordinate most significant, so integer order is lexicographic
order on the block-major coordinate tuple.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .gf import FieldSpec
from .linalg import LinalgError, Matrix, Point

TABLE_LIMIT = 2048
INDEX_LIMIT = 1 << 62


@lru_cache(maxsize=32)
def field_tables(field: FieldSpec) -> "FieldTables":
    return FieldTables(field)


class FieldTables:
    """Dense add/sub/mul tables over element codes."""

    def __init__(self, field: FieldSpec):
        if field.q > TABLE_LIMIT:
            raise ValueError(f"vectorised tables limited to q <= {TABLE_LIMIT}")
        self.field = field
        q, p = field.q, field.p
        codes = np.arange(q, dtype=np.int64)
        if field.m == 1:
            self.add = (codes[:, None] + codes[None, :]) % p
            self.sub = (codes[:, None] - codes[None, :]) % p
            self.mul = (codes[:, None] * codes[None, :]) % p
        else:
            digits = np.stack([(codes // p**i) % p for i in range(field.m)], axis=-1)
            weights = p ** np.arange(field.m, dtype=np.int64)
            self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
            self.sub = ((digits[:, None, :] - digits[None, :, :]) % p) @ weights
            log, exp = field._log_tables
            log = np.asarray(log, dtype=np.int64)
            exp = np.asarray(exp, dtype=np.int64)
            self.mul = exp[(log[:, None] + log[None, :]) % (q - 1)]
            self.mul[0, :] = 0
            self.mul[:, 0] = 0
        self.neg = self.sub[0]


class Space:
    """The ambient set ``(F_q^n)^k`` with integer encoding of its points."""

    def __init__(self, field: FieldSpec, k: int, n: int):
        if k < 1 or n < 1:
            raise LinalgError("k and n must be >= 1")
        self.field, self.k, self.n = field, k, n
        self.dim = k * n
        self.size = field.q**self.dim
        if self.size > INDEX_LIMIT:
            raise ValueError("space too large for integer point encoding")
        self.tables = field_tables(field)
        self.weights = field.q ** np.arange(self.dim - 1, -1, -1, dtype=np.int64)

    def encode(self, coords: np.ndarray) -> np.ndarray:
        return np.asarray(coords, dtype=np.int64) @ self.weights

    def decode(self, idx) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        return (idx[..., None] // self.weights) % self.field.q

    def index_of(self, pt: Point) -> int:
        self.check_point(pt)
        out = 0
        for c in pt.coords:
            out = out * self.field.q + c
        return out

    def point(self, idx: int) -> Point:
        return Point(self.field, self.k, self.n, tuple(int(c) for c in self.decode(idx)))

    def check_point(self, pt: Point):
        if pt.field != self.field or (pt.k, pt.n) != (self.k, self.n):
            raise LinalgError(
                f"point in {pt.field!r}^({pt.n})x{pt.k} does not match "
                f"{self.field!r}^({self.n})x{self.k}"
            )

    def all_coords(self) -> np.ndarray:
        return self.decode(np.arange(self.size, dtype=np.int64))

    # coordinate-array arithmetic, arrays shaped (..., dim)

    def add(self, a, b):
        return self.tables.add[a, b]

    def sub(self, a, b):
        return self.tables.sub[a, b]

    def apply(self, M: Matrix, x: np.ndarray) -> np.ndarray:
        """Block action of M on an array of flat coordinate rows."""
        t, k, n = self.tables, self.k, self.n
        x = np.asarray(x, dtype=np.int64)
        out = np.zeros_like(x)
        for j in range(k):
            for s in range(k):
                m = M.code(j, s)
                if m:
                    out[..., j * n:(j + 1) * n] = t.add[
                        out[..., j * n:(j + 1) * n], t.mul[m, x[..., s * n:(s + 1) * n]]
                    ]
        return out

    def affine(self, L: Matrix, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a + L (b - a)`` row-wise."""
        return self.add(a, self.apply(L, self.sub(b, a)))
