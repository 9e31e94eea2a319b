"""k x k matrices over GF(q) and their block action on (F_q^n)^k.

A :class:`Point` of ``(F_q^n)^k`` is stored flat, block-major: coordinate
``j * n + l`` is component ``l`` of block ``j``.  Every other module relies on
this order (it is also the order used in point-set files).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .gf import FieldElement, FieldError, FieldSpec


class LinalgError(ValueError):
    pass


class SingularMatrixError(LinalgError):
    pass


@dataclass(frozen=True)
class Matrix:
    """Dense k x k matrix; ``entries`` holds element codes in row-major order."""

    field: FieldSpec
    k: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise LinalgError("matrix dimension must be >= 1")
        if len(self.entries) != self.k * self.k:
            raise LinalgError(f"expected {self.k * self.k} entries, got {len(self.entries)}")
        if any(not 0 <= e < self.field.q for e in self.entries):
            raise LinalgError("entry out of range")

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence]) -> "Matrix":
        """Rows may hold ints (reduced mod p in prime fields), coefficient
        lists, or :class:`FieldElement` values."""
        k = len(rows)
        if any(len(r) != k for r in rows):
            raise LinalgError("matrix must be square")
        return cls(field, k, tuple(field(x).value for row in rows for x in row))

    @classmethod
    def identity(cls, field: FieldSpec, k: int) -> "Matrix":
        return cls(field, k, tuple(int(i == j) for i in range(k) for j in range(k)))

    @classmethod
    def zero(cls, field: FieldSpec, k: int) -> "Matrix":
        return cls(field, k, (0,) * (k * k))

    def __getitem__(self, ij: tuple[int, int]) -> FieldElement:
        i, j = ij
        return FieldElement(self.field, self.entries[i * self.k + j])

    def code(self, i: int, j: int) -> int:
        return self.entries[i * self.k + j]

    @property
    def rows(self) -> list[list[FieldElement]]:
        return [[self[i, j] for j in range(self.k)] for i in range(self.k)]

    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise LinalgError("expected a Matrix")
        if other.field != self.field:
            raise FieldError("field mismatch")
        if other.k != self.k:
            raise LinalgError(f"dimension mismatch: {self.k} vs {other.k}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        F = self.field
        return Matrix(F, self.k, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        F = self.field
        return Matrix(F, self.k, tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.k, tuple(self.field.neg(a) for a in self.entries))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        F, k = self.field, self.k
        out = []
        for i in range(k):
            for j in range(k):
                acc = 0
                for s in range(k):
                    acc = F.add(acc, F.mul(self.code(i, s), other.code(s, j)))
                out.append(acc)
        return Matrix(F, k, tuple(out))

    def scale(self, c: FieldElement | int) -> "Matrix":
        c = self.field(c).value
        return Matrix(self.field, self.k, tuple(self.field.mul(c, a) for a in self.entries))

    def det(self) -> FieldElement:
        return det(self)

    def inverse(self) -> "Matrix":
        return inverse(self)

    def to_json(self) -> list:
        return [[x.to_json() for x in row] for row in self.rows]

    def __repr__(self):
        body = "; ".join(" ".join(str(x.to_json()) for x in row) for row in self.rows)
        return f"Matrix({self.field!r}, ({body}))"


def _eliminate(M: Matrix, augment: bool):
    """Gauss-Jordan on [M | I]; returns (det code, inverse rows or None)."""
    F, k = M.field, M.k
    rows = [
        [M.code(i, j) for j in range(k)] + ([int(i == j) for j in range(k)] if augment else [])
        for i in range(k)
    ]
    det = 1
    for col in range(k):
        pivot = next((r for r in range(col, k) if rows[r][col]), None)
        if pivot is None:
            return 0, None
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = F.neg(det)
        pv = rows[col][col]
        det = F.mul(det, pv)
        pinv = F.inv(pv)
        rows[col] = [F.mul(pinv, x) for x in rows[col]]
        for r in range(k):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[col])]
    return det, [row[k:] for row in rows] if augment else None


def det(M: Matrix) -> FieldElement:
    """Determinant by Gaussian elimination over the field."""
    return FieldElement(M.field, _eliminate(M, augment=False)[0])


def inverse(M: Matrix) -> Matrix:
    d, inv_rows = _eliminate(M, augment=True)
    if not d:
        raise SingularMatrixError(f"matrix is singular: {M!r}")
    return Matrix(M.field, M.k, tuple(x for row in inv_rows for x in row))


def mat_op(M: Matrix, N: Matrix, kind: str) -> Matrix:
    if kind == "mul":
        return M @ N
    if kind == "sub":
        return M - N
    raise LinalgError(f"unknown matrix operation {kind!r}")


@dataclass(frozen=True)
class Point:
    """Element of ``(F_q^n)^k``; ``coords`` are element codes, block-major."""

    field: FieldSpec
    k: int
    n: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise LinalgError("k and n must be >= 1")
        if len(self.coords) != self.k * self.n:
            raise LinalgError(
                f"point needs {self.k * self.n} coordinates, got {len(self.coords)}"
            )

    @classmethod
    def from_blocks(cls, field: FieldSpec, blocks: Sequence[Sequence]) -> "Point":
        k, n = len(blocks), len(blocks[0]) if blocks else 0
        if any(len(b) != n for b in blocks):
            raise LinalgError("all blocks must have the same length")
        return cls(field, k, n, tuple(field(x).value for b in blocks for x in b))

    @classmethod
    def from_flat(cls, field: FieldSpec, k: int, n: int, values: Iterable) -> "Point":
        return cls(field, k, n, tuple(field(x).value for x in values))

    @classmethod
    def zero(cls, field: FieldSpec, k: int, n: int) -> "Point":
        return cls(field, k, n, (0,) * (k * n))

    @property
    def blocks(self) -> list[list[FieldElement]]:
        F, n = self.field, self.n
        return [
            [FieldElement(F, c) for c in self.coords[j * n:(j + 1) * n]] for j in range(self.k)
        ]

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "Point"):
        if not isinstance(other, Point):
            raise LinalgError("expected a Point")
        if other.field != self.field:
            raise FieldError("field mismatch")
        if (other.k, other.n) != (self.k, self.n):
            raise LinalgError(f"shape mismatch: {(self.k, self.n)} vs {(other.k, other.n)}")

    def __add__(self, other: "Point") -> "Point":
        self._check(other)
        F = self.field
        return Point(F, self.k, self.n, tuple(F.add(a, b) for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Point") -> "Point":
        self._check(other)
        F = self.field
        return Point(F, self.k, self.n, tuple(F.sub(a, b) for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "Point":
        c = self.field(c).value
        return Point(self.field, self.k, self.n, tuple(self.field.mul(c, a) for a in self.coords))

    def to_json(self) -> list:
        if self.field.m == 1:
            return list(self.coords)
        return [list(self.field.coeffs_of(c)) for c in self.coords]

    def __repr__(self):
        inner = " | ".join(
            ",".join(str(x.to_json()) for x in block) for block in self.blocks
        )
        return f"Point({inner})"


def apply_block(M: Matrix, x: Point) -> Point:
    """Block action: output block j, component l is sum_s M[j, s] * x^(s)(l)."""
    if M.field != x.field:
        raise FieldError("field mismatch")
    if M.k != x.k:
        raise LinalgError(f"matrix is {M.k}x{M.k} but point has {x.k} blocks")
    F, k, n = M.field, M.k, x.n
    out = []
    for j in range(k):
        for ell in range(n):
            acc = 0
            for s in range(k):
                m = M.code(j, s)
                if m:
                    acc = F.add(acc, F.mul(m, x.coords[s * n + ell]))
            out.append(acc)
    return Point(F, k, n, tuple(out))
