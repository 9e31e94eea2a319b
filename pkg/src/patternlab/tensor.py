"""The indicator tensor ``T = prod_{i,j,l} (1 - f_{i,j,l}^(q-1))`` on A^r.

``f_{i,j,l}`` measures how far ``v_i - v_1`` is from
``M_{i-1} M_1^{-1} (v_2 - v_1)`` in block ``j``, component ``l``.  T is only
ever evaluated pointwise; it is never expanded symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .gf import FieldElement, make_field
from .linalg import LinalgError, Matrix, Point, inverse
from .pattern import Instance, PatternError, PatternSpec, PointSet, find_violation, require_full_rank

DEFAULT_BUDGET = 10**6


class BudgetExceeded(RuntimeError):
    pass


class NotAvoidingError(PatternError):
    """The set handed to :func:`check_diagonal` contains a pattern instance."""

    def __init__(self, witness: Instance):
        super().__init__(f"set is not avoiding: instance {witness.points}")
        self.witness = witness


class TensorContext:
    def __init__(self, pattern: PatternSpec, n: int):
        require_full_rank(pattern)
        if n < 1:
            raise LinalgError("n must be >= 1")
        self.pattern = pattern
        self.n = n
        M1_inv = inverse(pattern.generators[0])
        self.ratios: tuple[Matrix, ...] = tuple(M @ M1_inv for M in pattern.generators[1:])
        for L, M in zip(self.ratios, pattern.generators[1:]):
            assert L @ pattern.generators[0] == M

    @property
    def r(self) -> int:
        return self.pattern.r

    def _check_tuple(self, tup: Sequence[Point]):
        if len(tup) != self.r:
            raise PatternError(f"expected {self.r} points, got {len(tup)}")
        P = self.pattern
        for v in tup:
            if v.field != P.field or (v.k, v.n) != (P.k, self.n):
                raise LinalgError(f"point {v!r} does not match the tensor's shape")

    def _f_code(self, tup: Sequence[Point], i: int, j: int, ell: int) -> int:
        F, n, k = self.pattern.field, self.n, self.pattern.k
        L = self.ratios[i - 3]
        pos = (j - 1) * n + (ell - 1)
        v1 = tup[0].coords
        acc = F.sub(tup[i - 1].coords[pos], v1[pos])
        for s in range(k):
            c = L.code(j - 1, s)
            if c:
                d = F.sub(tup[1].coords[s * n + ell - 1], v1[s * n + ell - 1])
                acc = F.sub(acc, F.mul(c, d))
        return acc

    def f_value(self, tup: Sequence[Point], i: int, j: int, ell: int) -> FieldElement:
        """``f_{i,j,l}`` with 1-based indices ``3 <= i <= r``, ``1 <= j <= k``, ``1 <= l <= n``."""
        self._check_tuple(tup)
        if not (3 <= i <= self.r and 1 <= j <= self.pattern.k and 1 <= ell <= self.n):
            raise IndexError(f"f index ({i}, {j}, {ell}) out of range")
        return FieldElement(self.pattern.field, self._f_code(tup, i, j, ell))

    def eval_T(self, tup: Sequence[Point]) -> FieldElement:
        self._check_tuple(tup)
        F = self.pattern.field
        value = 1
        for i in range(3, self.r + 1):
            for j in range(1, self.pattern.k + 1):
                for ell in range(1, self.n + 1):
                    f = self._f_code(tup, i, j, ell)
                    value = F.mul(value, F.sub(1, F.pow(f, F.q - 1)))
                    if not value:
                        return FieldElement(F, 0)
        return FieldElement(F, value)


@dataclass
class DiagonalityReport:
    evaluations: int
    diagonal: bool
    offender: Optional[tuple[Point, ...]] = None

    def to_json(self) -> dict:
        return {
            "evaluations": self.evaluations,
            "diagonal": self.diagonal,
            "offender": [p.to_json() for p in self.offender] if self.offender else None,
        }


def check_diagonal(ctx: TensorContext, A: PointSet, budget: int = DEFAULT_BUDGET) -> DiagonalityReport:
    """Evaluate T on all of A^r; expect 1 on constant tuples and 0 elsewhere."""
    if A.n != ctx.n:
        raise LinalgError(f"set has n = {A.n}, tensor has n = {ctx.n}")
    total = len(A) ** ctx.r
    if total > budget:
        raise BudgetExceeded(f"|A|^r = {total} exceeds the budget of {budget} evaluations")
    witness = find_violation(ctx.pattern, A)
    if witness is not None:
        raise NotAvoidingError(witness)
    pts = A.sorted()
    count = 0
    for tup in itertools.product(pts, repeat=ctx.r):
        count += 1
        expected = int(all(v == tup[0] for v in tup))
        if ctx.eval_T(tup).value != expected:
            return DiagonalityReport(count, False, tuple(tup))
    return DiagonalityReport(count, True)


def slice_example_check() -> bool:
    """xy + xz + yz == x(y + z) + y*z at every point of GF(3)^3."""
    F = make_field(3)
    for x, y, z in itertools.product(F.elements(), repeat=3):
        if x * y + x * z + y * z != x * (y + z) + y * z:
            return False
    return True
