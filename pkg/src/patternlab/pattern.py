"""r-point patterns ``x, x + M_1 d, ..., x + M_{r-1} d`` in (F_q^n)^k.

Instances are ordered tuples.  Position ``i`` of an instance carries the
offset matrix ``O_i`` with ``O_0 = 0`` and ``O_i = M_i``.  For a full-rank
pattern every difference ``O_j - O_i`` (i != j) is invertible, so any two
positions determine the whole instance::

    v_t = v_i + (O_t - O_i)(O_j - O_i)^{-1} (v_j - v_i)

Detection and the search module are built on that identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .engine import Space
from .gf import FieldElement, FieldSpec, field_from_json
from .linalg import LinalgError, Matrix, Point, apply_block, inverse

UNCHECKED, FULL_RANK, NOT_FULL_RANK = "unchecked", "full-rank", "not-full-rank"


class PatternError(ValueError):
    pass


class NotFullRankError(PatternError):
    pass


@dataclass(eq=False)
class PatternSpec:
    field: FieldSpec
    k: int
    generators: tuple[Matrix, ...]
    name: Optional[str] = None
    status: str = dc_field(default=UNCHECKED, compare=False)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if len(self.generators) < 2:
            raise PatternError("a pattern needs at least two generators (r >= 3)")
        for M in self.generators:
            if M.field != self.field:
                raise PatternError("generator over a different field")
            if M.k != self.k:
                raise PatternError(f"generator is {M.k}x{M.k}, expected {self.k}x{self.k}")

    @property
    def r(self) -> int:
        return len(self.generators) + 1

    @property
    def offsets(self) -> tuple[Matrix, ...]:
        return (Matrix.zero(self.field, self.k),) + self.generators

    def __eq__(self, other):
        if not isinstance(other, PatternSpec):
            return NotImplemented
        return (self.field, self.k, self.generators) == (other.field, other.k, other.generators)

    def __hash__(self):
        return hash((self.field, self.k, self.generators))

    @cached_property
    def position_maps(self) -> dict[tuple[int, int, int], Matrix]:
        """``(i, j, t) -> (O_t - O_i)(O_j - O_i)^{-1}`` for all distinct i, j."""
        require_full_rank(self)
        O = self.offsets
        maps = {}
        for i in range(self.r):
            for j in range(self.r):
                if i == j:
                    continue
                base = inverse(O[j] - O[i])
                for t in range(self.r):
                    maps[i, j, t] = (O[t] - O[i]) @ base
        return maps

    def to_json(self) -> dict:
        out = {
            "field": self.field.to_json(),
            "k": self.k,
            "generators": [M.to_json() for M in self.generators],
        }
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PatternSpec":
        F = field_from_json(obj["field"])
        k = int(obj["k"])
        gens = tuple(Matrix.from_rows(F, rows) for rows in obj["generators"])
        for M in gens:
            if M.k != k:
                raise PatternError(f"generator is {M.k}x{M.k} but k = {k}")
        return cls(F, k, gens, name=obj.get("name"))


@dataclass(frozen=True)
class PointSet:
    field: FieldSpec
    k: int
    n: int
    members: frozenset[Point]

    def __post_init__(self):
        for pt in self.members:
            if pt.field != self.field or (pt.k, pt.n) != (self.k, self.n):
                raise LinalgError(f"member {pt!r} does not match the set's shape")

    @classmethod
    def of(cls, field: FieldSpec, k: int, n: int, points: Iterable[Point] = ()) -> "PointSet":
        return cls(field, k, n, frozenset(points))

    @classmethod
    def from_indices(cls, space: Space, indices: Iterable[int]) -> "PointSet":
        return cls(space.field, space.k, space.n, frozenset(space.point(int(i)) for i in indices))

    def __len__(self):
        return len(self.members)

    def __contains__(self, pt):
        return pt in self.members

    def __iter__(self):
        return iter(self.sorted())

    def space(self) -> Space:
        return Space(self.field, self.k, self.n)

    def sorted(self) -> list[Point]:
        return sorted(self.members, key=lambda p: p.coords)

    def indices(self) -> np.ndarray:
        sp = self.space()
        if not self.members:
            return np.zeros(0, dtype=np.int64)
        return np.sort(sp.encode(np.array([p.coords for p in self.members], dtype=np.int64)))

    def translate(self, t: Point) -> "PointSet":
        return PointSet(self.field, self.k, self.n, frozenset(p + t for p in self.members))

    def add(self, *points: Point) -> "PointSet":
        return PointSet(self.field, self.k, self.n, self.members | frozenset(points))

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "k": self.k,
            "n": self.n,
            "points": [p.to_json() for p in self.sorted()],
        }

    @classmethod
    def from_json(cls, obj: dict, field: FieldSpec, k: int) -> "PointSet":
        if "field" in obj and field_from_json(obj["field"]) != field:
            raise PatternError("point-set field does not match the pattern's field")
        if "k" in obj and int(obj["k"]) != k:
            raise PatternError("point-set k does not match the pattern's k")
        n = int(obj["n"])
        pts = []
        for raw in obj["points"]:
            if len(raw) != k * n:
                raise PatternError(f"point {raw} needs {k * n} coordinates")
            pts.append(Point.from_flat(field, k, n, raw))
        return cls.of(field, k, n, pts)


@dataclass
class ValidationReport:
    determinants: dict[str, FieldElement]
    full_rank: bool

    def to_json(self) -> dict:
        return {
            "full_rank": self.full_rank,
            "determinants": {key: d.to_json() for key, d in self.determinants.items()},
        }


def validate_full_rank(P: PatternSpec) -> ValidationReport:
    """Determinants of every ``M_i`` and every ``M_i - M_j`` (i > j).

    ``det(M_i)`` is the difference with the zero matrix ``M_0``; keys read
    ``"M1"``, ``"M2"``, ..., then ``"M2-M1"``, ... in that order.
    """
    dets: dict[str, FieldElement] = {}
    for i, M in enumerate(P.generators, start=1):
        dets[f"M{i}"] = M.det()
    for j, i in combinations(range(1, P.r), 2):
        dets[f"M{i}-M{j}"] = (P.generators[i - 1] - P.generators[j - 1]).det()
    ok = all(d.value != 0 for d in dets.values())
    P.status = FULL_RANK if ok else NOT_FULL_RANK
    return ValidationReport(dets, ok)


def require_full_rank(P: PatternSpec):
    if P.status == UNCHECKED:
        validate_full_rank(P)
    if P.status != FULL_RANK:
        raise NotFullRankError("pattern is not full-rank")


@dataclass
class Instance:
    points: tuple[Point, ...]
    d: Point
    trivial: bool

    def to_json(self) -> dict:
        return {
            "points": [p.to_json() for p in self.points],
            "d": self.d.to_json(),
            "trivial": self.trivial,
        }


def _check_shape(P: PatternSpec, *points: Point):
    for pt in points:
        if pt.field != P.field:
            raise LinalgError("point over a different field")
        if pt.k != P.k:
            raise LinalgError(f"point has {pt.k} blocks, pattern has k = {P.k}")
    if len({pt.n for pt in points}) > 1:
        raise LinalgError("points have different n")


def instantiate(P: PatternSpec, x: Point, d: Point) -> Instance:
    _check_shape(P, x, d)
    pts = (x,) + tuple(x + apply_block(M, d) for M in P.generators)
    return Instance(pts, d, d.is_zero())


def is_instance(P: PatternSpec, points: Sequence[Point]) -> bool:
    if len(points) != P.r:
        raise PatternError(f"expected {P.r} points, got {len(points)}")
    _check_shape(P, *points)
    if len(set(points)) != len(points):
        return False
    v1, v2 = points[0], points[1]
    M1 = P.generators[0]
    try:
        M1_inv = inverse(M1)
    except LinalgError:
        # singular M_1: v2 - v1 must still lie in the image of M_1
        return _is_instance_by_search(P, points)
    diff = v2 - v1
    for i in range(3, P.r + 1):
        L = P.generators[i - 2] @ M1_inv
        if points[i - 1] - v1 != apply_block(L, diff):
            return False
    return True


def _is_instance_by_search(P: PatternSpec, points: Sequence[Point]) -> bool:
    v1 = points[0]
    sp = Space(P.field, P.k, v1.n)
    if sp.size > 10**6:
        raise PatternError("singular M_1 on a large space: exhaustive check refused")
    for idx in range(sp.size):
        d = sp.point(idx)
        if instantiate(P, v1, d).points == tuple(points):
            return True
    return False


def _witness(P: PatternSpec, sp: Space, coords: list[np.ndarray]) -> Instance:
    pts = tuple(Point(P.field, P.k, sp.n, tuple(int(c) for c in row)) for row in coords)
    d = apply_block(inverse(P.generators[0]), pts[1] - pts[0])
    return Instance(pts, d, False)


def _completions(P: PatternSpec, sp: Space, v1: np.ndarray, v2: np.ndarray) -> list[np.ndarray]:
    return [v1, v2] + [sp.affine(P.position_maps[0, 1, t], v1, v2) for t in range(2, P.r)]


def _member_mask(sorted_idx: np.ndarray, cand: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(sorted_idx, cand)
    pos = np.minimum(pos, len(sorted_idx) - 1)
    return sorted_idx[pos] == cand


def _scan(P: PatternSpec, A: PointSet, first_only: bool):
    require_full_rank(P)
    if A.field != P.field or A.k != P.k:
        raise LinalgError("point set does not match the pattern")
    idx = A.indices()
    if len(idx) < 2:
        return [] if first_only else 0
    sp = A.space()
    coords = sp.decode(idx)
    total = 0
    for a in range(len(idx)):
        others = np.delete(np.arange(len(idx)), a)
        v2 = coords[others]
        v1 = np.broadcast_to(coords[a], v2.shape)
        comps = _completions(P, sp, v1, v2)
        ok = np.ones(len(others), dtype=bool)
        for t in range(2, P.r):
            ok &= _member_mask(idx, sp.encode(comps[t]))
        if first_only and ok.any():
            b = int(np.argmax(ok))
            return [_witness(P, sp, [c[b] for c in comps])]
        total += int(ok.sum())
    return [] if first_only else total


def find_violation(P: PatternSpec, A: PointSet) -> Optional[Instance]:
    """First instance inside A in lexicographic ``(v_1, v_2)`` order, or None."""
    hits = _scan(P, A, first_only=True)
    return hits[0] if hits else None


def count_instances(P: PatternSpec, A: PointSet) -> int:
    """Number of ordered non-trivial instances with all r points in A."""
    return _scan(P, A, first_only=False)


def all_instances(P: PatternSpec, n: int):
    """Yield every non-trivial instance over ``(x, d != 0)``; brute force."""
    sp = Space(P.field, P.k, n)
    for xi in range(sp.size):
        x = sp.point(xi)
        for di in range(1, sp.size):
            yield instantiate(P, x, sp.point(di))
