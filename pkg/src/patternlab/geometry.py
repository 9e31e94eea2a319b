"""Planar geometry over F_q: squared distances, spreads and named patterns.

Dot products run over every coordinate of ``(F_q^n)^k``, so for k = 2 the
squared length of ``(m; n)`` is ``m.m + n.n``.
"""

from __future__ import annotations

from typing import Optional

from .gf import FieldElement, FieldSpec
from .linalg import LinalgError, Matrix, Point
from .pattern import PatternError, PatternSpec, validate_full_rank

BUILTINS = ("ap3", "right_isosceles", "rot45", "equilateral")


class ResidueError(PatternError):
    """A square root needed by a constructor does not exist in the field."""


def dot(u: Point, v: Point) -> FieldElement:
    u._check(v)
    F = u.field
    acc = 0
    for a, b in zip(u.coords, v.coords):
        acc = F.add(acc, F.mul(a, b))
    return FieldElement(F, acc)


def sq_dist(u: Point, v: Point) -> FieldElement:
    w = u - v
    return dot(w, w)


def spread(u: Point, v: Point) -> Optional[FieldElement]:
    """``1 - (u.v)^2 / ((u.u)(v.v))``; None when u or v is isotropic (or zero)."""
    uu, vv = dot(u, u), dot(v, v)
    if not uu or not vv:
        return None
    uv = dot(u, v)
    return 1 - uv * uv / (uu * vv)


def is_equilateral(p1: Point, p2: Point, p3: Point) -> bool:
    """Pairwise distinct with equal squared sides.

    A common side of 0 (isotropic displacements) still counts.
    """
    for pt in (p1, p2, p3):
        if pt.k != 2:
            raise LinalgError("equilateral check needs planar points (k = 2)")
    if len({p1, p2, p3}) < 3:
        return False
    return sq_dist(p1, p2) == sq_dist(p1, p3) == sq_dist(p2, p3)


def _root(F: FieldSpec, value: int, root: Optional[int]) -> FieldElement:
    a = F(value)
    if not a:
        raise ResidueError(f"{value} vanishes in {F!r}")
    roots = a.square_roots()
    if not roots:
        raise ResidueError(f"{value} is not a square in {F!r}")
    if root is None:
        return roots[0]
    chosen = F(root)
    if chosen not in roots:
        raise ResidueError(f"{root} is not a square root of {value} in {F!r}")
    return chosen


def builtin_pattern(name: str, field: FieldSpec, root: Optional[int] = None) -> PatternSpec:
    """Named full-rank patterns.

    ``root`` overrides the canonical square root used by ``rot45`` (root of
    2) and ``equilateral`` (root of 3).
    """
    F = field
    I = Matrix.identity(F, 2)
    if name == "ap3":
        P = PatternSpec(F, 1, (Matrix.identity(F, 1), Matrix.from_rows(F, [[2]])), name=name)
    elif name == "right_isosceles":
        P = PatternSpec(F, 2, (I, Matrix.from_rows(F, [[0, -1], [1, 0]])), name=name)
    elif name == "rot45":
        c = _root(F, 2, root) * F(2).inv()
        P = PatternSpec(F, 2, (I, Matrix.from_rows(F, [[c, -c], [c, c]])), name=name)
    elif name == "equilateral":
        a = _root(F, 3, root)
        b = F(2).inv()
        P = PatternSpec(F, 2, (I, Matrix.from_rows(F, [[b, -a * b], [a * b, b]])), name=name)
    else:
        raise PatternError(f"unknown builtin pattern {name!r}; choose from {BUILTINS}")
    report = validate_full_rank(P)
    if not report.full_rank:
        raise PatternError(f"{name} is not full-rank over {F!r}")
    return P
