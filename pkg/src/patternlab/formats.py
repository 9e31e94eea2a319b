"""JSON documents read and written by the CLI.

Field:        {"p": int, "m": int, "modulus": [int, ...]}   (modulus only for m > 1)
Pattern spec: {"field": {...}, "k": int, "generators": [matrix, ...]}
Point set:    {"n": int, "points": [[coord, ...], ...]}      (block-major order)

Elements are integers for prime fields and coefficient lists otherwise.
Reports carry ``schema_version`` and ``kind``.
"""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Optional

from .gf import FieldSpec, field_of_order
from .geometry import BUILTINS, builtin_pattern
from .linalg import Point
from .pattern import PatternError, PatternSpec, PointSet

SCHEMA_VERSION = 1


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def report(kind: str, body: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "kind": kind, **body}


def load_json(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str | Path, doc: dict):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def load_pattern(source: str, q: Optional[int] = None, root: Optional[int] = None) -> PatternSpec:
    """A builtin name (needs ``q``) or the path of a pattern-spec file."""
    if source in BUILTINS:
        if q is None:
            raise PatternError(f"builtin pattern {source!r} needs --q")
        return builtin_pattern(source, field_of_order(q), root=root)
    doc = load_json(source)
    P = PatternSpec.from_json(doc)
    if q is not None and P.field.q != q:
        raise PatternError(f"pattern file is over GF({P.field.q}) but --q {q} was given")
    return P


_INT = re.compile(r"-?\d+")


def parse_inline_points(text: str, field: FieldSpec, k: int, n: int) -> PointSet:
    """``"{0,1,2}"`` style lists for prime fields: integers are read in order
    and grouped into points of k*n coordinates; separators are free-form."""
    if field.m != 1:
        raise PatternError("inline point lists are only supported over prime fields")
    values = [int(v) for v in _INT.findall(text)]
    dim = k * n
    if len(values) % dim:
        raise PatternError(f"{len(values)} integers do not split into points of {dim} coordinates")
    pts = [Point.from_flat(field, k, n, values[i:i + dim]) for i in range(0, len(values), dim)]
    return PointSet.of(field, k, n, pts)


def load_point_set(source: str, pattern: PatternSpec, n: Optional[int] = None) -> PointSet:
    """A point-set file path, or an inline list (which needs ``n``)."""
    path = Path(source)
    if path.suffix == ".json" or path.is_file():
        A = PointSet.from_json(load_json(path), pattern.field, pattern.k)
        if n is not None and A.n != n:
            raise PatternError(f"point-set file has n = {A.n} but --n {n} was given")
        return A
    return parse_inline_points(source, pattern.field, pattern.k, 1 if n is None else n)
