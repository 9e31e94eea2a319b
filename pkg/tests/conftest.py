import pytest

from patternlab.gf import make_field
from patternlab.geometry import builtin_pattern
from patternlab.linalg import Point
from patternlab.pattern import PointSet


@pytest.fixture
def F3():
    return make_field(3)


@pytest.fixture
def F7():
    return make_field(7)


@pytest.fixture
def F11():
    return make_field(11)


@pytest.fixture
def ap3(F3):
    return builtin_pattern("ap3", F3)


def pt(F, *coords, k=None):
    # one coordinate -> k = 1; otherwise planar (k = 2) unless k is given
    if k is None:
        k = 1 if len(coords) == 1 else 2
    return Point.from_flat(F, k, len(coords) // k, coords)


def pset(F, k, n, rows):
    return PointSet.of(F, k, n, [Point.from_flat(F, k, n, r) for r in rows])
