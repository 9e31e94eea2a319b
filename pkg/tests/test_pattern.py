import itertools
import random

import pytest

from conftest import pset, pt
from patternlab.engine import Space
from patternlab.gf import FieldError, make_field
from patternlab.geometry import builtin_pattern
from patternlab.linalg import Matrix, Point
from patternlab.pattern import (NotFullRankError, PatternError, PatternSpec, PointSet,
                                all_instances, count_instances, find_violation, instantiate,
                                is_instance, validate_full_rank)


def scalar_pattern(F, *mults):
    return PatternSpec(F, 1, tuple(Matrix.from_rows(F, [[m]]) for m in mults))


def brute_contains(P, A):
    """Oracle: scan every (x, d != 0) and test membership of all r points."""
    return any(all(v in A for v in inst.points) for inst in all_instances(P, A.n))


def brute_count(P, A):
    return sum(all(v in A for v in inst.points) for inst in all_instances(P, A.n))


def test_validate_right_isosceles_gf7(F7):
    rep = validate_full_rank(builtin_pattern("right_isosceles", F7))
    assert [d.value for d in rep.determinants.values()] == [1, 1, 2]
    assert rep.full_rank


def test_validate_right_isosceles_characteristic_two(F3):
    # GF(2) is outside the field module's contract; over the integers
    # det(M1 - M2) = 2, which vanishes exactly in characteristic 2.
    with pytest.raises(FieldError):
        make_field(2)
    assert 1 * 1 - (-1) * 1 == 2
    # same failure mode in odd characteristic: a generator difference is singular
    P = PatternSpec(F3, 2, (Matrix.identity(F3, 2), Matrix.from_rows(F3, [[1, 1], [0, 1]])))
    rep = validate_full_rank(P)
    assert not rep.full_rank and rep.determinants["M2-M1"].value == 0
    with pytest.raises(NotFullRankError):
        find_violation(P, pset(F3, 2, 1, [[0, 0]]))


def test_validate_ap3(F3, ap3):
    rep = validate_full_rank(ap3)
    assert [d.value for d in rep.determinants.values()] == [1, 2, 1]
    assert rep.full_rank and ap3.status == "full-rank"


def test_pattern_needs_two_generators(F3):
    with pytest.raises(PatternError):
        PatternSpec(F3, 1, (Matrix.identity(F3, 1),))


def test_instantiate_examples(F7, F11):
    P = scalar_pattern(F7, 1, 2)
    x = pt(F7, 4)
    inst = instantiate(P, x, pt(F7, 0))
    assert inst.trivial and inst.points == (x, x, x)
    inst = instantiate(P, pt(F7, 1), pt(F7, 2))
    assert [p.coords[0] for p in inst.points] == [1, 3, 5] and not inst.trivial
    E = builtin_pattern("equilateral", F11, root=6)
    inst = instantiate(E, pt(F11, 0, 0), pt(F11, 1, 0))
    assert inst.points == (pt(F11, 0, 0), pt(F11, 1, 0), pt(F11, 6, 3))


def test_is_instance_examples(F7, F11):
    P = scalar_pattern(F7, 1, 2)
    assert is_instance(P, [pt(F7, 1), pt(F7, 3), pt(F7, 5)])
    assert not is_instance(P, [pt(F7, 2)] * 3)
    assert not is_instance(P, [pt(F7, 1), pt(F7, 3), pt(F7, 6)])
    E = builtin_pattern("equilateral", F11, root=6)
    assert is_instance(E, [pt(F11, 0, 0), pt(F11, 1, 0), pt(F11, 6, 3)])
    with pytest.raises(PatternError):
        is_instance(P, [pt(F7, 1), pt(F7, 3)])


def test_is_instance_singular_first_generator(F3):
    # M_1 = 0: v2 - v1 = 0 always, so no tuple of distinct points qualifies
    P = PatternSpec(F3, 1, (Matrix.zero(F3, 1), Matrix.identity(F3, 1)))
    assert not is_instance(P, [pt(F3, 0), pt(F3, 1), pt(F3, 2)])
    P = PatternSpec(F3, 2, (Matrix.from_rows(F3, [[1, 0], [0, 0]]), Matrix.identity(F3, 2)))
    assert is_instance(P, [pt(F3, 0, 0), pt(F3, 1, 0), pt(F3, 1, 1)])


def test_find_violation_examples(F3, ap3):
    assert find_violation(ap3, pset(F3, 1, 1, [[0], [1]])) is None
    w = find_violation(ap3, pset(F3, 1, 1, [[0], [1], [2]]))
    assert [p.coords[0] for p in w.points] == [0, 1, 2] and w.d == pt(F3, 1)
    assert find_violation(ap3, PointSet.of(F3, 1, 1)) is None


def test_count_instances_examples(F3, ap3):
    assert count_instances(ap3, pset(F3, 1, 1, [[0], [1], [2]])) == 6
    assert count_instances(ap3, pset(F3, 1, 1, [[2]])) == 0


@pytest.mark.parametrize("name,k,n", [("ap3", 1, 1), ("ap3", 1, 2), ("right_isosceles", 2, 1)])
def test_count_full_space(F3, name, k, n):
    P = builtin_pattern(name, F3)
    sp = Space(F3, k, n)
    A = PointSet.from_indices(sp, range(sp.size))
    N = 3 ** (n * k)
    assert brute_count(P, A) == N * (N - 1)
    assert count_instances(P, A) == N * (N - 1)


PATTERNS = [
    ("ap3/F3", lambda: builtin_pattern("ap3", make_field(3)), 2),
    ("right_isosceles/F3", lambda: builtin_pattern("right_isosceles", make_field(3)), 1),
    ("right_isosceles/F5", lambda: builtin_pattern("right_isosceles", make_field(5)), 1),
    ("rot45/F7", lambda: builtin_pattern("rot45", make_field(7)), 1),
    ("ap3/F7", lambda: builtin_pattern("ap3", make_field(7)), 2),
    ("ap3/F9", lambda: builtin_pattern("ap3", make_field(3, 2)), 1),
    ("4ap/F5", lambda: scalar_pattern(make_field(5), 1, 2, 3), 1),
    ("4ap/F7", lambda: scalar_pattern(make_field(7), 1, 2, 3), 1),
]


@pytest.mark.parametrize("make,n", [(m, n) for _, m, n in PATTERNS], ids=[i for i, _, _ in PATTERNS])
def test_find_violation_matches_exhaustive_scan(make, n):
    P = make()
    sp = Space(P.field, P.k, n)
    assert sp.size <= 100
    rng = random.Random(sp.size)
    for _ in range(40):
        size = rng.randint(0, min(sp.size, 12))
        A = PointSet.from_indices(sp, rng.sample(range(sp.size), size))
        w = find_violation(P, A)
        assert (w is None) == (not brute_contains(P, A))
        if w is not None:
            assert is_instance(P, w.points) and all(v in A for v in w.points)
        assert count_instances(P, A) == brute_count(P, A)


@pytest.mark.parametrize("make,n", [(m, n) for _, m, n in PATTERNS], ids=[i for i, _, _ in PATTERNS])
def test_round_trip_and_distinctness(make, n):
    P = make()
    sp = Space(P.field, P.k, n)
    rng = random.Random(7)
    pairs = itertools.product(range(sp.size), range(1, sp.size))
    if sp.size > 9:
        pairs = [(rng.randrange(sp.size), rng.randrange(1, sp.size)) for _ in range(200)]
    for xi, di in pairs:
        inst = instantiate(P, sp.point(xi), sp.point(di))
        assert not inst.trivial
        assert len(set(inst.points)) == P.r
        assert is_instance(P, inst.points)


@pytest.mark.parametrize("make,n", [(m, n) for _, m, n in PATTERNS[:5]], ids=[i for i, _, _ in PATTERNS[:5]])
def test_avoidance_translation_invariant(make, n):
    P = make()
    sp = Space(P.field, P.k, n)
    rng = random.Random(11)
    for _ in range(30):
        A = PointSet.from_indices(sp, rng.sample(range(sp.size), rng.randint(1, min(8, sp.size))))
        t = sp.point(rng.randrange(sp.size))
        assert (find_violation(P, A) is None) == (find_violation(P, A.translate(t)) is None)


def test_first_witness_is_lexicographic(F7):
    P = scalar_pattern(F7, 1, 2)
    A = pset(F7, 1, 1, [[6], [5], [4], [3], [1]])
    # ordered pairs (1, 3) -> 5 comes before (3, 4) -> 5 and (4, 5) -> 6
    w = find_violation(P, A)
    assert [p.coords[0] for p in w.points] == [1, 3, 5]


def test_pattern_and_set_json_roundtrip(F7):
    P = builtin_pattern("rot45", F7)
    assert PatternSpec.from_json(P.to_json()) == P
    A = pset(F7, 2, 1, [[1, 2], [3, 4]])
    assert PointSet.from_json(A.to_json(), F7, 2) == A
    F9 = make_field(3, 2)
    B = PointSet.of(F9, 1, 2, [Point.from_flat(F9, 1, 2, [[0, 1], [2, 2]])])
    assert PointSet.from_json(B.to_json(), F9, 1) == B
