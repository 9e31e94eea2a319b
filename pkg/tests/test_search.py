import itertools

import pytest

from conftest import pset
from patternlab.bounds import avoidance_bound
from patternlab.engine import Space
from patternlab.gf import make_field
from patternlab.geometry import builtin_pattern
from patternlab.linalg import Matrix
from patternlab.pattern import NotFullRankError, PatternSpec, all_instances, find_violation
from patternlab.search import SearchError, certify, exact_max, greedy


def brute_max(P, n):
    """Oracle: largest subset containing no instance point set."""
    sp = Space(P.field, P.k, n)
    edges = {frozenset(sp.index_of(v) for v in inst.points) for inst in all_instances(P, n)}
    for size in range(sp.size, 0, -1):
        for S in itertools.combinations(range(sp.size), size):
            S = set(S)
            if not any(e <= S for e in edges):
                return size
    return 0


def scalar_pattern(F, *mults):
    return PatternSpec(F, 1, tuple(Matrix.from_rows(F, [[m]]) for m in mults))


def test_greedy_examples(F3, ap3):
    res = greedy(ap3, 1)
    assert [p.coords for p in res.best_set] == [(0,), (1,)] and res.size == 2
    assert res.certificate is None
    assert greedy(ap3, 2).size >= 3
    with pytest.raises(SearchError):
        greedy(ap3, 0)
    with pytest.raises(SearchError):
        greedy(ap3, 1, order="spiral")


def test_greedy_seeded_is_reproducible(F3, ap3):
    a = greedy(ap3, 3, "seeded-random", 42)
    b = greedy(ap3, 3, "seeded-random", 42)
    assert a.best_set == b.best_set
    assert find_violation(ap3, a.best_set) is None


def test_exact_examples(ap3):
    r1, r2 = exact_max(ap3, 1), exact_max(ap3, 2)
    assert (r1.size, r1.optimal) == (2, True)
    assert (r2.size, r2.optimal) == (4, True)
    assert r1.certificate is None and r2.certificate is None


def test_exact_cap_set_n3(ap3):
    res = exact_max(ap3, 3, budget=10**7)
    assert res.size == 9 and res.optimal and res.certificate is None


def test_exact_budget_exhaustion(ap3):
    res = exact_max(ap3, 3, budget=50)
    assert not res.optimal and res.nodes_explored == 50
    assert res.certificate is None


def test_exact_refuses_large_spaces(ap3):
    with pytest.raises(SearchError):
        exact_max(ap3, 5)


def test_not_full_rank_rejected(F3):
    P = scalar_pattern(F3, 1, 1)
    with pytest.raises(NotFullRankError):
        greedy(P, 1)


CASES = [
    ("ap3", 3, 1), ("ap3", 3, 2), ("ap3", 5, 1), ("ap3", 7, 1), ("ap3", 11, 1),
    ("ap3", 9, 1), ("right_isosceles", 3, 1),
]


@pytest.mark.parametrize("name,q,n", CASES)
def test_exact_matches_subset_enumeration(name, q, n):
    F = make_field(3, 2) if q == 9 else make_field(q)
    P = builtin_pattern(name, F)
    assert F.q ** (P.k * n) <= 12
    res = exact_max(P, n)
    assert res.optimal and res.size == brute_max(P, n)


def test_exact_four_point_pattern():
    P = scalar_pattern(make_field(7), 1, 2, 3)
    res = exact_max(P, 1)
    assert res.optimal and res.size == brute_max(P, 1)
    assert res.certificate is None


@pytest.mark.parametrize("name,q,n", [("ap3", 3, 1), ("ap3", 3, 2), ("right_isosceles", 3, 1)])
def test_fixing_zero_loses_nothing(name, q, n):
    P = builtin_pattern(name, make_field(q))
    fixed = exact_max(P, n, fix_zero=True)
    free = exact_max(P, n, fix_zero=False)
    assert fixed.size == free.size
    assert fixed.best_set == free.best_set  # lexicographically smallest maximum contains 0


def test_deterministic_witness_is_lexicographically_smallest(ap3):
    res = exact_max(ap3, 2)
    assert [p.coords for p in res.best_set] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_parallel_mode_same_size(ap3):
    seq = exact_max(ap3, 3)
    par = exact_max(ap3, 3, deterministic=False, workers=2)
    assert par.size == seq.size and par.optimal and not par.deterministic
    assert par.certificate is None


@pytest.mark.parametrize("name,q,n", [("ap3", 3, 1), ("ap3", 3, 2), ("ap3", 3, 3),
                                      ("right_isosceles", 3, 1), ("rot45", 7, 1)])
def test_greedy_le_exact_le_bound(name, q, n):
    P = builtin_pattern(name, make_field(q))
    g = greedy(P, n)
    e = exact_max(P, n)
    b = avoidance_bound(q, P.k, n, 3)
    assert e.optimal
    assert g.size <= e.size <= b.exact_bound


def test_certify(F3, ap3):
    assert certify(ap3, pset(F3, 1, 1, [[0], [1]])) == (True, None)
    ok, w = certify(ap3, pset(F3, 1, 1, [[0], [1], [2]]))
    assert not ok and [p.coords[0] for p in w.points] == [0, 1, 2]
    for res in (greedy(ap3, 2), exact_max(ap3, 2), greedy(ap3, 3, "seeded-random", 1)):
        assert certify(ap3, res.best_set)[0]
