import itertools
import random

import pytest

from conftest import pt
from patternlab.gf import FieldError, make_field
from patternlab.linalg import (LinalgError, Matrix, Point, SingularMatrixError, apply_block, det,
                               inverse, mat_op)

ROT = [[0, -1], [1, 0]]


def test_det_examples(F7):
    assert det(Matrix.from_rows(F7, ROT)) == F7(1)
    assert det(Matrix.from_rows(F7, [[1, 1], [-1, 1]])) == F7(2)
    for k in (1, 2, 3):
        assert det(Matrix.identity(F7, k)) == F7(1)


def test_inverse_examples(F7):
    I = Matrix.identity(F7, 2)
    assert inverse(I) == I
    R = Matrix.from_rows(F7, ROT)
    Rinv = inverse(R)
    assert Rinv == Matrix.from_rows(F7, [[0, 1], [-1, 0]])
    assert R @ Rinv == I and Rinv @ R == I
    with pytest.raises(SingularMatrixError):
        inverse(Matrix.zero(F7, 2))


def test_mat_op_examples(F7, F11):
    I7 = Matrix.identity(F7, 2)
    R = Matrix.from_rows(F7, ROT)
    assert mat_op(I7, R, "sub") == Matrix.from_rows(F7, [[1, 1], [-1, 1]])
    assert mat_op(R, I7, "mul") == R
    E = Matrix.from_rows(F11, [[6, 8], [3, 6]])
    diff = mat_op(E, Matrix.identity(F11, 2), "sub")
    assert diff == Matrix.from_rows(F11, [[5, 8], [3, 5]])
    assert det(diff) == F11(1)


def test_mat_op_errors(F7, F11):
    with pytest.raises(LinalgError):
        mat_op(Matrix.identity(F7, 2), Matrix.identity(F7, 3), "mul")
    with pytest.raises(FieldError):
        mat_op(Matrix.identity(F7, 2), Matrix.identity(F11, 2), "sub")
    with pytest.raises(LinalgError):
        mat_op(Matrix.identity(F7, 2), Matrix.identity(F7, 2), "add")


def test_apply_block_examples(F3, F11):
    x = Point.from_blocks(F11, [[1, 2], [3, 4]])
    assert apply_block(Matrix.identity(F11, 2), x) == x
    assert apply_block(Matrix.from_rows(F3, [[2]]), Point.from_blocks(F3, [[1, 2]])) == \
        Point.from_blocks(F3, [[2, 1]])
    E = Matrix.from_rows(F11, [[6, 8], [3, 6]])
    assert apply_block(E, pt(F11, 1, 0)) == pt(F11, 6, 3)


def test_apply_block_mismatch(F7):
    with pytest.raises(LinalgError):
        apply_block(Matrix.identity(F7, 2), Point.from_blocks(F7, [[1, 2]]))


def _random_matrix(F, k, rng):
    return Matrix(F, k, tuple(rng.randrange(F.q) for _ in range(k * k)))


def _random_point(F, k, n, rng):
    return Point(F, k, n, tuple(rng.randrange(F.q) for _ in range(k * n)))


@pytest.mark.parametrize("F", [make_field(5), make_field(3, 2), make_field(13)], ids=repr)
def test_det_multiplicative(F):
    rng = random.Random(3)
    for _ in range(200):
        k = rng.randint(1, 3)
        M, N = _random_matrix(F, k, rng), _random_matrix(F, k, rng)
        assert det(M @ N) == det(M) * det(N)


@pytest.mark.parametrize("F,k", [(make_field(3), 2), (make_field(5), 2), (make_field(3), 3),
                                 (make_field(3, 2), 2), (make_field(7), 2)], ids=repr)
def test_det_zero_iff_nontrivial_kernel(F, k):
    assert F.q**k <= 10**4
    rng = random.Random(5)
    vectors = [Point(F, k, 1, c) for c in itertools.product(range(F.q), repeat=k)]
    zero = Point.zero(F, k, 1)
    for trial in range(60):
        M = _random_matrix(F, k, rng)
        if trial % 3 == 0:  # force some singular samples: repeat a row
            rows = [list(M.entries[i * k:(i + 1) * k]) for i in range(k)]
            rows[-1] = rows[0]
            M = Matrix(F, k, tuple(c for r in rows for c in r))
        kernel = [v for v in vectors if apply_block(M, v) == zero]
        assert (det(M).value != 0) == (len(kernel) == 1)


@pytest.mark.parametrize("F", [make_field(7), make_field(3, 2)], ids=repr)
def test_apply_block_linear_and_composes(F):
    rng = random.Random(9)
    for _ in range(100):
        k, n = rng.randint(1, 3), rng.randint(1, 3)
        M, N = _random_matrix(F, k, rng), _random_matrix(F, k, rng)
        x, y = _random_point(F, k, n, rng), _random_point(F, k, n, rng)
        assert apply_block(M, x + y) == apply_block(M, x) + apply_block(M, y)
        assert apply_block(M @ N, x) == apply_block(M, apply_block(N, x))


def test_point_blocks_layout(F7):
    x = Point.from_blocks(F7, [[1, 2, 3], [4, 5, 6]])
    assert x.coords == (1, 2, 3, 4, 5, 6)
    assert [[e.value for e in b] for b in x.blocks] == [[1, 2, 3], [4, 5, 6]]
    with pytest.raises(LinalgError):
        Point(F7, 2, 3, (1, 2))


def test_matrix_json_extension_field():
    F = make_field(3, 2)
    M = Matrix.from_rows(F, [[[0, 1], 1], [0, [2, 2]]])
    assert M.to_json() == [[[0, 1], [1, 0]], [[0, 0], [2, 2]]]
    assert Matrix.from_rows(F, M.to_json()) == M
