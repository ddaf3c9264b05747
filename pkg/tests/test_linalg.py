from fractions import Fraction as F

from spectile.linalg import affine_rank, as_matrix, det, inverse, matmul, rank, solve

M = as_matrix([[2, 1], [F(1, 2), 3]])


def test_det_is_exact():
    assert det(M) == F(11, 2)
    assert isinstance(det(M), F)
    assert det(as_matrix([[1, 2], [2, 4]])) == 0
    assert det(()) == 1


def test_solve_and_inverse():
    assert solve(M, [F(3), F(7, 2)]) == (F(1), F(1))
    inv = inverse(M)
    assert matmul(M, inv) == as_matrix([[1, 0], [0, 1]])
    assert inv[0][0] == F(6, 11)


def test_singular_systems_return_none():
    singular = as_matrix([[1, 2], [2, 4]])
    assert solve(singular, [F(1), F(2)]) is None
    assert inverse(singular) is None


def test_rank_and_affine_rank():
    assert rank(as_matrix([[1, 2, 3], [2, 4, 6]])) == 1
    assert rank([]) == 0
    collinear = [(F(0), F(0)), (F(1), F(1)), (F(2), F(2))]
    assert affine_rank(collinear) == 1
    assert affine_rank(collinear + [(F(0), F(1))]) == 2
