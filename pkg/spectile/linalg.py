"""Exact linear algebra for tuple-of-rows matrices of ``Fraction``.

The heavy lifting (determinant, rank, solve, inverse, product) is done by flint's
``fmpq_mat``; this module only converts to and from the tuple form the rest of the
package hashes and compares.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from flint import fmpq, fmpq_mat

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]


def as_matrix(rows: Sequence[Sequence[Fraction | int]]) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matvec(m: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in m)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _to_fmpq(x: Fraction | int) -> fmpq:
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _from_fmpq(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def to_flint(rows: Sequence[Sequence[Fraction | int]]) -> fmpq_mat:
    return fmpq_mat([[_to_fmpq(x) for x in row] for row in rows])


def from_flint(m: fmpq_mat) -> Matrix:
    return tuple(tuple(_from_fmpq(m[i, j]) for j in range(m.ncols())) for i in range(m.nrows()))


def det(m: Matrix) -> Fraction:
    if not m:
        return Fraction(1)
    return _from_fmpq(to_flint(m).det())


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows or not rows[0]:
        return 0
    _, r = to_flint(rows).rref()
    return int(r)


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    if len(points) < 2:
        return 0
    base = points[0]
    return rank([sub(p, base) for p in points[1:]])


def solve(m: Matrix, b: Sequence[Fraction]) -> Vector | None:
    """Solve ``m x = b`` exactly; None when ``m`` is singular."""
    a = to_flint(m)
    if a.det() == 0:
        return None
    x = a.solve(to_flint([[bi] for bi in b]))
    return tuple(row[0] for row in from_flint(x))


def inverse(m: Matrix) -> Matrix | None:
    a = to_flint(m)
    if a.det() == 0:
        return None
    return from_flint(a.inv())


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return from_flint(to_flint(a) * to_flint(b))
