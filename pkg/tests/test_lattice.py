from fractions import Fraction as F

import numpy as np
import pytest

from spectile.errors import DegenerateBody, DimensionMismatch, InsufficientWindow, WindowTooLarge
from spectile.lattice import (
    Box,
    Lattice,
    PointSet,
    contains,
    covolume,
    density,
    difference_set,
    dual,
    dual_points,
    enumerate_window,
    estimate_density,
    longest_dual_generator,
    same_lattice,
    sample_unit_density_lattices,
    scaled,
    transformed,
)

SHEARED = Lattice([[2, 1], [0, 1]])  # generators (2, 0) and (1, 1)


def test_basis_checks():
    with pytest.raises(DegenerateBody):
        Lattice([[1, 2], [2, 4]])
    with pytest.raises(DimensionMismatch):
        Lattice([[1, 0, 0], [0, 1, 0]])


def test_dual_and_density():
    assert covolume(SHEARED) == 2
    assert density(dual(SHEARED)) == 2
    assert same_lattice(dual(dual(SHEARED)), SHEARED)
    assert same_lattice(dual(Lattice.diagonal([2, F(1, 3)])), Lattice.diagonal([F(1, 2), 3]))


def test_dual_pairs_are_integral():
    d = dual(SHEARED)
    for g in SHEARED.generators():
        for h in d.generators():
            assert sum(a * b for a, b in zip(g, h)).denominator == 1


def test_contains_and_same_lattice(z2):
    assert contains(Lattice.diagonal([2, 1]), (2, 3))
    assert not contains(Lattice.diagonal([2, 1]), (1, 0))
    assert contains(SHEARED, (3, 1))
    assert same_lattice(Lattice([[1, 1], [0, 1]]), z2)
    assert not same_lattice(Lattice.diagonal([2, 1]), z2)


def test_scaled_and_transformed(z2):
    assert density(scaled(z2, 2)) == F(1, 4)
    assert same_lattice(transformed(z2, [[1, 1], [0, 1]]), z2)
    assert same_lattice(transformed(z2, [[2, 1], [0, 1]]), SHEARED)


def test_enumerate_window_of_integer_lattice(z2):
    found = enumerate_window(z2, Box.cube(2, 2))
    assert len(found) == 25
    assert tuple(found.points[0]) == (-2.0, -2.0)
    assert tuple(found.points[1]) == (-2.0, -1.0)
    assert found.exact_points(z2)[-1] == (F(2), F(2))


def test_enumerate_window_of_sheared_lattice():
    found = enumerate_window(SHEARED, Box((0, 0), (4, 2)))
    expected = {(0, 0), (2, 0), (4, 0), (1, 1), (3, 1), (0, 2), (2, 2), (4, 2)}
    assert {tuple(int(round(c)) for c in p) for p in found.points} == expected


def test_enumerate_window_rejects_oversized_windows(z2):
    with pytest.raises(WindowTooLarge):
        enumerate_window(z2, Box.cube(100, 2), cap=100)
    with pytest.raises(DimensionMismatch):
        enumerate_window(z2, Box.cube(1, 3))


def test_dual_points_are_sorted_by_norm(z2):
    found = dual_points(z2, 1.5)
    assert len(found) == 8
    assert [tuple(p) for p in found.points[:4]] == [(-1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]
    assert np.all(np.diff(np.linalg.norm(found.points, axis=1)) >= -1e-12)


def test_longest_dual_generator():
    assert longest_dual_generator(Lattice.diagonal([2, 1])) == pytest.approx(1.0)
    assert longest_dual_generator(Lattice.diagonal([F(1, 4), 1])) == pytest.approx(4.0)


def test_difference_set_of_lattice_window(z2):
    window = enumerate_window(z2, Box.cube(1, 2))
    diffs = difference_set(window)
    assert len(diffs) == 24
    assert not np.any(np.all(diffs.points == 0, axis=1))


def test_difference_set_of_plain_points():
    diffs = difference_set(PointSet.from_points([[0, 0], [1, 0], [0, 1]]))
    assert len(diffs) == 6
    assert len(difference_set(PointSet.from_points([[0.5, 0.5]]))) == 0


def test_point_set_window_is_checked():
    with pytest.raises(InsufficientWindow):
        PointSet(np.array([[2.0, 0.0]]), Box.cube(1, 2))
    with pytest.raises(InsufficientWindow):
        Box((1, 0), (0, 1))


def test_box_helpers():
    b = Box.cube(1, 2)
    assert b.volume == 4
    assert b.contains_box(Box((0, 0), (1, 1)))
    assert not b.contains_box(Box((0, 0), (2, 1)))
    assert b.expanded((1, 0), (0, 1)) == Box((-2, -1), (1, 2))
    assert b.shifted((1, 1)) == Box((0, 0), (2, 2))
    assert list(b.contains(np.array([[0.0, 0.0], [1.5, 0.0]]))) == [True, False]


def test_estimate_density_is_within_error_bar():
    est = estimate_density(Lattice.diagonal([2, 1]), 50)
    assert abs(est.value - 0.5) <= est.error_bar
    est = estimate_density(SHEARED, 40)
    assert abs(est.value - 0.5) <= est.error_bar


@pytest.mark.parametrize("dim", [2, 3])
def test_sampled_lattices_have_unit_density(dim):
    lattices = sample_unit_density_lattices(dim, 12, seed=5)
    assert len(lattices) == 12
    assert all(abs(lat.determinant) == 1 for lat in lattices)
    again = sample_unit_density_lattices(dim, 12, seed=5)
    assert [lat.basis for lat in lattices] == [lat.basis for lat in again]


def test_sampled_lattices_depend_on_seed():
    a = sample_unit_density_lattices(2, 5, seed=1)
    b = sample_unit_density_lattices(2, 5, seed=2)
    assert [lat.basis for lat in a] != [lat.basis for lat in b]
