from fractions import Fraction as F

import numpy as np
import pytest

from spectile.errors import DegenerateBody, DimensionMismatch, NonpositiveScale, UnsupportedDimension
from spectile.geometry import (
    box,
    convex_hull,
    cube,
    difference_body,
    half_difference_body,
    intersection,
    linear_map,
    minkowski_sum,
    point_body,
    reflect,
    scale,
    standard_simplex,
    symmetry_report,
    translate,
    volume,
)


def vset(body):
    return set(body.vertices)


def pts(*rows):
    return {tuple(F(c) for c in r) for r in rows}


def test_hull_drops_interior_point():
    body = convex_hull([(0, 0), (1, 0), (0, 1), (F(1, 4), F(1, 4))])
    assert vset(body) == pts((0, 0), (1, 0), (0, 1))


def test_hull_of_square_corners_is_identity():
    corners = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert vset(convex_hull(corners)) == pts(*corners)


def test_hull_discards_random_interior_points():
    rng = np.random.default_rng(7)
    inner = [tuple(float(c) for c in rng.uniform(-0.49, 0.49, size=2)) for _ in range(10)]
    body = convex_hull(inner + [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)])
    assert vset(body) == vset(cube(2))


def test_hull_is_idempotent(nonsymmetric_body):
    assert convex_hull(nonsymmetric_body.vertices) == nonsymmetric_body


def test_hull_3d_drops_interior_and_edge_points():
    corners = [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    extra = [(F(1, 2), F(1, 2), F(1, 2)), (F(1, 2), 0, 0), (1, F(1, 3), 1)]
    rng = np.random.default_rng(3)
    noise = [tuple(float(c) for c in rng.uniform(0.1, 0.9, size=3)) for _ in range(20)]
    assert vset(convex_hull(corners + extra + noise)) == pts(*corners)


def test_degenerate_hull_raises():
    with pytest.raises(DegenerateBody):
        convex_hull([(0, 0), (1, 1), (2, 2)])
    with pytest.raises(DegenerateBody):
        convex_hull([])


def test_mixed_dimensions_raise():
    with pytest.raises(DimensionMismatch):
        convex_hull([(0, 0), (1, 0, 0), (0, 1)])


def test_general_hull_above_three_dimensions_is_unsupported():
    simplex = [tuple(int(i == j) for j in range(4)) for i in range(4)] + [(0, 0, 0, 0)]
    assert volume(convex_hull(simplex)) == F(1, 24)
    with pytest.raises(UnsupportedDimension):
        convex_hull(simplex + [(1, 1, 1, 1)])


@pytest.mark.parametrize(
    "body, expected",
    [
        (cube(2), F(1)),
        (standard_simplex(2), F(1, 2)),
        (convex_hull([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]), F(3)),
        (cube(3), F(1)),
        (standard_simplex(3), F(1, 6)),
        (convex_hull([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]), F(4, 3)),
        (box([0, 0, 0, 0], [1, 2, 1, 3]), F(6)),
    ],
    ids=[" square ", " triangle ", " hexagon ", " cube ", " tetrahedron ", " octahedron ", " box4 "],
)
def test_volume(body, expected):
    assert volume(body) == expected


def test_volume_matches_shoelace(nonsymmetric_body):
    if nonsymmetric_body.dim != 2:
        pytest.skip("shoelace is planar")
    c = np.mean(np.array(nonsymmetric_body.vertices, dtype=float), axis=0)
    ring = sorted(nonsymmetric_body.vertices, key=lambda v: np.arctan2(float(v[1]) - c[1], float(v[0]) - c[0]))
    area = sum(a[0] * b[1] - a[1] * b[0] for a, b in zip(ring, ring[1:] + ring[:1])) / 2
    assert volume(nonsymmetric_body) == area


def test_minkowski_sum_of_unit_squares():
    assert volume(minkowski_sum(cube(2), cube(2))) == 4


def test_triangle_difference_body_is_hexagon(std_triangle):
    k = difference_body(std_triangle)
    assert vset(k) == pts((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))
    assert volume(k) == 3 * volume(std_triangle)


def test_minkowski_sum_with_point_translates(nonsymmetric_body):
    t = tuple(F(i + 1, 3) for i in range(nonsymmetric_body.dim))
    assert vset(minkowski_sum(nonsymmetric_body, point_body(t))) == vset(translate(nonsymmetric_body, t))


def test_minkowski_sum_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        minkowski_sum(cube(2), cube(3))


def test_reflect():
    assert vset(reflect(cube(2), (0, 0))) == vset(cube(2))
    assert vset(reflect(standard_simplex(2), (0, 0))) == pts((0, 0), (-1, 0), (0, -1))


def test_reflect_is_involution(nonsymmetric_body):
    c = tuple(F(1, 7) * (i + 1) for i in range(nonsymmetric_body.dim))
    assert vset(reflect(reflect(nonsymmetric_body, c), c)) == vset(nonsymmetric_body)


def test_scale_round_trip_is_exact(nonsymmetric_body):
    c = nonsymmetric_body.centroid
    back = scale(scale(nonsymmetric_body, F(3, 7), c), F(7, 3), c)
    assert vset(back) == vset(nonsymmetric_body)


def test_scale_multiplies_volume():
    body = scale(standard_simplex(3), F(2), (0, 0, 0))
    assert volume(body) == 8 * volume(standard_simplex(3))


def test_scale_rejects_nonpositive():
    with pytest.raises(NonpositiveScale):
        scale(cube(2), 0, (0, 0))


def test_symmetry_report_finds_center(symmetric_body):
    report = symmetry_report(symmetric_body)
    assert report.is_symmetric
    assert vset(reflect(symmetric_body, report.center)) == vset(symmetric_body)


def test_symmetry_report_rejects_nonsymmetric(nonsymmetric_body):
    assert not symmetry_report(nonsymmetric_body).is_symmetric
    assert symmetry_report(nonsymmetric_body).center is None


def test_difference_body_is_symmetric_about_origin(nonsymmetric_body):
    k = difference_body(nonsymmetric_body)
    report = symmetry_report(k)
    assert report.is_symmetric
    assert report.center == (F(0),) * nonsymmetric_body.dim


def test_half_difference_body_volume_of_triangle(unit_triangle):
    assert volume(half_difference_body(unit_triangle)) == F(3, 2)


def test_intersection_of_overlapping_squares():
    common = intersection(cube(2), translate(cube(2), (F(1, 2), F(1, 4))))
    assert volume(common) == F(1, 2) * F(3, 4)


def test_intersection_of_disjoint_or_touching_bodies_is_none():
    assert intersection(cube(2), translate(cube(2), (2, 0))) is None
    assert intersection(cube(2), translate(cube(2), (1, 0))) is None


def test_intersection_3d():
    common = intersection(cube(3), translate(cube(3), (F(1, 2), 0, 0)))
    assert volume(common) == F(1, 2)


def test_linear_map_preserves_volume_for_unimodular_matrix(nonsymmetric_body):
    d = nonsymmetric_body.dim
    m = [[int(i == j) + (2 if j == i + 1 else 0) for j in range(d)] for i in range(d)]
    assert volume(linear_map(nonsymmetric_body, m)) == volume(nonsymmetric_body)


def test_linear_map_rejects_singular_matrix():
    with pytest.raises(DegenerateBody):
        linear_map(cube(2), [[1, 1], [1, 1]])


def test_facets_are_exact_and_normalized(std_triangle):
    facets = [(f.normal, f.offset) for f in std_triangle.facets]
    assert facets == [((-1, 0), 0), ((0, -1), 0), ((1, 1), 1)]
    assert all(f.offset == F(1, 2) for f in cube(3).facets)
    assert len(cube(3).facets) == 6


def test_intersection_3d_of_touching_or_disjoint_cubes_is_none():
    assert intersection(cube(3), translate(cube(3), (1, 0, 0))) is None
    assert intersection(cube(3), translate(cube(3), (3, 3, 3))) is None


def test_intersection_3d_of_tilted_bodies():
    tetra = standard_simplex(3)
    common = intersection(tetra, translate(tetra, (F(1, 2), 0, 0)))
    assert volume(common) == F(1, 48)
