from fractions import Fraction as F

import pytest

from spectile.geometry import box, convex_hull, cube, standard_simplex
from spectile.lattice import Lattice

# Centrally symmetric bodies, d in {2, 3}
SYMMETRIC = {
    "square": lambda: cube(2),
    "rectangle": lambda: box([0, 0], [2, 1]),
    "hexagon": lambda: convex_hull([(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]),
    "parallelogram": lambda: convex_hull([(0, 0), (2, 0), (3, 1), (1, 1)]),
    "octagon": lambda: convex_hull([(2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2), (2, -1)]),
    "rhombus": lambda: convex_hull([(1, 0), (0, 2), (-1, 0), (0, -2)]),
    "diamond": lambda: convex_hull([(1, 0), (0, 1), (-1, 0), (0, -1)]),
    "flat_hexagon": lambda: convex_hull([(2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1)]),
    "cube3": lambda: cube(3),
    "box3": lambda: box([0, 0, 0], [1, 2, 3]),
    "octahedron": lambda: convex_hull(
        [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    ),
    "parallelepiped": lambda: convex_hull(
        [
            (a + b, c + b, c)
            for a in (0, 1)
            for b in (0, 1)
            for c in (0, 1)
        ]
    ),
    "hex_prism": lambda: convex_hull(
        [(x, y, z) for x, y in [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)] for z in (0, 1)]
    ),
}

NONSYMMETRIC = {
    "unit_triangle": lambda: convex_hull([(0, 0), (2, 0), (0, 1)]),
    "std_triangle": lambda: standard_simplex(2),
    "slanted_triangle": lambda: convex_hull([(0, 0), (3, 1), (1, 2)]),
    "trapezoid": lambda: convex_hull([(0, 0), (3, 0), (2, 1), (1, 1)]),
    "kite": lambda: convex_hull([(0, -1), (1, 0), (0, 3), (-1, 0)]),
    "quadrilateral": lambda: convex_hull([(0, 0), (4, 0), (3, 2), (0, 1)]),
    "pentagon": lambda: convex_hull([(0, 0), (2, 0), (3, 1), (1, 3), (0, 2)]),
    "std_tetrahedron": lambda: standard_simplex(3),
    "unit_tetrahedron": lambda: convex_hull([(0, 0, 0), (6, 0, 0), (0, 1, 0), (0, 0, 1)]),
    "pyramid": lambda: convex_hull([(1, 1, 0), (1, -1, 0), (-1, 1, 0), (-1, -1, 0), (0, 0, 1)]),
    "prism": lambda: convex_hull([(x, y, z) for x, y in [(0, 0), (1, 0), (0, 1)] for z in (0, 1)]),
    "cut_cube": lambda: convex_hull(
        [(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1) if (x, y, z) != (1, 1, 1)]
        + [(1, 1, F(1, 2)), (1, F(1, 2), 1), (F(1, 2), 1, 1)]
    ),
}


@pytest.fixture(params=sorted(SYMMETRIC), ids=lambda name: f" {name} ")
def symmetric_body(request):
    return SYMMETRIC[request.param]()


@pytest.fixture(params=sorted(NONSYMMETRIC), ids=lambda name: f" {name} ")
def nonsymmetric_body(request):
    return NONSYMMETRIC[request.param]()


@pytest.fixture
def unit_square():
    return cube(2)


@pytest.fixture
def unit_triangle():
    """Area-one triangle; its volume normalization is exact."""
    return convex_hull([(0, 0), (2, 0), (0, 1)])


@pytest.fixture
def std_triangle():
    return standard_simplex(2)


@pytest.fixture
def hexagon():
    return SYMMETRIC["hexagon"]()


@pytest.fixture
def z2():
    return Lattice.integer(2)
