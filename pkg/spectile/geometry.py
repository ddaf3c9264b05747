"""Exact convex polytopes.

Every coordinate is a ``Fraction``. A :class:`Polytope` is the convex hull of its vertex
list; bodies built through :func:`convex_hull` keep only extreme points, sorted
lexicographically, so two polytopes are equal exactly when their vertex sets are.

Full functionality (hull, facets, intersection) covers d <= 3. Higher dimensions are
accepted for simplices and axis-aligned boxes only.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import factorial
from typing import Iterable, Sequence

import cdd
import numpy as np
from scipy.spatial import ConvexHull, QhullError

from spectile.errors import DegenerateBody, DimensionMismatch, NonpositiveScale, UnsupportedDimension
from spectile.linalg import add, affine_rank, as_matrix, det, dot, matvec, rank, sub
from spectile.utils import to_point

logger = logging.getLogger(__name__)

Point = tuple[Fraction, ...]

# above this many input points in d = 3, qhull prunes the candidate set before the exact pass
_QHULL_PRUNE_AT = 12


@dataclass(frozen=True)
class Facet:
    """Supporting halfspace ``normal . x <= offset`` (normal scaled to max |component| 1)."""

    normal: Point
    offset: Fraction

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, x) - self.offset


@dataclass(frozen=True)
class SymmetryReport:
    is_symmetric: bool
    center: Point | None


@dataclass(frozen=True)
class Polytope:
    dim: int
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch(f"dimension must be positive, got {self.dim}")
        if not self.vertices:
            raise DegenerateBody("polytope needs at least one vertex")
        for v in self.vertices:
            if len(v) != self.dim:
                raise DimensionMismatch(f"vertex {v} does not have {self.dim} coordinates")

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        return _facets_of(self.vertices, self.dim)

    @cached_property
    def centroid(self) -> Point:
        n = len(self.vertices)
        return tuple(sum((v[i] for v in self.vertices), Fraction(0)) / n for i in range(self.dim))

    @cached_property
    def bounds(self) -> tuple[Point, Point]:
        lo = tuple(min(v[i] for v in self.vertices) for i in range(self.dim))
        hi = tuple(max(v[i] for v in self.vertices) for i in range(self.dim))
        return lo, hi

    @cached_property
    def box(self) -> tuple[Point, Point] | None:
        """(lo, hi) when the body is an axis-aligned box, else None."""
        lo, hi = self.bounds
        if len(self.vertices) != 2 ** self.dim:
            return None
        corners = set(itertools.product(*zip(lo, hi)))
        return (lo, hi) if corners == set(self.vertices) else None

    @cached_property
    def simplices(self) -> tuple[tuple[Point, ...], ...]:
        return _triangulate(self)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return all(f.value(x) <= 0 for f in self.facets)

    def interior_contains(self, x: Sequence[Fraction]) -> bool:
        return all(f.value(x) < 0 for f in self.facets)

    @property
    def is_full_dimensional(self) -> bool:
        return len(self.vertices) > self.dim and affine_rank(self.vertices) == self.dim


# --- construction -------------------------------------------------------------------------

def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(points: Sequence[Point]) -> list[Point]:
    """Strictly convex CCW cycle starting at the lexicographically smallest point."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[Point] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _facet_from_row(row: Sequence[Fraction]) -> Facet | None:
    # cdd rows read b + a.x >= 0
    normal = tuple(-Fraction(c) for c in row[1:])
    if not any(normal):
        return None
    scale = max(abs(c) for c in normal)
    return Facet(tuple(c / scale for c in normal), Fraction(row[0]) / scale)


def _facets_of(points: Sequence[Point], dim: int) -> tuple[Facet, ...]:
    if dim == 1:
        lo = min(p[0] for p in points)
        hi = max(p[0] for p in points)
        return (Facet((Fraction(-1),), -lo), Facet((Fraction(1),), hi))
    mat = cdd.Matrix([[1, *p] for p in points], number_type="fraction")
    mat.rep_type = cdd.RepType.GENERATOR
    ineq = cdd.Polyhedron(mat).get_inequalities()
    ineq.canonicalize()
    found: set[Facet] = set()
    for i in range(ineq.row_size):
        row = list(ineq[i])
        # equality rows only appear for lower-dimensional inputs
        rows = [row, [-c for c in row]] if i in ineq.lin_set else [row]
        found.update(f for f in map(_facet_from_row, rows) if f is not None)
    return tuple(sorted(found, key=lambda f: (f.normal, f.offset)))


def _qhull_candidates(points: Sequence[Point]) -> list[Point]:
    try:
        hull = ConvexHull(np.array(points, dtype=float))
    except QhullError:
        logger.debug("qhull rejected %d points, using the full set", len(points))
        return list(points)
    idx = set(int(i) for i in hull.vertices)
    if hull.coplanar.size:
        idx.update(int(i) for i in hull.coplanar[:, 0])
    return [points[i] for i in sorted(idx)]


def _extreme_points(points: Sequence[Point], dim: int) -> list[Point]:
    cands = sorted(set(_qhull_candidates(points) if len(points) > _QHULL_PRUNE_AT else points))
    while True:
        facets = _facets_of(cands, dim)
        outside = [p for p in points if any(f.value(p) > 0 for f in facets)]
        if not outside:
            break
        cands = sorted(set(cands) | set(outside))
    return [p for p in cands if rank([f.normal for f in facets if f.value(p) == 0]) == dim]


def convex_hull(points: Iterable[Sequence[object]]) -> Polytope:
    pts = sorted({to_point(p) for p in points})
    if not pts:
        raise DegenerateBody("empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionMismatch("points have differing coordinate counts")
    if affine_rank(pts) < d:
        raise DegenerateBody(f"affine hull has dimension {affine_rank(pts)} < {d}")
    if d == 1:
        verts = [pts[0], pts[-1]]
    elif d == 2:
        verts = _monotone_chain(pts)
    elif d == 3:
        verts = _extreme_points(pts, d)
    elif len(pts) == d + 1:
        verts = pts
    else:
        body = Polytope(d, tuple(pts))
        if body.box is None:
            raise UnsupportedDimension(f"general hulls are limited to d <= 3, got d = {d}")
        verts = pts
    return Polytope(d, tuple(sorted(verts)))


def box(lo: Sequence[object], hi: Sequence[object]) -> Polytope:
    lo_p, hi_p = to_point(lo), to_point(hi)
    return convex_hull(itertools.product(*zip(lo_p, hi_p)))


def cube(dim: int, side: object = 1, *, centered: bool = True) -> Polytope:
    s = to_point([side])[0]
    lo = -s / 2 if centered else Fraction(0)
    return box([lo] * dim, [lo + s] * dim)


def standard_simplex(dim: int) -> Polytope:
    origin = [Fraction(0)] * dim
    units = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return convex_hull([origin, *units])


# --- triangulation and volume ----------------------------------------------------------------

def _order_facet(vertices: Sequence[Point], normal: Point) -> list[Point]:
    drop = max(range(len(normal)), key=lambda i: abs(normal[i]))
    projected = {tuple(c for j, c in enumerate(v) if j != drop): v for v in vertices}
    return [projected[p] for p in _monotone_chain(list(projected))]


def _triangulate(body: Polytope) -> tuple[tuple[Point, ...], ...]:
    d = body.dim
    verts = body.vertices
    if d == 1:
        return ((verts[0], verts[-1]),)
    if d == 2:
        cyc = _monotone_chain(verts)
        return tuple((cyc[0], cyc[i], cyc[i + 1]) for i in range(1, len(cyc) - 1))
    if len(verts) == d + 1:
        return (tuple(verts),)
    if d == 3:
        apex = verts[0]
        out = []
        for f in body.facets:
            if f.value(apex) == 0:
                continue
            ring = _order_facet([v for v in verts if f.value(v) == 0], f.normal)
            out.extend((apex, ring[0], ring[i], ring[i + 1]) for i in range(1, len(ring) - 1))
        return tuple(out)
    if body.box is not None:
        lo, hi = body.box
        out = []
        for perm in itertools.permutations(range(d)):
            path = [lo]
            cur = list(lo)
            for axis in perm:
                cur[axis] = hi[axis]
                path.append(tuple(cur))
            out.append(tuple(path))
        return tuple(out)
    raise UnsupportedDimension(f"cannot triangulate a general body in d = {d}")


def simplex_volume(simplex: Sequence[Point]) -> Fraction:
    base = simplex[0]
    d = len(base)
    return abs(det(tuple(sub(p, base) for p in simplex[1:]))) / factorial(d)


def volume(body: Polytope) -> Fraction:
    if body.box is not None:
        lo, hi = body.box
        out = Fraction(1)
        for a, b in zip(lo, hi):
            out *= b - a
        return out
    if not body.is_full_dimensional:
        return Fraction(0)
    return sum((simplex_volume(s) for s in body.simplices), Fraction(0))


# --- operations -------------------------------------------------------------------------------

def _check_dims(p: Polytope, q: Polytope) -> None:
    if p.dim != q.dim:
        raise DimensionMismatch(f"dimensions differ: {p.dim} vs {q.dim}")


def point_body(point: Sequence[object]) -> Polytope:
    """Degenerate one-point body, useful as a Minkowski summand."""
    p = to_point(point)
    return Polytope(len(p), (p,))


def minkowski_sum(p: Polytope, q: Polytope) -> Polytope:
    _check_dims(p, q)
    return convex_hull(add(a, b) for a in p.vertices for b in q.vertices)


def translate(body: Polytope, t: Sequence[object]) -> Polytope:
    tp = to_point(t)
    if len(tp) != body.dim:
        raise DimensionMismatch("translation vector has the wrong dimension")
    return Polytope(body.dim, tuple(add(v, tp) for v in body.vertices))


def reflect(body: Polytope, center: Sequence[object]) -> Polytope:
    c = to_point(center)
    return Polytope(body.dim, tuple(sorted(tuple(2 * ci - vi for ci, vi in zip(c, v)) for v in body.vertices)))


def scale(body: Polytope, rho: object, center: Sequence[object]) -> Polytope:
    r = to_point([rho])[0]
    if r <= 0:
        raise NonpositiveScale(f"scale factor must be positive, got {r}")
    c = to_point(center)
    return Polytope(body.dim, tuple(sorted(tuple(ci + r * (vi - ci) for ci, vi in zip(c, v)) for v in body.vertices)))


def linear_map(body: Polytope, matrix: Sequence[Sequence[object]]) -> Polytope:
    m = as_matrix([to_point(row) for row in matrix])
    if det(m) == 0:
        raise DegenerateBody("linear map is singular")
    return Polytope(body.dim, tuple(sorted(matvec(m, v) for v in body.vertices)))


def origin(dim: int) -> Point:
    return (Fraction(0),) * dim


def difference_body(body: Polytope) -> Polytope:
    """K = body - body."""
    return minkowski_sum(body, reflect(body, origin(body.dim)))


def half_difference_body(body: Polytope) -> Polytope:
    """H = (body - body) / 2."""
    return scale(difference_body(body), Fraction(1, 2), origin(body.dim))


def symmetry_report(body: Polytope) -> SymmetryReport:
    # a centrally symmetric polytope pairs its vertices through the center,
    # so the vertex centroid is the only candidate
    c = body.centroid
    mirrored = reflect(body, c)
    if set(mirrored.vertices) == set(body.vertices):
        return SymmetryReport(True, c)
    return SymmetryReport(False, None)


# --- intersection -----------------------------------------------------------------------------

def _clip_polygon(subject: list[Point], clip: list[Point]) -> list[Point]:
    """Sutherland-Hodgman clipping of one CCW polygon by another, in exact arithmetic."""
    output = list(subject)
    for a, b in zip(clip, clip[1:] + clip[:1]):
        if not output:
            break
        edge = sub(b, a)

        def side(p: Point) -> Fraction:
            return edge[0] * (p[1] - a[1]) - edge[1] * (p[0] - a[0])

        inp, output = output, []
        s = inp[-1]
        for e in inp:
            se, ss = side(e), side(s)
            if se >= 0:
                if ss < 0:
                    output.append(_segment_cut(s, e, ss, se))
                output.append(e)
            elif ss >= 0:
                output.append(_segment_cut(s, e, ss, se))
            s = e
    return output


def _segment_cut(s: Point, e: Point, ss: Fraction, se: Fraction) -> Point:
    t = ss / (ss - se)
    return tuple(si + t * (ei - si) for si, ei in zip(s, e))


def _enumerate_vertices(facets: Sequence[Facet], dim: int) -> list[Point]:
    mat = cdd.Matrix([[f.offset, *(-c for c in f.normal)] for f in facets], number_type="fraction")
    mat.rep_type = cdd.RepType.INEQUALITY
    gens = cdd.Polyhedron(mat).get_generators()
    # leading 1 marks a vertex, 0 a ray; intersections of bounded bodies have no rays
    out = {tuple(Fraction(c) for c in gens[i][1:]) for i in range(gens.row_size) if gens[i][0] == 1}
    return sorted(p for p in out if len(p) == dim)


def intersection(p: Polytope, q: Polytope) -> Polytope | None:
    """Convex intersection; None when the interiors are disjoint."""
    _check_dims(p, q)
    d = p.dim
    if d == 1:
        lo = max(p.bounds[0][0], q.bounds[0][0])
        hi = min(p.bounds[1][0], q.bounds[1][0])
        return Polytope(1, ((lo,), (hi,))) if lo < hi else None
    if d == 2:
        pts = _clip_polygon(_monotone_chain(p.vertices), _monotone_chain(q.vertices))
    else:
        pts = _enumerate_vertices(p.facets + q.facets, d)
    if len(set(pts)) <= d or affine_rank(sorted(set(pts))) < d:
        return None
    return convex_hull(pts)
