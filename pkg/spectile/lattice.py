from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from spectile.errors import DegenerateBody, DimensionMismatch, InsufficientWindow, WindowTooLarge
from spectile.linalg import Matrix, as_matrix, det, inverse, matmul, matvec, solve, transpose
from spectile.utils import to_fraction, to_point

logger = logging.getLogger(__name__)

DEFAULT_POINT_CAP = 10_000_000


@dataclass(frozen=True)
class Box:
    """Closed axis-aligned box."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise DimensionMismatch("box corners differ in dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise InsufficientWindow(f"empty box {self.lo} .. {self.hi}")
        object.__setattr__(self, "lo", tuple(float(a) for a in self.lo))
        object.__setattr__(self, "hi", tuple(float(b) for b in self.hi))

    @classmethod
    def cube(cls, radius: float, dim: int, center: Sequence[float] | None = None) -> "Box":
        c = center if center is not None else (0.0,) * dim
        return cls(tuple(x - radius for x in c), tuple(x + radius for x in c))

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(np.prod([b - a for a, b in zip(self.lo, self.hi)]))

    def contains(self, points: np.ndarray, tol: float = 1e-9) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all((pts >= np.array(self.lo) - tol) & (pts <= np.array(self.hi) + tol), axis=1)

    def contains_box(self, other: "Box", tol: float = 1e-9) -> bool:
        return all(a - tol <= c and d <= b + tol for a, b, c, d in zip(self.lo, self.hi, other.lo, other.hi))

    def expanded(self, lo_margin: Sequence[float], hi_margin: Sequence[float]) -> "Box":
        return Box(
            tuple(a - m for a, m in zip(self.lo, lo_margin)),
            tuple(b + m for b, m in zip(self.hi, hi_margin)),
        )

    def shifted(self, t: Sequence[float]) -> "Box":
        return Box(tuple(a + s for a, s in zip(self.lo, t)), tuple(b + s for b, s in zip(self.hi, t)))


@dataclass(frozen=True)
class Lattice:
    """Lambda = A Z^d; the generators are the columns of ``basis``."""

    basis: Matrix

    def __post_init__(self):
        m = as_matrix(self.basis)
        object.__setattr__(self, "basis", m)
        if not m or any(len(row) != len(m) for row in m):
            raise DimensionMismatch("lattice basis must be a square matrix")
        if det(m) == 0:
            raise DegenerateBody("lattice basis is singular")

    @classmethod
    def integer(cls, dim: int) -> "Lattice":
        return cls.diagonal([1] * dim)

    @classmethod
    def diagonal(cls, entries: Sequence[object]) -> "Lattice":
        diag = to_point(entries)
        return cls(tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(len(diag))) for i in range(len(diag))))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def determinant(self) -> Fraction:
        return det(self.basis)

    @cached_property
    def inverse(self) -> Matrix:
        return inverse(self.basis)

    @cached_property
    def float_basis(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.basis], dtype=float)

    def generators(self) -> list[tuple[Fraction, ...]]:
        return list(transpose(self.basis))


def dual(lattice: Lattice) -> Lattice:
    """Lambda* = A^{-T} Z^d."""
    return Lattice(transpose(lattice.inverse))


def covolume(lattice: Lattice) -> Fraction:
    return abs(lattice.determinant)


def density(lattice: Lattice) -> Fraction:
    return 1 / covolume(lattice)


def scaled(lattice: Lattice, factor: object) -> Lattice:
    s = to_fraction(factor)
    return Lattice(tuple(tuple(s * x for x in row) for row in lattice.basis))


def transformed(lattice: Lattice, matrix: Sequence[Sequence[object]]) -> Lattice:
    """M Lambda for a nonsingular rational matrix M."""
    return Lattice(matmul(as_matrix([to_point(r) for r in matrix]), lattice.basis))


def contains(lattice: Lattice, point: Sequence[object]) -> bool:
    coeffs = solve(lattice.basis, to_point(point))
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def same_lattice(a: Lattice, b: Lattice) -> bool:
    """Mutual membership of generators."""
    return all(contains(b, g) for g in a.generators()) and all(contains(a, g) for g in b.generators())


@dataclass(frozen=True, eq=False)
class PointSet:
    """Finite window of points; ``coefficients`` holds integer lattice coordinates when known."""

    points: np.ndarray
    window: Box
    coefficients: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, self.window.dim)
        object.__setattr__(self, "points", pts)
        if len(pts) and not np.all(self.window.contains(pts)):
            raise InsufficientWindow("point set has points outside its window")
        if self.coefficients is not None and len(self.coefficients) != len(pts):
            raise DimensionMismatch("coefficient rows must match points")

    @classmethod
    def from_points(cls, points: Sequence[Sequence[float]], window: Box | None = None) -> "PointSet":
        arr = np.atleast_2d(np.asarray(points, dtype=float))
        if window is None:
            window = Box(tuple(arr.min(axis=0)), tuple(arr.max(axis=0)))
        return cls(arr, window)

    @property
    def dim(self) -> int:
        return self.window.dim

    def __len__(self) -> int:
        return len(self.points)

    def exact_points(self, lattice: Lattice) -> list[tuple[Fraction, ...]]:
        if self.coefficients is None:
            raise DimensionMismatch("point set was not enumerated from a lattice")
        return [matvec(lattice.basis, [Fraction(int(c)) for c in row]) for row in self.coefficients]

    def shifted(self, t: Sequence[float]) -> "PointSet":
        return PointSet(self.points + np.asarray(t, dtype=float), self.window.shifted(t))

    def window_density(self) -> float:
        return len(self) / self.window.volume if self.window.volume > 0 else float("inf")


def enumerate_window(lattice: Lattice, window: Box, cap: int = DEFAULT_POINT_CAP) -> PointSet:
    """All lattice points in the closed box, ordered lexicographically by coefficients."""
    if window.dim != lattice.dim:
        raise DimensionMismatch("window and lattice dimensions differ")
    inv = np.array([[float(x) for x in row] for row in lattice.inverse], dtype=float)
    corners = np.array(list(itertools.product(*zip(window.lo, window.hi))), dtype=float)
    coeffs = corners @ inv.T
    lo = np.floor(coeffs.min(axis=0) - 1e-9).astype(np.int64)
    hi = np.ceil(coeffs.max(axis=0) + 1e-9).astype(np.int64)
    candidates = int(np.prod(hi - lo + 1))
    if candidates > cap:
        raise WindowTooLarge(f"window needs {candidates} candidate points, cap is {cap}")
    mesh = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    n = np.stack([m.ravel() for m in mesh], axis=-1)
    pts = n @ lattice.float_basis.T
    keep = window.contains(pts)
    logger.debug("window enumeration kept %d of %d candidates", int(keep.sum()), candidates)
    return PointSet(pts[keep], window, n[keep])


def dual_points(lattice: Lattice, radius: float, cap: int = DEFAULT_POINT_CAP) -> PointSet:
    """Nonzero points of the dual lattice with |xi| <= radius, by (norm, coordinates)."""
    window = Box.cube(radius, lattice.dim)
    found = enumerate_window(dual(lattice), window, cap)
    norms = np.linalg.norm(found.points, axis=1)
    keep = (norms > 1e-12) & (norms <= radius + 1e-9)
    pts, coeffs, norms = found.points[keep], found.coefficients[keep], norms[keep]
    order = np.lexsort(tuple(pts[:, i] for i in reversed(range(lattice.dim))) + (np.round(norms, 12),))
    return PointSet(pts[order], window, coeffs[order])


def longest_dual_generator(lattice: Lattice) -> float:
    return max(float(np.linalg.norm([float(x) for x in g])) for g in dual(lattice).generators())


def difference_set(points: PointSet) -> PointSet:
    """Pairwise differences p - q, p != q, deduplicated."""
    pts = points.points
    lo = tuple(a - b for a, b in zip(points.window.lo, points.window.hi))
    window = Box(lo, tuple(-a for a in lo))
    if len(pts) < 2:
        return PointSet(np.empty((0, points.dim)), window)
    off = ~np.eye(len(pts), dtype=bool)
    diffs = (pts[:, None, :] - pts[None, :, :])[off]
    if points.coefficients is not None:
        c = points.coefficients
        cdiffs = (c[:, None, :] - c[None, :, :])[off]
        cdiffs, idx = np.unique(cdiffs, axis=0, return_index=True)
        return PointSet(diffs[idx], window, cdiffs)
    _, idx = np.unique(np.round(diffs, 12), axis=0, return_index=True)
    return PointSet(diffs[np.sort(idx)], window)


@dataclass(frozen=True)
class DensityEstimate:
    value: float
    error_bar: float
    radius: float


def estimate_density(lattice: Lattice, radius: float, cap: int = DEFAULT_POINT_CAP) -> DensityEstimate:
    """Count points in [-R, R]^d; boundary cells bound the error by about d * diam(cell) / R."""
    d = lattice.dim
    found = enumerate_window(lattice, Box.cube(radius, d), cap)
    value = len(found) / (2 * radius) ** d
    cell = sum(float(np.linalg.norm([float(x) for x in g])) for g in lattice.generators())
    error = float(density(lattice)) * d * cell / radius
    return DensityEstimate(value, error, radius)


def _pythagorean_rotation(rng: np.random.Generator) -> Matrix:
    a, b = int(rng.integers(1, 8)), int(rng.integers(0, 8))
    n = a * a + b * b
    c, s = Fraction(a * a - b * b, n), Fraction(2 * a * b, n)
    return as_matrix([[c, -s], [s, c]])


def sample_unit_density_lattices(dim: int, count: int, seed: int = 0) -> list[Lattice]:
    """Random rational lattices of determinant 1 (density 1)."""
    rng = np.random.default_rng(seed)
    out: list[Lattice] = []
    while len(out) < count:
        scales = [Fraction(int(rng.integers(1, 6)), int(rng.integers(1, 6))) for _ in range(dim - 1)]
        diag = scales + [1 / math.prod(scales)] if scales else [Fraction(1)]
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                if i == j:
                    row.append(diag[i])
                elif j > i:
                    row.append(Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 5))))
                else:
                    row.append(Fraction(0))
            rows.append(row)
        basis = as_matrix(rows)
        if dim == 2:
            basis = matmul(_pythagorean_rotation(rng), basis)
        out.append(Lattice(basis))
    return out
