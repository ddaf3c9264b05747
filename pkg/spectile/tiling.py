"""Translational tilings f + Lambda = w R^d, checked on finite grids.

The support conditions are the lattice forms of the Fourier criteria: for a lattice the
transform of the sum of point masses is ``dens * (point masses on the dual lattice)``, so
"support inside the zero set" becomes a statement about finitely many dual points.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from spectile.errors import DimensionMismatch, GridTooCoarse, InsufficientWindow
from spectile.fourier import (
    DEFAULT_ZERO_TOLERANCE,
    GridFunction,
    autocorrelation,
    ft_indicator_many,
    zero_test_many,
)
from spectile.geometry import Polytope
from spectile.lattice import Box, Lattice, PointSet, density, dual_points, longest_dual_generator
from spectile.utils import map_chunks, to_fraction

logger = logging.getLogger(__name__)

DEFAULT_TILING_TOLERANCE = 1e-9
CHECK_RADIUS_FACTOR = 8

Tile = Union[Polytope, GridFunction]
Probe = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TilingReport:
    level_estimate: float
    max_deviation: float
    value_min: float
    value_max: float
    core_window: Box
    translate_count: int
    margin: float
    support_radius: float
    spacing: float
    sample_count: int
    excluded_count: int
    tolerance: float

    @property
    def is_tiling(self) -> bool:
        return self.max_deviation <= self.tolerance


@dataclass(frozen=True)
class NecessaryConditionReport:
    holds: bool
    witness: tuple[float, ...] | None
    witness_magnitude: float | None
    checked: int
    radius: float
    tolerance: float


@dataclass(frozen=True)
class SufficientConditionReport:
    holds: bool
    implied_level: Fraction | float
    checked: int
    witness: tuple[float, ...] | None
    delta: float
    radius: float
    tolerance: float


def _support_bounds(f: Tile) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(f, Polytope):
        lo, hi = f.bounds
        return np.array([float(x) for x in lo]), np.array([float(x) for x in hi])
    return np.array(f.domain.lo), np.array(f.domain.hi)


def _core_samples(core: Box, h: float) -> np.ndarray:
    axes = [a + h * np.arange(int(math.floor((b - a) / h + 1e-9)) + 1) for a, b in zip(core.lo, core.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def _indicator_sums(body: Polytope, shifts: np.ndarray, h: float):
    normals = np.array([[float(c) for c in f.normal] for f in body.facets], dtype=float)
    offsets = np.array([float(f.offset) for f in body.facets], dtype=float)
    norms = np.linalg.norm(normals, axis=1)
    normals, offsets = normals / norms[:, None], offsets / norms

    def count(xs: np.ndarray) -> np.ndarray:
        sums = np.zeros(len(xs))
        near = np.zeros(len(xs), dtype=bool)
        for lam in shifts:
            dist = (xs - lam) @ normals.T - offsets
            sums += np.all(dist < 0, axis=1)
            # within one spacing of this translate's boundary
            near |= np.all(dist <= h, axis=1) & np.any(dist >= -h, axis=1)
        return np.column_stack([sums, near])

    return count


def _grid_sums(grid: GridFunction, shifts: np.ndarray):
    interp = RegularGridInterpolator(
        grid.domain.axes(), np.real(grid.values), method="linear", bounds_error=False, fill_value=0.0
    )

    def count(xs: np.ndarray) -> np.ndarray:
        sums = np.zeros(len(xs))
        for lam in shifts:
            sums += interp(xs - lam)
        return np.column_stack([sums, np.zeros(len(xs))])

    return count


def verify_tiling(
    f: Tile,
    points: PointSet,
    core: Box,
    h: float = 1 / 64,
    *,
    tol: float = DEFAULT_TILING_TOLERANCE,
    workers: int = 1,
) -> TilingReport:
    """Evaluate sum over lambda of f(x - lambda) on the grid points of ``core``.

    For indicators, samples within ``h`` of some translate's boundary are dropped from the
    statistics: the tiling identity only has to hold almost everywhere.
    """
    if points.dim != core.dim or (isinstance(f, Polytope) and f.dim != core.dim):
        raise DimensionMismatch("tile, point set and core must share a dimension")
    if not h > 0:
        raise GridTooCoarse(f"grid spacing must be positive, got {h}")
    lo_s, hi_s = _support_bounds(f)
    needed = Box(tuple(np.array(core.lo) - hi_s), tuple(np.array(core.hi) - lo_s))
    if not points.window.contains_box(needed):
        raise InsufficientWindow(
            f"translates in {needed.lo}..{needed.hi} can reach the core, window is "
            f"{points.window.lo}..{points.window.hi}"
        )
    margin = min(
        min(c - w for c, w in zip(core.lo, points.window.lo)),
        min(w - c for c, w in zip(core.hi, points.window.hi)),
    )
    support_radius = float(max(np.abs(lo_s).max(), np.abs(hi_s).max()))
    shifts = points.points[needed.contains(points.points)]
    xs = _core_samples(core, h)

    count = _indicator_sums(f, shifts, h) if isinstance(f, Polytope) else _grid_sums(f, shifts)
    result = map_chunks(count, xs, workers=workers)
    sums, near = result[:, 0], result[:, 1].astype(bool)
    kept = sums[~near]
    if not len(kept):
        raise InsufficientWindow("every core sample lies on a translate boundary; refine h")
    level = float(kept.mean())
    report = TilingReport(
        level_estimate=level,
        max_deviation=float(np.abs(kept - level).max()),
        value_min=float(kept.min()),
        value_max=float(kept.max()),
        core_window=core,
        translate_count=len(shifts),
        margin=float(margin),
        support_radius=support_radius,
        spacing=float(h),
        sample_count=len(xs),
        excluded_count=int(near.sum()),
        tolerance=tol,
    )
    logger.debug(
        "tiling check: level %.12g deviation %.3g over %d samples (%d excluded)",
        report.level_estimate, report.max_deviation, report.sample_count, report.excluded_count,
    )
    return report


def tiling_level(f_integral: Fraction | float, lattice: Lattice) -> Fraction | float:
    """w = (integral of f) * dens(Lambda); exact when the integral is rational."""
    if isinstance(f_integral, (Fraction, int)):
        return Fraction(f_integral) * density(lattice)
    return float(f_integral) * float(density(lattice))


def support_condition_necessary(
    body: Polytope,
    lattice: Lattice,
    tau: float = DEFAULT_ZERO_TOLERANCE,
    radius: float | None = None,
) -> NecessaryConditionReport:
    """Every nonzero dual point within ``radius`` must be a zero of ft(1_body).

    This is what ``1_body + lattice`` being a tiling forces; the first violating dual point
    (ordered by norm) is returned as the witness.
    """
    if radius is None:
        radius = CHECK_RADIUS_FACTOR * longest_dual_generator(lattice)
    candidates = dual_points(lattice, radius)
    if not len(candidates):
        return NecessaryConditionReport(True, None, None, 0, radius, tau)
    zeros = zero_test_many(body, candidates.points, tau)
    if zeros.all():
        return NecessaryConditionReport(True, None, None, len(candidates), radius, tau)
    first = int(np.flatnonzero(~zeros)[0])
    xi = candidates.points[first]
    magnitude = float(np.abs(ft_indicator_many(body, [xi])[0]))
    logger.debug("dual point %s is not a zero (|ft| = %.3g)", xi, magnitude)
    return NecessaryConditionReport(False, tuple(float(x) for x in xi), magnitude, len(candidates), radius, tau)


def ball_probes(dim: int, delta: float) -> np.ndarray:
    """Center, 2d axis points and 2^d diagonal points at radius delta / 2."""
    r = delta / 2
    pts = [np.zeros(dim)]
    for i in range(dim):
        for s in (1, -1):
            e = np.zeros(dim)
            e[i] = s * r
            pts.append(e)
    for signs in np.array(np.meshgrid(*[[1, -1]] * dim, indexing="ij")).reshape(dim, -1).T:
        pts.append(signs * r / math.sqrt(dim))
    return np.array(pts)


def support_condition_sufficient(
    probe: Probe,
    lattice: Lattice,
    delta: float,
    radius: float,
    *,
    value_at_zero: Fraction | float | None = None,
    tol: float = 1e-12,
) -> SufficientConditionReport:
    """Check that the transform vanishes on a delta-ball around every nonzero dual point.

    ``probe`` evaluates the transform of f at rows of frequencies. When the hypothesis holds,
    f + lattice tiles at level ft(f)(0) * dens(lattice).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if value_at_zero is None:
        value_at_zero = float(np.real(probe(np.zeros((1, lattice.dim)))[0]))
    level = tiling_level(value_at_zero, lattice)
    candidates = dual_points(lattice, radius)
    offsets = ball_probes(lattice.dim, delta)
    for xi in candidates.points:
        values = np.abs(probe(xi + offsets))
        if np.any(values > tol):
            return SufficientConditionReport(
                False, level, len(candidates), tuple(float(x) for x in xi), delta, radius, tol
            )
    return SufficientConditionReport(True, level, len(candidates), None, delta, radius, tol)


def autocorrelation_probe(body: Polytope, rho: object = 1) -> Probe:
    """x -> vol(H & (H + x / rho)), evaluated exactly at the binary value of each float."""
    r = to_fraction(rho)

    def probe(xs: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(xs)
        return np.array(
            [float(autocorrelation(body, tuple(Fraction(float(c)) / r for c in row))) for row in rows]
        )

    return probe


def indicator_transform_probe(body: Polytope) -> Probe:
    def probe(xs: np.ndarray) -> np.ndarray:
        return ft_indicator_many(body, np.atleast_2d(xs))

    return probe


