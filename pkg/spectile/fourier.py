"""Fourier transforms of polytope indicators.

Convention: ``ft(P)(xi) = integral over P of exp(-2 pi i <xi, x>) dx``. Each simplex of a
triangulation contributes ``d! vol(S) * exp[z_0, ..., z_d]`` with ``z_j = -2 pi i <xi, v_j>``.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from spectile.errors import DimensionMismatch, GridTooCoarse
from spectile.geometry import Polytope, intersection, simplex_volume, translate, volume
from spectile.utils import to_fraction, to_point

logger = logging.getLogger(__name__)

# rows whose closest pair of nodes is nearer than this leave the vectorized closed form
CLOSED_FORM_MIN_GAP = 1e-3
# clusters of nodes at most this wide are summed as a power series
SERIES_RADIUS = 0.5
SERIES_TERMS = 40

DEFAULT_ZERO_TOLERANCE = 1e-9


@dataclass(frozen=True)
class GridDomain:
    origin: tuple[float, ...]
    spacing: tuple[float, ...]
    extent: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.origin) == len(self.spacing) == len(self.extent)):
            raise DimensionMismatch("origin, spacing and extent must have one entry per axis")
        if any(h <= 0 for h in self.spacing):
            raise GridTooCoarse("grid spacing must be positive")
        if any(n < 1 for n in self.extent):
            raise GridTooCoarse("grid needs at least one sample per axis")

    @classmethod
    def from_box(cls, lo: Sequence[float], hi: Sequence[float], count: int) -> "GridDomain":
        if count < 2:
            raise GridTooCoarse("probe grids need at least two samples per axis")
        spacing = tuple((b - a) / (count - 1) for a, b in zip(lo, hi))
        return cls(tuple(float(a) for a in lo), spacing, (count,) * len(lo))

    @property
    def dim(self) -> int:
        return len(self.origin)

    @property
    def size(self) -> int:
        return int(np.prod(self.extent))

    @property
    def lo(self) -> tuple[float, ...]:
        return self.origin

    @property
    def hi(self) -> tuple[float, ...]:
        return tuple(o + h * (n - 1) for o, h, n in zip(self.origin, self.spacing, self.extent))

    def axes(self) -> list[np.ndarray]:
        return [o + h * np.arange(n) for o, h, n in zip(self.origin, self.spacing, self.extent)]

    def points(self) -> np.ndarray:
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples on a regular grid, stored with shape ``domain.extent`` (row-major)."""

    domain: GridDomain
    values: np.ndarray

    def __post_init__(self):
        if self.values.size != self.domain.size:
            raise DimensionMismatch(
                f"grid holds {self.values.size} values, extent needs {self.domain.size}"
            )
        object.__setattr__(self, "values", np.asarray(self.values).reshape(self.domain.extent))

    @property
    def dim(self) -> int:
        return self.domain.dim

    def support_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        pts = self.domain.points()[np.abs(self.values.ravel()) > 0]
        if not len(pts):
            zero = np.zeros(self.dim)
            return zero, zero
        return pts.min(axis=0), pts.max(axis=0)


# --- divided differences of exp ---------------------------------------------------------------

def _series_divided_difference(z: Sequence[complex]) -> complex:
    c = sum(z) / len(z)
    n = len(z) - 1
    h = [1 + 0j] + [0j] * (SERIES_TERMS - 1)
    for y in (zi - c for zi in z):
        for k in range(1, SERIES_TERMS):
            h[k] += y * h[k - 1]
    total = sum(h[k] / math.factorial(k + n) for k in range(SERIES_TERMS))
    return cmath.exp(c) * total


def exp_divided_difference(z: Sequence[complex]) -> complex:
    """exp[z_0, ..., z_n], stable for coincident or nearly coincident nodes."""
    z = list(z)
    if len(z) == 1:
        return cmath.exp(z[0])
    pairs = [(abs(z[i] - z[j]), i, j) for i in range(len(z)) for j in range(i + 1, len(z))]
    spread, i, j = max(pairs)
    if spread <= SERIES_RADIUS:
        return _series_divided_difference(z)
    without_i = z[:i] + z[i + 1:]
    without_j = z[:j] + z[j + 1:]
    return (exp_divided_difference(without_i) - exp_divided_difference(without_j)) / (z[j] - z[i])


def _exp_divided_differences(z: np.ndarray) -> np.ndarray:
    n, m = z.shape
    diff = z[:, :, None] - z[:, None, :]
    idx = np.arange(m)
    diff[:, idx, idx] = 1.0
    gap = np.abs(diff)
    gap[:, idx, idx] = np.inf
    good = gap.min(axis=(1, 2)) >= CLOSED_FORM_MIN_GAP
    out = np.empty(n, dtype=complex)
    if good.any():
        out[good] = np.sum(np.exp(z[good]) / np.prod(diff[good], axis=2), axis=1)
    for row in np.flatnonzero(~good):
        out[row] = exp_divided_difference(z[row])
    return out


# --- closed-form transform --------------------------------------------------------------------

@lru_cache(maxsize=256)
def _simplex_data(body: Polytope) -> tuple[np.ndarray, np.ndarray]:
    simplices = body.simplices
    nodes = np.array([[[float(c) for c in v] for v in s] for s in simplices], dtype=float)
    weights = np.array(
        [float(simplex_volume(s) * math.factorial(body.dim)) for s in simplices], dtype=float
    )
    return nodes, weights


def _box_transform(lo: Sequence[Fraction], hi: Sequence[Fraction], xi: np.ndarray) -> np.ndarray:
    out = np.ones(xi.shape[0], dtype=complex)
    for axis, (a, b) in enumerate(zip(lo, hi)):
        a, b = float(a), float(b)
        x = xi[:, axis]
        out *= (b - a) * np.exp(-1j * np.pi * x * (a + b)) * np.sinc(x * (b - a))
    return out


def _as_frequencies(body: Polytope, xi) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(xi, dtype=float))
    if arr.shape[1] != body.dim:
        raise DimensionMismatch(f"frequencies have {arr.shape[1]} coordinates, body has {body.dim}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatch("frequencies must be finite")
    return arr


def ft_indicator_many(body: Polytope, xi) -> np.ndarray:
    freqs = _as_frequencies(body, xi)
    if body.box is not None:
        return _box_transform(*body.box, freqs)
    nodes, weights = _simplex_data(body)
    out = np.zeros(freqs.shape[0], dtype=complex)
    for s in range(nodes.shape[0]):
        z = -2j * np.pi * (freqs @ nodes[s].T)
        out += weights[s] * _exp_divided_differences(z)
    return out


def ft_indicator(body: Polytope, xi: Sequence[float]) -> complex:
    return complex(ft_indicator_many(body, [xi])[0])


def ft_autocorrelation_many(body: Polytope, xi) -> np.ndarray:
    return np.abs(ft_indicator_many(body, xi)) ** 2


def ft_autocorrelation(body: Polytope, xi: Sequence[float]) -> float:
    """|ft(H)(xi)|^2, the transform of x -> vol(H & (H + x))."""
    return float(ft_autocorrelation_many(body, [xi])[0])


def zero_test_many(body: Polytope, xi, tau: float = DEFAULT_ZERO_TOLERANCE) -> np.ndarray:
    if tau <= 0:
        raise ValueError("zero-test tolerance must be positive")
    return np.abs(ft_indicator_many(body, xi)) <= tau * float(volume(body))


def zero_test(body: Polytope, xi: Sequence[float], tau: float = DEFAULT_ZERO_TOLERANCE) -> bool:
    """True iff |ft(body)(xi)| <= tau * vol(body)."""
    return bool(zero_test_many(body, [xi], tau)[0])


# --- autocorrelation --------------------------------------------------------------------------

def autocorrelation(body: Polytope, x: Sequence[object]) -> Fraction:
    """vol(H & (H + x)) in exact arithmetic; zero outside H - H."""
    shift = to_point(x)
    if len(shift) != body.dim:
        raise DimensionMismatch("shift has the wrong dimension")
    if not any(shift):
        return volume(body)
    common = intersection(body, translate(body, shift))
    return volume(common) if common is not None else Fraction(0)


def sample_autocorrelation_grid(body: Polytope, h: object) -> GridFunction:
    step = to_fraction(h)
    if step <= 0:
        raise GridTooCoarse("grid spacing must be positive")
    lo, hi = body.bounds
    first = [math.floor((a - b) / step) for a, b in zip(lo, hi)]
    last = [math.ceil((b - a) / step) for a, b in zip(lo, hi)]
    extent = tuple(l - f + 1 for f, l in zip(first, last))
    domain = GridDomain(tuple(float(f * step) for f in first), (float(step),) * body.dim, extent)
    values = np.zeros(extent, dtype=float)
    for index in np.ndindex(*extent):
        shift = tuple((f + k) * step for f, k in zip(first, index))
        values[index] = float(autocorrelation(body, shift))
    logger.debug("sampled autocorrelation on %s grid points", values.size)
    return GridFunction(domain, values)


def grid_fourier(grid: GridFunction, xi: Sequence[float]) -> complex:
    pts = grid.domain.points()
    phase = np.exp(-2j * np.pi * (pts @ np.asarray(xi, dtype=float)))
    cell = float(np.prod(grid.domain.spacing))
    return complex(np.sum(grid.values.ravel() * phase) * cell)


# --- grid oracle ------------------------------------------------------------------------------

def _facet_arrays(body: Polytope) -> tuple[np.ndarray, np.ndarray]:
    normals = np.array([[float(c) for c in f.normal] for f in body.facets], dtype=float)
    offsets = np.array([float(f.offset) for f in body.facets], dtype=float)
    return normals, offsets


def dft_oracle(body: Polytope, xi: Sequence[float], h: float) -> complex:
    """Midpoint Riemann sum of the transform over a rasterized body.

    Boundary cells give O(h) error in general and close to O(h^2) for convex bodies,
    since misclassified cells on opposite sides largely cancel.
    """
    h = float(h)
    if not h > 0:
        raise GridTooCoarse(f"grid spacing must be positive, got {h}")
    lo, hi = body.bounds
    counts = [math.ceil((float(b) - float(a)) / h) for a, b in zip(lo, hi)]
    if any(n < 2 for n in counts):
        raise GridTooCoarse(f"spacing {h} leaves fewer than two samples on some axis")
    axes = [float(a) + h * (np.arange(n) + 0.5) for a, n in zip(lo, counts)]
    normals, offsets = _facet_arrays(body)
    freq = np.asarray(xi, dtype=float)
    total = 0j
    for first in axes[0]:
        mesh = np.meshgrid(np.array([first]), *axes[1:], indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        inside = np.all(pts @ normals.T <= offsets + 1e-12, axis=1)
        if inside.any():
            total += np.sum(np.exp(-2j * np.pi * (pts[inside] @ freq)))
    return complex(total * h ** body.dim)


def richardson(body: Polytope, xi: Sequence[float], h: float) -> complex:
    """Richardson step 2 I(h/2) - I(h) on the grid oracle."""
    return 2 * dft_oracle(body, xi, h / 2) - dft_oracle(body, xi, h)
