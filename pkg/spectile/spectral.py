"""Orthogonality and completeness checks for exponential systems on a polytope.

A finite window can refute a candidate spectrum but never prove one, hence the
three-valued :class:`Verdict`.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from spectile.errors import DimensionMismatch, InsufficientWindow
from spectile.fourier import (
    DEFAULT_ZERO_TOLERANCE,
    GridDomain,
    ft_autocorrelation_many,
    ft_indicator,
    zero_test_many,
)
from spectile.geometry import Polytope, symmetry_report, volume
from spectile.linalg import det, transpose
from spectile.lattice import (
    Box,
    Lattice,
    PointSet,
    density,
    dual,
    enumerate_window,
    same_lattice,
)
from spectile.tiling import TilingReport, support_condition_necessary, verify_tiling
from spectile.utils import map_chunks

logger = logging.getLogger(__name__)

DEFAULT_COMPLETENESS_TOLERANCE = 1e-6
TAIL_SAFETY = 4.0
# irrational multiples keep the sample spheres off the integer zeros of box transforms
TAIL_RADII = tuple(math.sqrt(2) * 2.0 ** k for k in range(2, 7))
# windows with more points than this are checked against their central point only
FULL_PAIR_LIMIT = 3000


class Verdict(str, enum.Enum):
    Verified = "verified-on-window"
    Refuted = "refuted"
    Inconclusive = "inconclusive"


@dataclass(frozen=True, eq=False)
class OrthogonalityGraph:
    nodes: PointSet
    edges: tuple[tuple[int, int], ...]
    tau: float

    def is_complete(self) -> bool:
        n = len(self.nodes)
        return len(self.edges) == n * (n - 1) // 2

    def neighbors(self, i: int) -> list[int]:
        return sorted({b for a, b in self.edges if a == i} | {a for a, b in self.edges if b == i})


@dataclass(frozen=True)
class TailEstimate:
    constant: float
    bound: float
    exclusion_radius: float


@dataclass(frozen=True)
class SpectrumReport:
    verdict: Verdict
    is_orthogonal: bool
    completeness_deviation: float
    unexplained_deviation: float
    tail_bound: float
    tail_constant: float
    exclusion_radius: float
    probe_window: Box
    probe_count: int
    spectrum_size: int
    pairs_checked: int
    tolerance_zero: float
    tolerance_completeness: float
    witness: dict | None


@dataclass(frozen=True)
class LatticeSpectrumReport:
    is_spectrum: bool
    dual_tiles: bool
    orthogonal: bool
    density_matches: bool
    agree: bool
    tiling: TilingReport
    orthogonality_witness: tuple[float, ...] | None


@dataclass(frozen=True)
class SweepEntry:
    tiling_lattice: Lattice
    spectrum: Lattice
    report: SpectrumReport


def inner_product(body: Polytope, lam: Sequence[float], mu: Sequence[float]) -> complex:
    """<e_lam, e_mu> over the body, which equals ft(1_body)(mu - lam)."""
    diff = np.asarray(mu, dtype=float) - np.asarray(lam, dtype=float)
    return ft_indicator(body, diff)


def orthogonality_graph(
    body: Polytope, candidates: PointSet, tau: float = DEFAULT_ZERO_TOLERANCE
) -> OrthogonalityGraph:
    if candidates.dim != body.dim:
        raise DimensionMismatch("candidates and body dimensions differ")
    n = len(candidates)
    if n < 2:
        return OrthogonalityGraph(candidates, (), tau)
    i, j = np.triu_indices(n, k=1)
    pairs = np.column_stack([i, j])
    pts = candidates.points

    def zeros(rows: np.ndarray) -> np.ndarray:
        return zero_test_many(body, pts[rows[:, 0]] - pts[rows[:, 1]], tau)

    mask = map_chunks(zeros, pairs, chunk=65536)
    edges = tuple((int(a), int(b)) for a, b in pairs[mask])
    logger.debug("orthogonality graph: %d nodes, %d edges", n, len(edges))
    return OrthogonalityGraph(candidates, edges, tau)


def _sphere_directions(dim: int, radius: float) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        n = max(64, math.ceil(16 * radius))
        t = np.linspace(0, 2 * np.pi, n, endpoint=False)
        return np.column_stack([np.cos(t), np.sin(t)])
    if dim == 3:
        # Fibonacci points, dense enough to resolve peaks of angular width 1 / radius
        n = max(128, math.ceil(16 * radius ** 2))
        k = np.arange(n) + 0.5
        z = 1 - 2 * k / n
        phi = np.pi * (1 + 5 ** 0.5) * k
        r = np.sqrt(1 - z ** 2)
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    raise DimensionMismatch(f"tail estimates support d <= 3, got {dim}")


def estimate_tail(body: Polytope, point_density: float, exclusion_radius: float) -> TailEstimate:
    """Bound the completeness mass carried by frequencies beyond ``exclusion_radius``.

    The mean of |ft|^2 / vol^2 over a sphere of radius r is fitted as C^2 r^-(d+1); the
    shells beyond the window then carry about dens * |S^(d-1)| * C^2 / r.
    """
    d = body.dim
    vol2 = float(volume(body)) ** 2
    radii = TAIL_RADII if d < 3 else TAIL_RADII[:-1]
    c2 = 0.0
    for r in radii:
        mean = float(np.mean(ft_autocorrelation_many(body, r * _sphere_directions(d, r)))) / vol2
        c2 = max(c2, mean * r ** (d + 1))
    surface = 2 * math.pi ** (d / 2) / math.gamma(d / 2)
    bound = TAIL_SAFETY * point_density * surface * c2 / exclusion_radius
    logger.debug("tail constant %.4g, bound %.4g at radius %.4g", math.sqrt(c2), bound, exclusion_radius)
    return TailEstimate(math.sqrt(c2), bound, exclusion_radius)


def _orthogonality_differences(spectrum: PointSet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    pts = spectrum.points
    n = len(pts)
    if n < 2:
        empty = np.empty(0, dtype=int)
        return np.empty((0, spectrum.dim)), empty, empty
    if n <= FULL_PAIR_LIMIT:
        i, j = np.triu_indices(n, k=1)
        return pts[i] - pts[j], i, j
    center = (np.array(spectrum.window.lo) + np.array(spectrum.window.hi)) / 2
    anchor = int(np.argmin(np.linalg.norm(pts - center, axis=1)))
    others = np.flatnonzero(np.arange(n) != anchor)
    logger.debug("window has %d points, checking differences against point %d only", n, anchor)
    return pts[others] - pts[anchor], others, np.full(len(others), anchor)


def completeness_sums(
    body: Polytope, spectrum: PointSet, probes: np.ndarray, *, workers: int = 1
) -> np.ndarray:
    """sum over lambda of |ft(1_body)(x - lambda)|^2 / vol^2 at each probe x."""
    pts = spectrum.points
    vol2 = float(volume(body)) ** 2
    chunk = max(1, 200_000 // max(1, len(pts)))

    def sums(xs: np.ndarray) -> np.ndarray:
        diffs = (xs[:, None, :] - pts[None, :, :]).reshape(-1, body.dim)
        return ft_autocorrelation_many(body, diffs).reshape(len(xs), len(pts)).sum(axis=1) / vol2

    return map_chunks(sums, probes, workers=workers, chunk=chunk)


def verify_spectrum_window(
    body: Polytope,
    spectrum: PointSet,
    probes: GridDomain,
    tau_zero: float = DEFAULT_ZERO_TOLERANCE,
    tau_completeness: float = DEFAULT_COMPLETENESS_TOLERANCE,
    *,
    workers: int = 1,
) -> SpectrumReport:
    # sums are divided by vol^2 so that a spectrum gives exactly 1
    if spectrum.dim != body.dim or probes.dim != body.dim:
        raise DimensionMismatch("body, spectrum and probes must share a dimension")
    if not len(spectrum):
        raise InsufficientWindow("spectrum window is empty")
    probe_box = Box(probes.lo, probes.hi)
    exclusion = min(
        min(p - w for p, w in zip(probe_box.lo, spectrum.window.lo)),
        min(w - p for p, w in zip(probe_box.hi, spectrum.window.hi)),
    )
    if exclusion <= 0:
        raise InsufficientWindow("probe box must sit strictly inside the spectrum window")

    diffs, left, right = _orthogonality_differences(spectrum)
    orthogonal = True
    witness = None
    if len(diffs):
        zeros = map_chunks(lambda rows: zero_test_many(body, rows, tau_zero), diffs, workers=workers, chunk=65536)
        if not zeros.all():
            orthogonal = False
            k = int(np.flatnonzero(~zeros)[0])
            lam, mu = spectrum.points[right[k]], spectrum.points[left[k]]
            witness = {
                "kind": "non-orthogonal-pair",
                "lambda": [float(x) for x in lam],
                "mu": [float(x) for x in mu],
                "inner_product_magnitude": abs(inner_product(body, lam, mu)),
            }

    tail = estimate_tail(body, spectrum.window_density(), exclusion)
    xs = probes.points()
    sums = completeness_sums(body, spectrum, xs, workers=workers)
    worst = float(np.abs(sums - 1).max())

    if not orthogonal:
        verdict = Verdict.Refuted
    elif (sums - 1).max() > tau_completeness:
        k = int(np.argmax(sums))
        verdict = Verdict.Refuted
        witness = {"kind": "bessel-excess", "probe": [float(x) for x in xs[k]], "sum": float(sums[k])}
    elif (1 - sums).max() > tau_completeness + 2 * tail.bound:
        k = int(np.argmin(sums))
        verdict = Verdict.Refuted
        witness = {"kind": "missing-mass", "probe": [float(x) for x in xs[k]], "sum": float(sums[k])}
    elif worst <= tau_completeness + tail.bound:
        verdict = Verdict.Verified
    else:
        verdict = Verdict.Inconclusive

    logger.info("spectrum window verdict: %s (deviation %.3g, tail %.3g)", verdict.value, worst, tail.bound)
    return SpectrumReport(
        verdict=verdict,
        is_orthogonal=orthogonal,
        completeness_deviation=worst,
        unexplained_deviation=max(0.0, worst - tail.bound),
        tail_bound=tail.bound,
        tail_constant=tail.constant,
        exclusion_radius=exclusion,
        probe_window=probe_box,
        probe_count=probes.size,
        spectrum_size=len(spectrum),
        pairs_checked=len(diffs),
        tolerance_zero=tau_zero,
        tolerance_completeness=tau_completeness,
        witness=witness,
    )


def body_center(body: Polytope) -> list[float]:
    lo, hi = body.bounds
    return [float(a + b) / 2 for a, b in zip(lo, hi)]


def centered_probes(body: Polytope, count: int) -> GridDomain:
    center = body_center(body)
    return GridDomain.from_box([c - 0.5 for c in center], [c + 0.5 for c in center], count)


def lattice_spectrum_via_tiling(
    body: Polytope,
    lattice: Lattice,
    *,
    h: float = 1 / 64,
    tau_zero: float = DEFAULT_ZERO_TOLERANCE,
    radius: float | None = None,
    workers: int = 1,
) -> LatticeSpectrumReport:
    """L is a spectrum iff body + L* tiles at level 1; ``agree`` compares with the zero-set test."""
    dual_lattice = dual(lattice)
    lo, hi = body.bounds
    core = Box(tuple(float(x) for x in lo), tuple(float(x) for x in hi))
    span = [float(b - a) for a, b in zip(lo, hi)]
    translates = enumerate_window(dual_lattice, core.expanded(span, span))
    tiling = verify_tiling(body, translates, core, h, workers=workers)
    dual_tiles = tiling.is_tiling and abs(tiling.level_estimate - 1) <= tiling.tolerance
    necessary = support_condition_necessary(body, dual_lattice, tau_zero, radius)
    density_matches = volume(body) * density(lattice) == 1
    agree = dual_tiles == (necessary.holds and density_matches)
    if not agree:
        logger.warning("tiling and orthogonality disagree for lattice %s", lattice.basis)
    return LatticeSpectrumReport(
        is_spectrum=dual_tiles,
        dual_tiles=dual_tiles,
        orthogonal=necessary.holds,
        density_matches=density_matches,
        agree=agree,
        tiling=tiling,
        orthogonality_witness=necessary.witness,
    )


def refute_lattice_spectra(
    body: Polytope,
    lattices: Sequence[Lattice],
    *,
    window_factor: float = 3.0,
    probe_count: int = 5,
    tau_zero: float = DEFAULT_ZERO_TOLERANCE,
    tau_completeness: float = DEFAULT_COMPLETENESS_TOLERANCE,
    workers: int = 1,
) -> list[SpectrumReport]:
    probes = centered_probes(body, probe_count)
    center = body_center(body)
    reports = []
    for lattice in lattices:
        longest = max(float(np.linalg.norm([float(x) for x in g])) for g in lattice.generators())
        window = enumerate_window(lattice, Box.cube(window_factor * max(1.0, longest), lattice.dim, center))
        reports.append(verify_spectrum_window(body, window, probes, tau_zero, tau_completeness, workers=workers))
    refuted = sum(r.verdict is Verdict.Refuted for r in reports)
    logger.info("refuted %d of %d candidate lattices", refuted, len(reports))
    return reports


def _facet_centroids(body: Polytope) -> list[tuple]:
    out = []
    for f in body.facets:
        on = [v for v in body.vertices if f.value(v) == 0]
        out.append(tuple(sum(c) / len(on) for c in zip(*on)))
    return out


def tiling_lattice_candidates(body: Polytope) -> list[Lattice]:
    """Face-to-face tiling lattices suggested by a centrally symmetric body.

    Twice the offset of a facet centroid from the center carries the body onto the
    neighbour across that facet. Every d of these vectors spanning a cell of volume
    vol(body) gives a candidate, one per distinct lattice.
    """
    sym = symmetry_report(body)
    if not sym.is_symmetric:
        return []
    vol = volume(body)
    vectors = sorted({tuple(2 * (x - c) for x, c in zip(p, sym.center)) for p in _facet_centroids(body)})
    found: list[Lattice] = []
    for combo in itertools.combinations(vectors, body.dim):
        basis = transpose(combo)
        if abs(det(basis)) != vol:
            continue
        candidate = Lattice(basis)
        if not any(same_lattice(candidate, other) for other in found):
            found.append(candidate)
    return found


def symmetric_lattice_sweep(
    body: Polytope,
    *,
    window_radius: float = 8.0,
    probe_count: int = 5,
    tau_zero: float = DEFAULT_ZERO_TOLERANCE,
    tau_completeness: float = DEFAULT_COMPLETENESS_TOLERANCE,
    workers: int = 1,
) -> list[SweepEntry]:
    """Test T* as a spectrum for every candidate tiling lattice T of a symmetric body."""
    probes = centered_probes(body, probe_count)
    center = body_center(body)
    entries = []
    for lattice in tiling_lattice_candidates(body):
        spectrum = dual(lattice)
        window = enumerate_window(spectrum, Box.cube(window_radius, body.dim, center))
        report = verify_spectrum_window(body, window, probes, tau_zero, tau_completeness, workers=workers)
        entries.append(SweepEntry(lattice, spectrum, report))
    return entries
