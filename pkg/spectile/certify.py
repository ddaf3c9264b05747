"""Exact non-spectrality certificates. ``rho`` is carried as ``rho^d`` plus a rational upper bound."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from spectile.errors import DegenerateBody, InconsistentCertificate, SymmetricBody
from spectile.fourier import autocorrelation
from spectile.geometry import (
    Polytope,
    SymmetryReport,
    difference_body,
    half_difference_body,
    origin,
    scale,
    symmetry_report,
    volume,
)
from spectile.utils import integer_root, rational_root_upper

logger = logging.getLogger(__name__)

NORMALIZATION_EXACT = "exact"
NORMALIZATION_HOMOGENEOUS = "homogeneous"


@dataclass(frozen=True)
class NonSpectralityCertificate:
    body: Polytope
    dim: int
    normalization: str
    body_volume: Fraction
    vol_H: Fraction
    bm_gap: Fraction
    rho_pow_d: Fraction
    rho_upper: Fraction
    level_from_tiling: Fraction
    level_from_value_at_zero: Fraction
    contradiction_margin: Fraction
    symmetry: SymmetryReport


def normalize_volume(body: Polytope) -> Polytope | None:
    """Scale about the vertex centroid to volume 1; None when the factor is irrational."""
    vol = volume(body)
    if vol <= 0:
        raise DegenerateBody("cannot normalize a body of zero volume")
    if vol == 1:
        return body
    factor = integer_root(1 / vol, body.dim)
    if factor is None:
        logger.debug("volume %s has no rational %d-th root", vol, body.dim)
        return None
    return scale(body, factor, body.centroid)


def brunn_minkowski_gap(body: Polytope) -> tuple[Fraction, Fraction]:
    """(vol H, vol H - vol body) with H the half difference body."""
    vol = volume(body)
    if vol <= 0:
        raise DegenerateBody("body is not full-dimensional")
    vol_h = volume(half_difference_body(body))
    return vol_h, vol_h - vol


def _levels(volume_ratio: Fraction, rho_pow_d: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    tiling = volume_ratio
    at_zero = rho_pow_d * volume_ratio ** 2
    return tiling, at_zero, at_zero - tiling


def certify_nonspectral(body: Polytope) -> NonSpectralityCertificate:
    sym = symmetry_report(body)
    if sym.is_symmetric:
        raise SymmetricBody("body is centrally symmetric; run the lattice tiling analysis instead")
    if volume(body) <= 0:
        raise DegenerateBody("body is not full-dimensional")

    normalized = normalize_volume(body)
    mode = NORMALIZATION_EXACT if normalized is not None else NORMALIZATION_HOMOGENEOUS
    subject = normalized if normalized is not None else body
    body_volume = volume(subject)
    vol_h, gap = brunn_minkowski_gap(subject)
    # ratio vol H / vol body is scale free and equals vol H once the body has measure 1
    ratio = vol_h / body_volume
    if ratio <= 1:
        raise SymmetricBody("Brunn-Minkowski gap vanished on a body reported non-symmetric")

    rho_pow_d = (1 + ratio) / (2 * ratio)
    rho_upper = rational_root_upper(rho_pow_d, subject.dim)
    tiling, at_zero, margin = _levels(ratio, rho_pow_d)
    cert = NonSpectralityCertificate(
        body=subject,
        dim=subject.dim,
        normalization=mode,
        body_volume=body_volume,
        vol_H=vol_h,
        bm_gap=gap,
        rho_pow_d=rho_pow_d,
        rho_upper=rho_upper,
        level_from_tiling=tiling,
        level_from_value_at_zero=at_zero,
        contradiction_margin=margin,
        symmetry=sym,
    )
    logger.info("certificate issued (%s): vol_H=%s margin=%s", mode, vol_h, margin)
    return cert


def _check(cert: NonSpectralityCertificate) -> None:
    body = cert.body
    if cert.dim != body.dim:
        raise InconsistentCertificate("dim")
    if symmetry_report(body).is_symmetric or cert.symmetry.is_symmetric:
        raise InconsistentCertificate("symmetry")
    body_volume = volume(body)
    if cert.body_volume != body_volume:
        raise InconsistentCertificate("body_volume")
    if cert.normalization == NORMALIZATION_EXACT and body_volume != 1:
        raise InconsistentCertificate("normalization", "exact certificates need a body of measure 1")
    if cert.normalization not in (NORMALIZATION_EXACT, NORMALIZATION_HOMOGENEOUS):
        raise InconsistentCertificate("normalization")

    h = half_difference_body(body)
    vol_h = volume(h)
    # g(0) = f(0) = vol H, recomputed as a clipped volume
    if cert.vol_H != vol_h or autocorrelation(h, origin(body.dim)) != cert.vol_H:
        raise InconsistentCertificate("vol_H")
    if cert.bm_gap != vol_h - body_volume or cert.bm_gap <= 0:
        raise InconsistentCertificate("bm_gap")

    ratio = vol_h / body_volume
    if not (1 / ratio < cert.rho_pow_d < 1):
        raise InconsistentCertificate("rho_pow_d", "rho^d must lie strictly between 1 / vol H and 1")
    if not (cert.rho_upper ** body.dim >= cert.rho_pow_d and 0 < cert.rho_upper < 1):
        raise InconsistentCertificate("rho_upper")

    tiling, at_zero, margin = _levels(ratio, cert.rho_pow_d)
    if cert.level_from_tiling != tiling:
        raise InconsistentCertificate("level_from_tiling")
    # integral of g is rho^d times the integral of f = (vol H)^2
    if cert.level_from_value_at_zero != at_zero:
        raise InconsistentCertificate("level_from_value_at_zero")
    if cert.contradiction_margin != margin or margin <= 0:
        raise InconsistentCertificate("contradiction_margin")

    # supp g = rho K must sit inside the interior of K; K is symmetric about the origin
    k = difference_body(body)
    if not all(k.interior_contains(tuple(cert.rho_upper * c for c in v)) for v in k.vertices):
        raise InconsistentCertificate("rho_upper", "scaled support is not properly inside K")


def certificate_consistency_check(cert: NonSpectralityCertificate, *, strict: bool = False) -> bool:
    """Recompute every field from the stored body; ``strict`` raises with the failing field."""
    try:
        _check(cert)
    except InconsistentCertificate as exc:
        logger.info("certificate rejected at field %s", exc.field)
        if strict:
            raise
        return False
    return True
