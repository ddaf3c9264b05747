from __future__ import annotations

import logging
import os
from dataclasses import dataclass, replace
from fractions import Fraction

from spectile.utils import format_rational, to_fraction


@dataclass(frozen=True)
class Defaults:
    # Baseline analysis settings
    TOLERANCE_ZERO = 1e-9
    TOLERANCE_COMPLETENESS = 1e-6
    GRID_SPACING = "1/64"
    WINDOW_RADIUS = 20
    POINT_CAP = 10_000_000
    CHECK_RADIUS_FACTOR = 8
    THREADS = 4

    PROBE_COUNT = 5
    SWEEP_WINDOW = 8
    LOG_LEVEL = "INFO"


@dataclass(frozen=True)
class AnalysisConfig:
    tolerance_zero: float
    tolerance_completeness: float
    grid_spacing: Fraction
    window_radius: float
    point_cap: int
    output_path: str | None
    threads: int
    database_url: str | None
    log_level: str

    def header(self) -> dict:
        """Settings echoed at the top of every report."""
        return {
            "tolerance_zero": self.tolerance_zero,
            "tolerance_completeness": self.tolerance_completeness,
            "grid_spacing": format_rational(self.grid_spacing),
            "window_radius": self.window_radius,
            "point_cap": self.point_cap,
            "threads": self.threads,
        }


def _get_float(name: str, default: float) -> float:
    v = os.getenv(name, str(default)).strip()
    try:
        return float(v)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be a number, got {v!r}") from exc


def _get_int(name: str, default: int) -> int:
    v = os.getenv(name, str(default)).strip()
    try:
        return int(v)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be an integer, got {v!r}") from exc


def _get_fraction(name: str, default: str) -> Fraction:
    v = os.getenv(name, default).strip()
    try:
        return to_fraction(v)
    except ValueError as exc:
        raise RuntimeError(f"{name} must be a rational like 1/64, got {v!r}") from exc


def _validate(cfg: AnalysisConfig) -> AnalysisConfig:
    if cfg.tolerance_zero <= 0:
        raise RuntimeError("SPECTILE_TOLERANCE_ZERO must be positive")
    if cfg.tolerance_completeness <= 0:
        raise RuntimeError("SPECTILE_TOLERANCE_COMPLETENESS must be positive")
    if cfg.grid_spacing <= 0:
        raise RuntimeError("SPECTILE_GRID_SPACING must be positive")
    if cfg.window_radius <= 0:
        raise RuntimeError("SPECTILE_WINDOW_RADIUS must be positive")
    if cfg.point_cap < 1:
        raise RuntimeError("SPECTILE_POINT_CAP must be at least 1")
    if cfg.threads < 1:
        raise RuntimeError("SPECTILE_THREADS must be at least 1")
    if not isinstance(logging.getLevelName(cfg.log_level), int):
        raise RuntimeError(f"SPECTILE_LOG_LEVEL is not a logging level: {cfg.log_level!r}")
    return cfg


def load_config(**overrides) -> AnalysisConfig:
    """Read SPECTILE_* variables, then apply non-None keyword overrides (CLI flags)."""
    database_url = os.getenv("SPECTILE_DATABASE_URL", "").strip() or None
    cfg = AnalysisConfig(
        tolerance_zero=_get_float("SPECTILE_TOLERANCE_ZERO", Defaults.TOLERANCE_ZERO),
        tolerance_completeness=_get_float("SPECTILE_TOLERANCE_COMPLETENESS", Defaults.TOLERANCE_COMPLETENESS),
        grid_spacing=_get_fraction("SPECTILE_GRID_SPACING", Defaults.GRID_SPACING),
        window_radius=_get_float("SPECTILE_WINDOW_RADIUS", Defaults.WINDOW_RADIUS),
        point_cap=_get_int("SPECTILE_POINT_CAP", Defaults.POINT_CAP),
        output_path=None,
        threads=_get_int("SPECTILE_THREADS", Defaults.THREADS),
        database_url=database_url,
        log_level=os.getenv("SPECTILE_LOG_LEVEL", Defaults.LOG_LEVEL).strip().upper(),
    )
    given = {k: v for k, v in overrides.items() if v is not None}
    if "grid_spacing" in given:
        try:
            given["grid_spacing"] = to_fraction(given["grid_spacing"])
        except ValueError as exc:
            raise RuntimeError(f"grid spacing must be rational, got {given['grid_spacing']!r}") from exc
    if "log_level" in given:
        given["log_level"] = str(given["log_level"]).upper()
    return _validate(replace(cfg, **given))
