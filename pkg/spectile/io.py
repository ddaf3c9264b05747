"""JSON and CSV codecs. Rationals travel as "p/q" strings so reports stay exact."""
from __future__ import annotations

import csv
import dataclasses
import enum
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from spectile.certify import NonSpectralityCertificate
from spectile.errors import ReportFormatError
from spectile.fourier import GridFunction
from spectile.geometry import Polytope, SymmetryReport, convex_hull
from spectile.lattice import Box, Lattice, PointSet
from spectile.utils import format_point, format_rational, to_fraction, to_point


def polytope_to_json(body: Polytope) -> dict:
    return {"dim": body.dim, "vertices": [format_point(v) for v in body.vertices]}


def polytope_from_json(obj: Any) -> Polytope:
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise ReportFormatError("body JSON needs a 'vertices' list")
    vertices = obj["vertices"]
    if not isinstance(vertices, list) or not vertices:
        raise ReportFormatError("'vertices' must be a nonempty list")
    body = convex_hull(vertices)
    if "dim" in obj and obj["dim"] != body.dim:
        raise ReportFormatError(f"'dim' is {obj['dim']} but vertices have {body.dim} coordinates")
    return body


def lattice_to_json(lattice: Lattice) -> dict:
    return {"basis": [format_point(row) for row in lattice.basis]}


def lattice_from_json(obj: Any) -> Lattice:
    if not isinstance(obj, dict) or "basis" not in obj:
        raise ReportFormatError("lattice JSON needs a 'basis' matrix")
    return Lattice(tuple(to_point(row) for row in obj["basis"]))


def points_from_json(obj: Any) -> PointSet:
    if not isinstance(obj, dict) or "points" not in obj:
        raise ReportFormatError("point set JSON needs a 'points' list")
    try:
        pts = np.array([[float(to_fraction(c)) for c in row] for row in obj["points"]], dtype=float)
        window = None
        if "window" in obj:
            raw = obj["window"]
            lo = tuple(float(to_fraction(c)) for c in raw["lo"])
            hi = tuple(float(to_fraction(c)) for c in raw["hi"])
            window = Box(lo, hi)
    except (KeyError, TypeError, ValueError) as exc:
        raise ReportFormatError(f"malformed point set: {exc}") from exc
    if pts.ndim != 2 or not pts.size:
        raise ReportFormatError("point set JSON needs a non-empty list of equal-length points")
    return PointSet.from_points(pts, window)


def box_to_json(window: Box) -> dict:
    return {"lo": list(window.lo), "hi": list(window.hi)}


def symmetry_to_json(report: SymmetryReport) -> dict:
    center = format_point(report.center) if report.center is not None else None
    return {"is_symmetric": report.is_symmetric, "center": center}


def to_jsonable(value: Any) -> Any:
    """Plain JSON values for reports; dataclass fields keep their declaration order."""
    if isinstance(value, Polytope):
        return polytope_to_json(value)
    if isinstance(value, Lattice):
        return lattice_to_json(value)
    if isinstance(value, Box):
        return box_to_json(value)
    if isinstance(value, SymmetryReport):
        return symmetry_to_json(value)
    if isinstance(value, PointSet):
        return {"points": value.points.tolist(), "window": box_to_json(value.window)}
    if isinstance(value, enum.Enum):
        return value.value
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, (float, np.floating)):
        f = float(value)
        return f if math.isfinite(f) else None
    return value


def dumps(value: Any) -> str:
    return json.dumps(to_jsonable(value), indent=2, ensure_ascii=False) + "\n"


def certificate_to_json(cert: NonSpectralityCertificate) -> dict:
    return to_jsonable(cert)


def certificate_from_json(obj: Any) -> NonSpectralityCertificate:
    try:
        sym = obj["symmetry"]
        center = to_point(sym["center"]) if sym.get("center") is not None else None
        return NonSpectralityCertificate(
            body=polytope_from_json(obj["body"]),
            dim=int(obj["dim"]),
            normalization=str(obj["normalization"]),
            body_volume=to_fraction(obj["body_volume"]),
            vol_H=to_fraction(obj["vol_H"]),
            bm_gap=to_fraction(obj["bm_gap"]),
            rho_pow_d=to_fraction(obj["rho_pow_d"]),
            rho_upper=to_fraction(obj["rho_upper"]),
            level_from_tiling=to_fraction(obj["level_from_tiling"]),
            level_from_value_at_zero=to_fraction(obj["level_from_value_at_zero"]),
            contradiction_margin=to_fraction(obj["contradiction_margin"]),
            symmetry=SymmetryReport(bool(sym["is_symmetric"]), center),
        )
    except (KeyError, TypeError, AttributeError) as exc:
        raise ReportFormatError(f"malformed certificate: {exc}") from exc


def read_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ReportFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def write_grid_csv(grid: GridFunction, out: TextIO) -> int:
    """One row per sample: coordinates x0..x{d-1} then the value. Returns the row count."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([f"x{i}" for i in range(grid.dim)] + ["value"])
    pts = grid.domain.points()
    values = np.real(grid.values).ravel()
    for p, v in zip(pts, values):
        writer.writerow([repr(float(c)) for c in p] + [repr(float(v))])
    return len(values)
