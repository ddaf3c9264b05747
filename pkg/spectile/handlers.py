"""One handler per subcommand. Handlers return a :class:`CommandResult`; the router in
``main`` writes the report and records the run."""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from dataclasses import dataclass
from datetime import datetime
from io import StringIO

import pytz
from sqlalchemy import select

from spectile import texts
from spectile.certify import brunn_minkowski_gap, certify_nonspectral
from spectile.config import AnalysisConfig, Defaults
from spectile.db import open_ledger
from spectile.errors import SymmetricBody
from spectile.fourier import (
    GridDomain,
    autocorrelation,
    dft_oracle,
    ft_indicator,
    richardson,
    sample_autocorrelation_grid,
)
from spectile.geometry import Polytope, half_difference_body, symmetry_report, volume
from spectile.io import (
    certificate_to_json,
    dumps,
    lattice_from_json,
    points_from_json,
    polytope_from_json,
    polytope_to_json,
    read_json,
    write_grid_csv,
)
from spectile.lattice import Box, enumerate_window, sample_unit_density_lattices
from spectile.models import AnalysisRun, RunOutcome
from spectile.spectral import (
    Verdict,
    centered_probes,
    refute_lattice_spectra,
    symmetric_lattice_sweep,
    verify_spectrum_window,
)
from spectile.tiling import support_condition_necessary, tiling_level, verify_tiling
from spectile.utils import format_rational, parse_float_list, to_fraction

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class CommandResult:
    exit_code: int
    outcome: RunOutcome
    report: dict | None
    body: Polytope | None = None
    # raw text (CSV) written instead of a JSON report
    text: str | None = None


def _load_body(path: str) -> Polytope:
    return polytope_from_json(read_json(path))


def _envelope(command: str, cfg: AnalysisConfig, result: dict) -> dict:
    return {"command": command, "config": cfg.header(), **result}


def body_digest(body: Polytope) -> str:
    canonical = json.dumps(polytope_to_json(body), separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# --- subcommands ------------------------------------------------------------------------------

def cmd_ft_eval(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    xi = parse_float_list(args.xi)
    value = ft_indicator(body, xi)
    result = {"body": body, "xi": xi, "value": value, "magnitude": abs(value)}
    if args.oracle_h:
        h = float(to_fraction(args.oracle_h))
        result["oracle"] = dft_oracle(body, xi, h)
        result["richardson"] = richardson(body, xi, h)
    return CommandResult(EXIT_OK, RunOutcome.Computed, _envelope("ft-eval", cfg, result), body)


def cmd_autocorr(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    subject = half_difference_body(body) if args.half_difference else body
    if args.grid:
        grid = sample_autocorrelation_grid(subject, args.grid)
        buf = StringIO()
        rows = write_grid_csv(grid, buf)
        logger.info("autocorrelation grid: %d samples", rows)
        return CommandResult(EXIT_OK, RunOutcome.Computed, None, body, text=buf.getvalue())
    x = [to_fraction(c) for c in (args.x.split(",") if args.x else ["0"] * subject.dim)]
    result = {"body": subject, "x": x, "value": autocorrelation(subject, x)}
    return CommandResult(EXIT_OK, RunOutcome.Computed, _envelope("autocorr", cfg, result), body)


def _parse_core(raw: str, dim: int) -> Box:
    values = parse_float_list(raw)
    if len(values) == 2:
        return Box((values[0],) * dim, (values[1],) * dim)
    if len(values) == 2 * dim:
        return Box(tuple(values[:dim]), tuple(values[dim:]))
    raise argparse.ArgumentTypeError(f"--core needs 2 or {2 * dim} numbers")


def cmd_verify_tiling(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    lattice = lattice_from_json(read_json(args.lattice))
    core = _parse_core(args.core, body.dim)
    lo, hi = body.bounds
    window = core.expanded([float(b) + 1 for b in hi], [1 - float(a) for a in lo])
    translates = enumerate_window(lattice, window, cfg.point_cap)
    h = float(to_fraction(args.h)) if args.h else float(cfg.grid_spacing)
    report = verify_tiling(body, translates, core, h, workers=cfg.threads)
    necessary = support_condition_necessary(body, lattice, cfg.tolerance_zero)
    result = {
        "body": body,
        "lattice": lattice,
        "expected_level": tiling_level(volume(body), lattice),
        "tiling": report,
        "is_tiling": report.is_tiling,
        "support_condition": necessary,
    }
    ok = report.is_tiling
    return CommandResult(
        EXIT_OK if ok else EXIT_NEGATIVE,
        RunOutcome.Verified if ok else RunOutcome.Refuted,
        _envelope("verify-tiling", cfg, result),
        body,
    )


def _parse_probes(raw: str | None, body: Polytope) -> GridDomain:
    if not raw:
        return centered_probes(body, Defaults.PROBE_COUNT)
    values = parse_float_list(raw)
    if len(values) != 3:
        raise argparse.ArgumentTypeError("--probes needs lo,hi,count")
    lo, hi, count = values
    return GridDomain.from_box([lo] * body.dim, [hi] * body.dim, int(count))


def _spectrum_outcome(verdict: Verdict) -> tuple[int, RunOutcome]:
    if verdict is Verdict.Verified:
        return EXIT_OK, RunOutcome.Verified
    if verdict is Verdict.Refuted:
        return EXIT_NEGATIVE, RunOutcome.Refuted
    return EXIT_INCONCLUSIVE, RunOutcome.Computed


def cmd_verify_spectrum(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    spec_json = read_json(args.spectrum)
    probes = _parse_probes(args.probes, body)
    radius = args.window if args.window is not None else cfg.window_radius
    if isinstance(spec_json, dict) and "basis" in spec_json:
        lattice = lattice_from_json(spec_json)
        center = [(a + b) / 2 for a, b in zip(probes.lo, probes.hi)]
        spectrum = enumerate_window(lattice, Box.cube(radius, body.dim, center), cfg.point_cap)
    else:
        spectrum = points_from_json(spec_json)
    report = verify_spectrum_window(
        body, spectrum, probes, cfg.tolerance_zero, cfg.tolerance_completeness, workers=cfg.threads
    )
    code, outcome = _spectrum_outcome(report.verdict)
    result = {"body": body, "window_radius": radius, "spectrum": report}
    return CommandResult(code, outcome, _envelope("verify-spectrum", cfg, result), body)


def _refusal(body: Polytope, exc: SymmetricBody) -> dict:
    return {
        "body": body,
        "refused": True,
        "error": exc.code,
        "message": texts.REFUSED_SYMMETRIC,
        "symmetry": symmetry_report(body),
    }


def cmd_certify(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    try:
        cert = certify_nonspectral(body)
    except SymmetricBody as exc:
        logger.info("certificate refused: %s", exc.message)
        return CommandResult(EXIT_NEGATIVE, RunOutcome.Refused, _envelope("certify", cfg, _refusal(body, exc)), body)
    # the certificate file mirrors the certificate fields only
    return CommandResult(EXIT_OK, RunOutcome.Certified, certificate_to_json(cert), body)


def cmd_analyze(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    sym = symmetry_report(body)
    vol_h, gap = brunn_minkowski_gap(body)
    result: dict = {
        "body": body,
        "volume": volume(body),
        "symmetry": sym,
        "vol_H": vol_h,
        "bm_gap": gap,
    }
    if not sym.is_symmetric:
        cert = certify_nonspectral(body)
        result["summary"] = texts.CERTIFICATE_ISSUED
        result["certificate"] = cert
        return CommandResult(EXIT_OK, RunOutcome.Certified, _envelope("analyze", cfg, result), body)

    sweep = symmetric_lattice_sweep(
        body,
        window_radius=args.window or Defaults.SWEEP_WINDOW,
        probe_count=Defaults.PROBE_COUNT,
        tau_zero=cfg.tolerance_zero,
        tau_completeness=cfg.tolerance_completeness,
        workers=cfg.threads,
    )
    result["summary"] = texts.NOT_CERTIFIED
    result["lattice_sweep"] = [
        {"tiling_lattice": e.tiling_lattice, "spectrum": e.spectrum, "report": e.report} for e in sweep
    ]
    verified = any(e.report.verdict is Verdict.Verified for e in sweep)
    return CommandResult(
        EXIT_OK if verified else EXIT_NEGATIVE,
        RunOutcome.Verified if verified else RunOutcome.Refuted,
        _envelope("analyze", cfg, result),
        body,
    )


def cmd_refute_lattices(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    body = _load_body(args.body)
    lattices = sample_unit_density_lattices(body.dim, args.count, seed=args.seed)
    if volume(body) != 1:
        logger.warning("body has volume %s; density-one lattices cannot be spectra", format_rational(volume(body)))
    reports = refute_lattice_spectra(
        body,
        lattices,
        tau_zero=cfg.tolerance_zero,
        tau_completeness=cfg.tolerance_completeness,
        workers=cfg.threads,
    )
    survivors = [i for i, r in enumerate(reports) if r.verdict is not Verdict.Refuted]
    result = {
        "body": body,
        "seed": args.seed,
        "count": len(lattices),
        "refuted": len(lattices) - len(survivors),
        "survivors": [lattices[i] for i in survivors],
        "witnesses": [{"lattice": lat, "witness": r.witness} for lat, r in zip(lattices, reports)],
    }
    ok = not survivors
    return CommandResult(
        EXIT_OK if ok else EXIT_NEGATIVE,
        RunOutcome.Refuted if ok else RunOutcome.Computed,
        _envelope("refute-lattices", cfg, result),
        body,
    )


def cmd_runs(args: argparse.Namespace, cfg: AnalysisConfig) -> CommandResult:
    if not cfg.database_url:
        print(texts.NO_LEDGER, file=sys.stderr)
        return CommandResult(EXIT_ERROR, RunOutcome.Failed, None)
    with open_ledger(cfg.database_url) as session_factory, session_factory() as s:
        rows = s.execute(
            select(AnalysisRun).order_by(AnalysisRun.id.desc()).limit(args.limit)
        ).scalars().all()
        listing = [
            {
                "id": r.id,
                "command": r.command,
                "body_digest": r.body_digest,
                "outcome": r.outcome.value,
                "exit_code": r.exit_code,
                "created_at": r.created_at.isoformat(),
            }
            for r in rows
        ]
    return CommandResult(EXIT_OK, RunOutcome.Computed, {"runs": listing})


HANDLERS = {
    "ft-eval": cmd_ft_eval,
    "autocorr": cmd_autocorr,
    "verify-tiling": cmd_verify_tiling,
    "verify-spectrum": cmd_verify_spectrum,
    "certify": cmd_certify,
    "analyze": cmd_analyze,
    "refute-lattices": cmd_refute_lattices,
    "runs": cmd_runs,
}


# --- ledger -----------------------------------------------------------------------------------

def record_run(cfg: AnalysisConfig, command: str, result: CommandResult, payload: str) -> None:
    """Best effort: ledger problems are logged and never change the exit code."""
    if not cfg.database_url or command == "runs":
        return
    try:
        with open_ledger(cfg.database_url) as session_factory, session_factory() as s:
            with s.begin():
                s.add(
                    AnalysisRun(
                        command=command,
                        body_digest=body_digest(result.body) if result.body is not None else None,
                        outcome=result.outcome,
                        exit_code=result.exit_code,
                        report_json=payload,
                        created_at=datetime.now(pytz.utc),
                    )
                )
    except Exception:
        logger.exception(texts.LEDGER_WRITE_FAILED)


def render(result: CommandResult) -> str:
    if result.text is not None:
        return result.text
    return dumps(result.report) if result.report is not None else ""

