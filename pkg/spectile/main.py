from __future__ import annotations

import argparse
import logging
import sys

from dotenv import load_dotenv

from spectile import texts
from spectile.config import AnalysisConfig, load_config
from spectile.errors import SpectileError, SymmetricBody
from spectile.handlers import EXIT_ERROR, EXIT_NEGATIVE, HANDLERS, record_run, render
from spectile.io import write_text

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems exit with 1 like every other tool failure
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help=texts.HELP_OUT)
    common.add_argument("--tol-zero", type=float, dest="tolerance_zero")
    common.add_argument("--tol-completeness", type=float, dest="tolerance_completeness")
    common.add_argument("--threads", type=int)
    common.add_argument("--db", dest="database_url", help=texts.HELP_DB)
    common.add_argument("--log-level")

    parser = _Parser(prog=texts.PROG, description=texts.DESCRIPTION)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ft-eval", parents=[common], help=texts.HELP_FT_EVAL)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--xi", required=True, help="comma-separated frequency")
    p.add_argument("--oracle-h", help="also report the grid oracle at this spacing")

    p = sub.add_parser("autocorr", parents=[common], help=texts.HELP_AUTOCORR)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--x", help="comma-separated shift (default: origin)")
    p.add_argument("--grid", help="dump a CSV grid with this spacing, e.g. 1/8")
    p.add_argument("--half-difference", action="store_true", help="use H = (P - P) / 2")

    p = sub.add_parser("verify-tiling", parents=[common], help=texts.HELP_VERIFY_TILING)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--lattice", required=True, help=texts.HELP_LATTICE)
    p.add_argument("--core", default="-1,1", help="lo,hi (all axes) or lo..., hi...")
    p.add_argument("--h", dest="grid_spacing", help="grid spacing, e.g. 1/64")

    p = sub.add_parser("verify-spectrum", parents=[common], help=texts.HELP_VERIFY_SPECTRUM)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--spectrum", required=True, help=texts.HELP_SPECTRUM)
    p.add_argument("--window", type=float, dest="window_radius")
    p.add_argument("--probes", help="lo,hi,count per axis")

    p = sub.add_parser("certify", parents=[common], help=texts.HELP_CERTIFY)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)

    p = sub.add_parser("analyze", parents=[common], help=texts.HELP_ANALYZE)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--window", type=float, help="lattice window radius for symmetric bodies")

    p = sub.add_parser("refute-lattices", parents=[common], help=texts.HELP_REFUTE)
    p.add_argument("--body", required=True, help=texts.HELP_BODY)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("runs", parents=[common], help=texts.HELP_RUNS)
    p.add_argument("--limit", type=int, default=20)
    return parser


# values of these options may start with "-" (negative coordinates)
_SIGNED_OPTIONS = frozenset({"--core", "--probes", "--xi", "--x"})


def _join_signed_values(argv: list[str]) -> list[str]:
    """Rewrite ``--core -2,2`` as ``--core=-2,2`` so argparse does not read the value as a flag."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        token = argv[i]
        value = argv[i + 1] if i + 1 < len(argv) else ""
        if token in _SIGNED_OPTIONS and value.startswith("-") and not value.startswith("--"):
            out.append(f"{token}={value}")
            i += 2
            continue
        out.append(token)
        i += 1
    return out


def _config_from(args: argparse.Namespace) -> AnalysisConfig:
    return load_config(
        tolerance_zero=args.tolerance_zero,
        tolerance_completeness=args.tolerance_completeness,
        grid_spacing=getattr(args, "grid_spacing", None),
        window_radius=getattr(args, "window_radius", None),
        threads=args.threads,
        database_url=args.database_url,
        log_level=args.log_level,
        output_path=args.out,
    )


def run_command(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run one subcommand, write its report. Returns the exit code."""
    try:
        args = build_parser().parse_args(_join_signed_values(sys.argv[1:] if argv is None else list(argv)))
        cfg = _config_from(args)
    except UsageError as exc:
        print(texts.USAGE_ERROR.format(message=exc), file=sys.stderr)
        return EXIT_ERROR
    except RuntimeError as exc:
        print(texts.CONFIG_ERROR.format(message=exc), file=sys.stderr)
        return EXIT_ERROR
    logging.getLogger().setLevel(cfg.log_level)

    # handlers read the effective values from cfg
    args.h = getattr(args, "grid_spacing", None)
    args.window = getattr(args, "window", None) or getattr(args, "window_radius", None)

    try:
        result = HANDLERS[args.command](args, cfg)
    except SymmetricBody as exc:
        print(texts.DOMAIN_ERROR.format(code=exc.code, message=exc.message), file=sys.stderr)
        return EXIT_NEGATIVE
    except SpectileError as exc:
        print(texts.DOMAIN_ERROR.format(code=exc.code, message=exc.message), file=sys.stderr)
        return EXIT_ERROR
    except argparse.ArgumentTypeError as exc:
        print(texts.USAGE_ERROR.format(message=exc), file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(texts.IO_ERROR.format(path=getattr(exc, "filename", None) or "", reason=exc.strerror or exc), file=sys.stderr)
        return EXIT_ERROR

    payload = render(result)
    try:
        if cfg.output_path:
            write_text(cfg.output_path, payload)
        else:
            sys.stdout.write(payload)
    except OSError as exc:
        print(texts.IO_ERROR.format(path=cfg.output_path, reason=exc.strerror or exc), file=sys.stderr)
        return EXIT_ERROR
    record_run(cfg, args.command, result, payload)
    return result.exit_code


def main():
    load_dotenv()
    logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    sys.exit(run_command())


if __name__ == "__main__":
    main()
