"""boussinesq-lab CLI - run one canonical experiment and write its reports.

Exit codes: 0 ok, 1 other failure, 2 config error, 3 numerical failure,
4 acceptance check failed (only with --check).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from rich.console import Console
from rich.logging import RichHandler

from .. import __version__
from ..config import load_config, resolve_config_path
from ..errors import EXIT_OK, LabError, exit_code_for
from ..experiments import EXPERIMENTS, ExperimentSpec, RunSummary, execute
from ..spectral import set_fft_workers

logger = logging.getLogger(__name__)

_HELP = {
    "linear-verify": "Exact propagator vs per-mode RK4 oracle, semigroup, wave and Duhamel checks",
    "kernel-bounds": "Vieta identities, root bounds and fitted kernel envelopes",
    "decay-rates": "Whole-plane algebraic decay envelopes by quadrature",
    "exp-decay": "Lyapunov pair and exponential decay on the torus",
    "stability-sweep": "Small-data nonlinear runs over amplitudes and seeds",
    "energy-balance": "Energy identity, cancellations, scheme order and vorticity checks",
}


def _seed(raw: str) -> int:
    value = int(raw, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {raw}")
    return value


def _positive(raw: str) -> int:
    value = int(raw)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {raw}")
    return value


def _non_negative(raw: str) -> int:
    value = int(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {raw}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boussinesq-lab",
        description="Numerical lab for the 2D Boussinesq system with partial dissipation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="cmd", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="TOML config file, or a bare name looked up in the config dir")
    common.add_argument("--out", type=Path, default=Path("reports"), help="Report directory (default: ./reports)")
    common.add_argument("--seed", type=_seed, default=None, help="Master seed (overrides the config seed)")
    common.add_argument("--check", action="store_true", help="Fail with exit 4 when an acceptance check fails")
    common.add_argument("--threads", type=_positive, default=1, help="FFT and experiment-cell workers")
    common.add_argument(
        "--snapshots",
        type=_non_negative,
        default=None,
        metavar="N",
        help="Write every N-th state to <experiment>.snapshots.* (0 disables; overrides [snapshots] every)",
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    for name in EXPERIMENTS:
        p = sub.add_parser(name, parents=[common], help=_HELP[name])
        p.set_defaults(experiment=name)
    return parser


def _configure_logging(verbose: bool, console: Console) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=verbose)],
        force=True,
    )


def _summary_line(summary: RunSummary) -> str:
    total = len(summary.checks)
    passed = sum(1 for ok in summary.checks.values() if ok)
    status = "[green]PASS[/green]" if summary.passed else "[red]FAIL[/red]"
    e0 = "n/a" if summary.E0 is None else f"{summary.E0:.3e}"
    return (
        f"{summary.experiment}: {status} {passed}/{total} checks, "
        f"E0={e0}, seed={summary.seed}, config={summary.config_hash[:12]}, "
        f"{summary.wall_clock:.2f}s"
    )


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    console = Console(stderr=True)
    _configure_logging(args.verbose, console)
    set_fft_workers(args.threads)

    try:
        cfg = load_config(resolve_config_path(args.config))
        spec = ExperimentSpec(
            name=args.experiment,
            config=cfg,
            out_dir=args.out,
            seed=cfg.seed if args.seed is None else args.seed,
            threads=args.threads,
            check=args.check,
            snapshot_every=args.snapshots,
        )
        summary, paths = execute(spec)
    except LabError as exc:
        console.print(f"[red]{type(exc).__name__}[/red]: {exc}")
        logger.debug("failure meta: %s", exc.meta)
        return exit_code_for(exc)
    except Exception as exc:
        logger.exception("%s failed", args.experiment)
        return exit_code_for(exc)

    Console().print(_summary_line(summary))
    logger.debug("reports: %s", ", ".join(str(p) for p in paths))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
