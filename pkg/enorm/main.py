"""
E-norm Command Line

Subcommands: enorm, curve, gbound, gamma, channel, extension, plot.
Exit codes: 0 success, 2 configuration error, 3 verification mismatch,
4 convergence failure, 5 invariant violation in inputs.
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence

import pydantic

from enorm import __version__
from enorm.commands.channel import cmd_channel, cmd_extension
from enorm.commands.enorm import cmd_curve, cmd_enorm
from enorm.commands.gamma import cmd_gamma
from enorm.commands.gbound import cmd_gbound
from enorm.commands.plot import cmd_plot
from enorm.config import RuntimeSettings
from enorm.errors import EnormError
from enorm.models import (
    ChannelConfig,
    EnormConfig,
    ExtensionConfig,
    GammaConfig,
    GboundConfig,
    PlotConfig,
    ResultRecord,
)

logger = logging.getLogger(__name__)

EXIT_CONFIG = 2


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def parse_float_list(raw: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got '{raw}'") from exc


def parse_int_list(raw: str) -> list[int]:
    try:
        return [int(item) for item in raw.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of integers, got '{raw}'") from exc


def parse_candidates(raw: str) -> list[tuple[float, float]]:
    """``a:b,a:b,...`` into coefficient pairs."""
    pairs = []
    for item in raw.split(","):
        if not item.strip():
            continue
        try:
            a, b = item.split(":")
            pairs.append((float(a), float(b)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"candidate '{item}' is not of the form a:b") from exc
    return pairs


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Master random seed (default 0)")
    parser.add_argument("--tol", type=float, help="Convergence tolerance")
    parser.add_argument("--out", type=str, help="Output path prefix for the .json/.csv pair")


def _add_operator_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--operator", choices=["q", "p", "N", "identity"], help="Builtin operator")
    parser.add_argument("--omega", type=float, help="Oscillator frequency (default 1)")
    parser.add_argument("--dim", type=int, help="Truncation dimension of builtin operators (default 64)")
    parser.add_argument("--matrix-file", type=str, help='JSON file {"A": matrix, "G": matrix}')
    parser.add_argument("--grid", type=parse_float_list, help="Comma-separated energies")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enorm", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("enorm", "E-norms on a grid"), ("curve", "E-norm curve with invariant audit")):
        cmd = sub.add_parser(name, help=help_text)
        _add_common(cmd)
        _add_operator_source(cmd)
        cmd.add_argument("--verify", action="store_true", help="Cross-check against the brute-force oracle")
        cmd.add_argument("--budget", type=int, help="Random states per oracle call (default 10000)")

    cmd = sub.add_parser("gbound", help="√G-bound estimate")
    _add_common(cmd)
    _add_operator_source(cmd)
    cmd.add_argument("--dmax", type=int, help="Largest truncation dimension of the ladder (default 2048)")
    cmd.add_argument(
        "--schedule",
        choices=["default", "long"],
        help="Energy preset: default 1..32, long 1..256 (replaces --grid)",
    )

    cmd = sub.add_parser("gamma", help="Γ frontier and membership verdicts")
    _add_common(cmd)
    _add_operator_source(cmd)
    cmd.add_argument("--candidates", type=parse_candidates, help="Candidates a:b,a:b,...")

    cmd = sub.add_parser("channel", help="Energy amplification Y(E) of a channel")
    _add_common(cmd)
    cmd.add_argument("--channel", choices=["identity", "ground_collapse", "pure_loss", "random"])
    cmd.add_argument("--kraus-file", type=str, help="JSON list of Kraus matrices (overrides --channel)")
    cmd.add_argument("--dim", type=int, help="Dimension of builtin channels (default 4)")
    cmd.add_argument("--eta", type=float, help="Transmissivity of the pure-loss channel (default 0.5)")
    cmd.add_argument("--grid", type=parse_float_list, help="Comma-separated energies")

    cmd = sub.add_parser("extension", help="Monte-Carlo check of the tensor-extension inequality")
    _add_common(cmd)
    cmd.add_argument("--dim", type=int, help="Dimension of the random pairs (default 4)")
    cmd.add_argument("--pairs", type=int, help="Number of random pairs (default 10)")
    cmd.add_argument("--samples", type=int, help="Total number of samples (default 1000)")
    cmd.add_argument("--eps", type=parse_float_list, help="Comma-separated perturbation radii")
    cmd.add_argument("--k-dim", type=parse_int_list, help="Comma-separated ancilla dimensions")
    cmd.add_argument("--grid", type=parse_float_list, help="Comma-separated energies")

    cmd = sub.add_parser("plot", help="SVG charts from CSV outputs")
    cmd.add_argument("inputs", nargs="+", help="CSV files written by other commands")
    cmd.add_argument("--out", type=str, help="Output directory (default plots)")
    return parser


COMMANDS: dict[str, tuple[type[pydantic.BaseModel], Callable[..., ResultRecord]]] = {
    "enorm": (EnormConfig, cmd_enorm),
    "curve": (EnormConfig, cmd_curve),
    "gbound": (GboundConfig, cmd_gbound),
    "gamma": (GammaConfig, cmd_gamma),
    "channel": (ChannelConfig, cmd_channel),
    "extension": (ExtensionConfig, cmd_extension),
    "plot": (PlotConfig, cmd_plot),
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level),
        format="%(asctime)s [%(levelname)s] %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def main(argv: Sequence[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)

    try:
        settings = RuntimeSettings()
    except ValueError as exc:
        logging.basicConfig()
        logger.error("Invalid environment: %s", exc)
        return EXIT_CONFIG
    configure_logging(settings.log_level)

    config_cls, handler = COMMANDS[args.command]
    fields = {k: v for k, v in vars(args).items() if k != "command" and v is not None and v is not False}
    try:
        config = config_cls(**fields)
    except pydantic.ValidationError as exc:
        logger.error("Invalid configuration for %s: %s", args.command, exc)
        return EXIT_CONFIG

    logger.info("=" * 60)
    logger.info("Starting %s (enorm %s, %d threads)", args.command, __version__, settings.threads)
    logger.info("=" * 60)
    try:
        record = handler(config)
    except EnormError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return exc.exit_code
    except pydantic.ValidationError as exc:
        logger.error("Malformed input for %s: %s", args.command, exc)
        return EXIT_CONFIG

    logger.info("=" * 60)
    logger.info("%s completed in %.3f s", args.command, record.wall_time)
    logger.info("=" * 60)
    return 0


if __name__ == "__main__":
    sys.exit(main())
