"""Command-line application for the multiplex cascade simulator."""

from typing import Any, Dict, List, Optional, Sequence, Tuple
import argparse
import json
import logging
import os
import sys

from pydantic import ValidationError

from core.rules import RuleFactory
from experiments.base import SweptParameter
from .commands import execute
from .models import Command, RunConfig, diagnostic


logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


class ConfigError(ValueError):
    """Raised when flags and config file do not form a valid configuration."""
    pass


def _float_list(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _grid(text: str) -> Tuple[Any, ...]:
    values = []
    for item in text.split(","):
        item = item.strip()
        try:
            values.append(float(item))
        except ValueError:
            values.append(item)
    return tuple(values)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags win")
    common.add_argument("-o", "--output", help="output file (stdout when omitted)")
    common.add_argument("--rng-seed", type=int, help="master seed for every random stream")
    common.add_argument("--log-level", help="logging level (default: LOG_LEVEL or INFO)")

    common.add_argument("--nodes", type=int, help="node count n")
    common.add_argument("--layers", type=int, help="layer count l")
    common.add_argument("--edge-prob", type=float, help="edge probability p of every layer")
    common.add_argument("--payoff-a", type=_float_list, help="per-layer A-A payoffs, comma separated")
    common.add_argument("--payoff-b", type=_float_list, help="per-layer B-B payoffs, comma separated")
    common.add_argument("--seed-fraction", type=float, help="initial adopter fraction q0")
    common.add_argument("--rule", choices=RuleFactory.available(), help="decision rule")
    common.add_argument("--max-steps", type=int, help="step budget per run")
    common.add_argument("--samples", type=int, help="replicates per grid point")
    common.add_argument("--workers", type=int, help="worker threads for sweeps")
    common.add_argument("--network", help="edge-list file to diffuse on instead of generating one")
    common.add_argument("--param", choices=[p.value for p in SweptParameter], help="swept parameter")
    common.add_argument("--grid", type=_grid, help="sweep grid, comma separated")
    common.add_argument("--companion", help="also write the seed-sweep analytic companion CSV here")
    return common


def create_parser() -> argparse.ArgumentParser:
    """Create and configure the argument parser."""
    parser = argparse.ArgumentParser(
        prog="multicascade",
        description="Diffusion of an innovation in multiplex networks via coordination games",
    )
    common = _common_flags()
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    helps = {
        Command.GENERATE: "draw an ER multiplex and write it as an edge list",
        Command.RUN: "run one diffusion and write its trace CSV",
        Command.ANALYTIC: "write the recurrence and lower-bound curves CSV",
        Command.SWEEP: "replicated sweep over one parameter",
        Command.COMPARE: "seed-fraction sweep for every decision rule",
    }
    for command, text in helps.items():
        subparsers.add_parser(command.value, parents=[common], help=text, description=text,
                              argument_default=argparse.SUPPRESS)
    return parser


def parse_flags(argv: Sequence[str]) -> Dict[str, Any]:
    """Explicitly given flags only; exits with status 2 on usage errors."""
    parser = create_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)
    namespace = parser.parse_args(list(argv))
    if namespace.command is None:
        parser.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)
    return vars(namespace)


def build_config(flags: Dict[str, Any], config_text: Optional[str] = None) -> RunConfig:
    """Merge a JSON config with flags (flags win) and validate."""
    flags = dict(flags)
    flags.pop("log_level", None)
    config_path = flags.pop("config", None)
    data: Dict[str, Any] = {}

    if config_text is None and config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as handle:
                config_text = handle.read()
        except OSError as e:
            raise ConfigError(f"--config: cannot read '{config_path}': {e.strerror or e}") from None
    if config_text is not None:
        try:
            data = json.loads(config_text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"--config: invalid JSON: {e}") from None
        if not isinstance(data, dict):
            raise ConfigError("--config: expected a JSON object of RunConfig fields")

    data.update(flags)
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(diagnostic(e, "payoff_a")) from None


def parse_config(argv: Sequence[str], config_text: Optional[str] = None) -> RunConfig:
    """Parse flags, and optionally JSON config text, into a validated RunConfig."""
    return build_config(parse_flags(argv), config_text)


def configure_logging(level: Optional[str] = None) -> None:
    level = (level or os.getenv("LOG_LEVEL", "INFO")).upper()
    if not isinstance(logging.getLevelName(level), int):
        level = "INFO"
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the process exit status."""
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        flags = parse_flags(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(flags.get("log_level"))
    try:
        config = build_config(flags)
    except ConfigError as e:
        print(f"multicascade: error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        execute(config)
    except Exception as e:
        logger.error(f"{config.command.value} failed: {e}")
        return EXIT_RUNTIME
    return EXIT_OK
