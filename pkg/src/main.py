"""Command-line entry point for the FlexTransit simulator."""

import argparse
import sys
import time
from pathlib import Path
from typing import List, Optional

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src import __version__
from src.core.config import run_defaults, settings
from src.core.exceptions import SimulationError
from src.core.logger import get_component_logger, logger
from src.engine.runner import run_scenario
from src.paths.generation import describe_paths
from src.scenario.loader import build_world, parse_scenario, variant_names
from src.scenario.outputs import preflight_output_dir, write_outputs


cli_logger = get_component_logger("cli")


# ============================================================================
# ARGUMENTS
# ============================================================================

def _positive_int(value: str) -> int:
    number = int(value)
    if number <= 0:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flextransit",
        description="Agent-based FIX/FLEX transit simulation with day-to-day learning",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Simulate a scenario and write CSV outputs")
    run.add_argument("--scenario", required=True, help="Scenario YAML file or bundled scenario name")
    run.add_argument("--days", type=_positive_int, default=None, help="Days per replication")
    run.add_argument("--replications", type=_positive_int, default=None, help="Number of replications")
    run.add_argument("--seed", type=int, default=None, help="Base seed")
    run.add_argument("--output", default=None, help=f"Output directory (default: {settings.output_dir})")
    run.add_argument("--parallel", type=_positive_int, default=run_defaults.parallel,
                     help="Worker processes for replications")
    run.add_argument("--variant", action="append", default=None,
                     help="Run only this variant (repeatable); all variants by default")
    run.add_argument("--ledger-snapshots", action="store_true", help="Also write the ledger after every day")
    run.add_argument("--check-invariants", action="store_true", default=None,
                     help="Assert supply invariants during the run (default: CHECK_INVARIANTS)")

    validate = commands.add_parser("validate", help="Validate a scenario file")
    validate.add_argument("--scenario", required=True, help="Scenario YAML file or bundled scenario name")

    paths = commands.add_parser("paths", help="Dump the generated choice sets of a scenario")
    paths.add_argument("--scenario", required=True, help="Scenario YAML file or bundled scenario name")
    paths.add_argument("--variant", default=None, help="Variant to build (default: the first)")
    return parser


# ============================================================================
# COMMANDS
# ============================================================================

def command_run(args: argparse.Namespace) -> int:
    out_dir = preflight_output_dir(args.output or settings.output_dir)
    config = parse_scenario(args.scenario)
    if args.variant:
        unknown = sorted(set(args.variant) - set(variant_names(config)))
        if unknown:
            raise SimulationError(
                f"unknown variant(s): {', '.join(unknown)}; available: {', '.join(variant_names(config))}")

    start = time.time()
    results = run_scenario(
        config,
        days=args.days,
        replications=args.replications,
        seed=args.seed,
        variants=args.variant,
        parallel=args.parallel,
        ledger_snapshots=args.ledger_snapshots,
        check_invariants=args.check_invariants,
    )
    written = write_outputs(results, out_dir)
    cli_logger.log_performance("run", start, {"scenario": config.name, "output": str(out_dir)})
    for path in written:
        print(path)
    return 0


def command_validate(args: argparse.Namespace) -> int:
    config = parse_scenario(args.scenario)
    print(f"{args.scenario}: OK ({config.name}, variants: {', '.join(variant_names(config))})")
    return 0


def command_paths(args: argparse.Namespace) -> int:
    config = parse_scenario(args.scenario)
    variant = args.variant or variant_names(config)[0]
    world = build_world(config, variant)
    for line in describe_paths(world.path_set):
        print(line)
    return 0


COMMANDS = {
    "run": command_run,
    "validate": command_validate,
    "paths": command_paths,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments and dispatch; SimulationError maps to exit code 1, usage errors to 2."""
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SimulationError as e:
        cli_logger.error(args.command, "Command failed", {"error_type": type(e).__name__}, error=e)
        print(f"error: {e}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
