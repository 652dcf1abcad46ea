#!/usr/bin/env python3
"""
Main entry point for the satellite / cell-free load-balancing simulator

Subcommands:
- validate       closed-form vs Monte-Carlo SINR on a small network
- exhaustive     globally optimal association by enumeration (small K)
- optimize       binary GA, hybrid GA or exhaustive search for one utility
- sweep          one optimization per value of a network-size axis
- compare-modes  satellite-only vs APs-only vs hybrid association
- hitting-time   generations the binary GA needs to reach the optimum

Usage:
    python main.py validate --preset validation
    python main.py optimize --config scenario.cfg --set optimizer.utility=geometric
    python main.py sweep --axis num_users --values 10 20 30 --out results/sweep
    python main.py hitting-time --preset hitting --trials 200 --pm-grid 0.1 0.3 0.5
"""

import argparse
import logging
import sys
from typing import List, Optional

from config import Config
from data.sample_scenarios import get_preset, get_sweep_grid, list_presets
from experiments.commands import (
    CommandResult,
    cmd_compare_modes,
    cmd_exhaustive,
    cmd_hitting_time,
    cmd_optimize,
    cmd_sweep,
    cmd_validate,
)
from models.errors import SimfairError
from models.settings import SimConfig, UtilityKind
from scenario_io.config_loader import load_config, load_config_file

logger = logging.getLogger("simfair")


def build_config(args: argparse.Namespace) -> SimConfig:
    """Config file (or defaults) + preset + --set overrides + --seed/--out"""
    overrides: List[str] = []
    if args.preset:
        overrides.extend(get_preset(args.preset))
    overrides.extend(args.set or [])
    if args.seed is not None:
        overrides.append(f"run.seed={args.seed}")
    if args.out is not None:
        overrides.append(f"run.output_dir={args.out}")
    if args.workers is not None:
        overrides.append(f"run.workers={args.workers}")
    if args.config:
        return load_config_file(args.config, overrides)
    return load_config("", overrides)


def print_result(result: CommandResult) -> None:
    status = "✅" if result.exit_code == 0 else "❌"
    print(f"\n{status} {result.name}: {result.message}")
    for name, path in result.outputs.items():
        print(f"   📄 {name}: {path}")
    shares = result.summary.get("mode_shares")
    if shares:
        print("   📡 Connection modes (% of users):")
        print(f"      satellite only: {shares['satellite_only']:.1f}")
        print(f"      APs only:       {shares['aps_only']:.1f}")
        print(f"      both:           {shares['both']:.1f}")
        print(f"      unserved:       {shares['unserved']:.1f}")


def run_command(args: argparse.Namespace) -> CommandResult:
    config = build_config(args)
    if args.command == "validate":
        return cmd_validate(config)
    if args.command == "exhaustive":
        return cmd_exhaustive(config)
    if args.command == "optimize":
        return cmd_optimize(config)
    if args.command == "sweep":
        values = args.values or get_sweep_grid(args.axis)
        kinds = [UtilityKind(k) for k in args.utilities] if args.utilities else None
        return cmd_sweep(config, args.axis, values, replicates=args.replicates, kinds=kinds)
    if args.command == "compare-modes":
        return cmd_compare_modes(config)
    return cmd_hitting_time(config, args.trials, pm_grid=args.pm_grid, bound_constant=args.bound_c)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="Path to a key = value config file")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="Override one config key (repeatable)")
    common.add_argument("--seed", type=int, help="Override run.seed")
    common.add_argument("--out", help="Output directory (default: $SIMFAIR_OUTPUT_DIR or ./results)")
    common.add_argument("--workers", type=int, help="Worker processes for sweeps, trials and enumeration")
    common.add_argument("--preset", choices=list_presets(), help="Apply a named scenario preset")
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="Logging level (default: INFO)")

    parser = argparse.ArgumentParser(
        prog="simfair",
        description="Satellite / cell-free load balancing: throughput analysis and association optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="Closed-form vs Monte-Carlo SINR")
    sub.add_parser("exhaustive", parents=[common], help="Exhaustive association search")
    sub.add_parser("optimize", parents=[common], help="Run the configured optimizer")

    sweep = sub.add_parser("sweep", parents=[common], help="Sweep a network-size axis")
    sweep.add_argument("--axis", required=True, choices=["num_users", "num_aps", "generations"])
    sweep.add_argument("--values", type=int, nargs="+", help="Axis values (default: preset grid)")
    sweep.add_argument("--utilities", nargs="+", choices=[k.value for k in UtilityKind])
    sweep.add_argument("--replicates", type=int, default=1, help="Seeds per axis value")

    sub.add_parser("compare-modes", parents=[common], help="Satellite-only vs APs-only vs hybrid")

    hitting = sub.add_parser("hitting-time", parents=[common], help="GA generations to reach the optimum")
    hitting.add_argument("--trials", type=int, default=200)
    hitting.add_argument("--pm-grid", type=float, nargs="+", help="Mutation rates to scan")
    hitting.add_argument("--bound-c", type=float, default=1.0, help="Constant of the lower-bound curve")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    print(f"🛰️  simfair {args.command}")
    print("=" * 60)
    try:
        result = run_command(args)
    except SimfairError as exc:
        logging.error(f"{type(exc).__name__}: {exc}")
        print(f"❌ Error: {exc}")
        return 2
    print_result(result)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
