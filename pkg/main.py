#!/usr/bin/env python3
"""
cn-groups - Main entry point
"""

import sys
import argparse
from pathlib import Path

# Add the project directory to Python path
project_dir = Path(__file__).parent
sys.path.insert(0, str(project_dir))

from cn_groups.bounds import Bounds, get_bounds, set_bounds
from cn_groups.cli import cmd_analyze, cmd_construct, cmd_lemmas, cmd_verify, render
from cn_groups.logging_config import setup_logging_from_config
from helpers.config_loader import get_config_value, load_config
from loguru import logger


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="cn-groups - CN-group classifier and property sweeps")
    parser.add_argument(
        "--config",
        type=Path,
        default=project_dir / "config" / "config.yaml",
        help="Path to configuration file"
    )
    parser.add_argument("--seed", type=int, help="RNG seed (default from config)")
    parser.add_argument("--jobs", type=int, help="Worker processes; 0 means one per CPU")
    parser.add_argument("--max-order", type=int, help="Element-enumeration bound")
    parser.add_argument("--max-degree", type=int, help="Largest point set a construction may use")
    parser.add_argument("--search-budget", type=int, help="fpf_search candidate evaluations")
    parser.add_argument("-o", "--output", type=Path, help="Write the JSON document here instead of stdout")
    parser.add_argument("--log-level", help="Override the configured log level")
    parser.add_argument("--log-dir", type=Path, help="Also write rotating log files here")

    commands = parser.add_subparsers(dest="command", required=True)

    analyze = commands.add_parser("analyze", help="Classify the group of one spec file")
    analyze.add_argument("spec_file", type=Path)

    verify = commands.add_parser("verify", help="Classify every group of a catalog directory")
    verify.add_argument("catalog", type=Path, nargs="?",
                        help="Directory of spec files (default: built-in catalog)")

    construct = commands.add_parser("construct", help="Build a family member as a perm spec")
    construct.add_argument("family", help="example1 | example2 | example3 | example4_a5 | negative_frobenius_sl23")
    construct.add_argument("params", nargs="*", help="key=value parameters, e.g. m=3 k=2")

    lemmas = commands.add_parser("lemmas", help="Run the property sweeps and action checks")
    lemmas.add_argument("catalog", type=Path, nargs="?",
                        help="Directory of spec files (default: built-in catalog)")
    lemmas.add_argument("--instances", type=int, default=100, help="Seeded action instances to check")
    return parser


def main(argv=None):
    """Main entry point"""
    args = build_parser().parse_args(argv)

    # Setup logging
    logging_manager = setup_logging_from_config(args.config, args.log_dir, level=args.log_level)
    config = load_config(config_path=args.config)
    set_bounds(Bounds.from_config(config).override(
        max_order=args.max_order,
        max_degree=args.max_degree,
        search_budget=args.search_budget,
    ))
    logging_manager.log_system_info(get_bounds())
    seed = args.seed if args.seed is not None else get_config_value("run.seed", default=42, config=config)
    jobs = args.jobs if args.jobs is not None else get_config_value("run.jobs", default=1, config=config)

    if args.command == "analyze":
        result = cmd_analyze(args.spec_file, seed=seed)
    elif args.command == "verify":
        result = cmd_verify(args.catalog, jobs=jobs, seed=seed)
    elif args.command == "construct":
        result = cmd_construct(args.family, args.params, output=args.output)
    else:
        result = cmd_lemmas(args.catalog, seed=seed, jobs=jobs, instances=args.instances)

    # construct already wrote its spec to -o
    if args.output is not None and args.command != "construct":
        args.output.write_text(render(result.document), encoding="utf-8")
        logger.info(f"Wrote {args.command} output to {args.output}")
    elif args.output is None:
        sys.stdout.write(render(result.document))
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
