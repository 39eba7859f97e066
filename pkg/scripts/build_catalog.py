#!/usr/bin/env python3
"""
Write the built-in catalog as one JSON spec file per group
"""

import sys
import argparse
from pathlib import Path

# Add project directory to path
project_dir = Path(__file__).parent.parent
sys.path.insert(0, str(project_dir))

from cn_groups.catalog import builtin_specs, write_catalog
from helpers.config_loader import get_config_value
from loguru import logger


def main():
    """Main function"""
    default_dir = project_dir / get_config_value("catalog.directory", default="catalog")
    parser = argparse.ArgumentParser(description="Materialise the built-in group catalog")
    parser.add_argument(
        "directory",
        type=Path,
        nargs="?",
        default=default_dir,
        help=f"Output directory (default: {default_dir})"
    )
    parser.add_argument(
        "--clean",
        action="store_true",
        help="Remove existing *.json specs first"
    )
    args = parser.parse_args()

    if args.clean and args.directory.exists():
        for stale in args.directory.glob("*.json"):
            stale.unlink()

    specs = builtin_specs()
    paths = write_catalog(args.directory, specs)
    logger.info(f"Wrote {len(paths)} specs to {args.directory}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
