#!/usr/bin/env python3
"""
Test runner script for cn-groups

Runs the pytest suite. The default run covers everything; ``--fast`` drops
catalog sweeps and large constructions, ``--acceptance`` runs only the
whole-catalog checks.
"""

import sys
import subprocess
from pathlib import Path

# Add project directory to path
project_dir = Path(__file__).parent.parent
sys.path.insert(0, str(project_dir))

ACCEPTANCE_FILES = ["tests/test_catalog.py", "tests/test_cn_classifier.py"]


def build_marker_expression(fast: bool, skip_integration: bool, acceptance: bool) -> str:
    """Combine the marker switches into one ``-m`` expression"""
    if acceptance:
        return "slow"
    parts = []
    if fast:
        parts.append("not slow")
    if skip_integration:
        parts.append("not integration")
    return " and ".join(parts)


def run_tests(test_args=None):
    """Run the test suite"""
    if test_args is None:
        test_args = []

    cmd = [sys.executable, "-m", "pytest"] + test_args

    print("Running cn-groups Tests")
    print("=" * 40)
    print(f"Command: {' '.join(cmd)}")
    print()

    result = subprocess.run(cmd, cwd=project_dir)
    return result.returncode


def main():
    """Main function"""
    import argparse

    parser = argparse.ArgumentParser(description="Run cn-groups tests")
    parser.add_argument(
        '--fast',
        action='store_true',
        help="Skip slow tests (catalog sweeps, large constructions)"
    )
    parser.add_argument(
        '--no-integration',
        action='store_true',
        help="Skip worker-pool and entry-point tests"
    )
    parser.add_argument(
        '--acceptance',
        action='store_true',
        help="Run only the slow whole-catalog and family checks"
    )
    parser.add_argument(
        '--coverage',
        action='store_true',
        help='Run with coverage reporting'
    )
    parser.add_argument(
        '--verbose',
        '-v',
        action='store_true',
        help='Verbose output'
    )
    parser.add_argument(
        'test_path',
        nargs='?',
        help='Specific test file or directory to run'
    )

    args = parser.parse_args()
    if args.acceptance and args.fast:
        parser.error("--acceptance and --fast select disjoint tests")

    test_args = []

    expression = build_marker_expression(args.fast, args.no_integration, args.acceptance)
    if expression:
        test_args.extend(['-m', expression])

    if args.coverage:
        test_args.extend(['--cov=cn_groups', '--cov=helpers', '--cov-report=html', '--cov-report=term'])

    if args.verbose:
        test_args.append('-v')

    if args.test_path:
        test_args.append(args.test_path)
    elif args.acceptance:
        test_args.extend(ACCEPTANCE_FILES)

    return run_tests(test_args)


if __name__ == "__main__":
    sys.exit(main())
