#!/usr/bin/env python3
"""
Recompute every published table and figure and re-check each output.

Runs in order:
1. Tables 1-3 -> {out_dir}/table{n}.csv, each followed by `verify`
2. Figures 1-8 -> {out_dir}/figure{n}.csv (or .parquet with --format parquet), each followed by `verify`

Stops at the first failing step and returns its exit code.

Use --test for a quick smoke run: table 3 and the closed-form figures on a coarse grid.
"""

import argparse
import logging
import subprocess
import sys
from pathlib import Path

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S",
)
logger = logging.getLogger(__name__)

CLI = Path(__file__).resolve().parent.parent / "src" / "dephasing" / "cli.py"

TABLE_IDS = (1, 2, 3)
FIGURE_IDS = tuple(range(1, 9))

# Test mode: skip the quadrature-heavy figure 7 and the pair tables
TEST_TABLE_IDS = (3,)
TEST_FIGURE_IDS = (1, 2, 3, 4, 5, 6, 8)
TEST_POINTS = 11


def run(cmd: list[str], cwd: Path, desc: str) -> int:
    """Run a command; return its exit code."""
    logger.info("")
    logger.info("=" * 80)
    logger.info("%s", desc)
    logger.info("-" * 80)
    result = subprocess.run(cmd, cwd=str(cwd))
    if result.returncode != 0:
        logger.error("%s failed (exit code %d)", desc, result.returncode)
    return result.returncode


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Recompute all published tables and figures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__,
    )
    parser.add_argument(
        "--out-dir",
        type=str,
        default="results",
        help="Directory for the CSV/Parquet outputs (default: results)",
    )
    parser.add_argument(
        "--format",
        choices=("csv", "parquet"),
        default="csv",
        help="Figure output format (default: csv)",
    )
    parser.add_argument(
        "--points",
        type=int,
        default=41,
        help="Grid points per figure axis (default: 41)",
    )
    parser.add_argument(
        "--test",
        action="store_true",
        help="Smoke run: table 3 and the closed-form figures with %d points" % TEST_POINTS,
    )
    parser.add_argument(
        "--quiet",
        action="store_true",
        help="Pass --quiet to the CLI",
    )
    args = parser.parse_args()

    if args.quiet:
        logging.getLogger().setLevel(logging.WARNING)

    base_dir = Path(__file__).resolve().parent.parent
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_ids = TEST_TABLE_IDS if args.test else TABLE_IDS
    figure_ids = TEST_FIGURE_IDS if args.test else FIGURE_IDS
    points = TEST_POINTS if args.test else args.points
    common = [sys.executable, str(CLI)] + (["--quiet"] if args.quiet else [])

    if args.test:
        logger.info("[TEST MODE] tables=%s, figures=%s, points=%d", table_ids, figure_ids, points)

    for table_id in table_ids:
        path = out_dir / f"table{table_id}.csv"
        code = run(common + ["table", str(table_id), "--out", str(path)], base_dir, f"TABLE {table_id}")
        if code:
            return code
        code = run(common + ["verify", str(path)], base_dir, f"VERIFY table {table_id}")
        if code:
            return code

    for figure_id in figure_ids:
        path = out_dir / f"figure{figure_id}.{args.format}"
        cmd = common + [
            "figure",
            str(figure_id),
            "--points",
            str(points),
            "--format",
            args.format,
            "--out",
            str(path),
        ]
        code = run(cmd, base_dir, f"FIGURE {figure_id}")
        if code:
            return code
        code = run(common + ["verify", str(path)], base_dir, f"VERIFY figure {figure_id}")
        if code:
            return code

    logger.info("")
    logger.info("=" * 80)
    logger.info("All tables and figures written to %s", out_dir)
    logger.info("=" * 80)
    return 0


if __name__ == "__main__":
    sys.exit(main())
