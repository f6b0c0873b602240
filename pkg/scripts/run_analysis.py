#!/usr/bin/env python3
"""
Run the full evaluation grid (all scenarios, variants and baselines) over
one dataset directory per family.
"""

import sys
import argparse
import logging
from pathlib import Path
from datetime import datetime
from typing import List

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from main import run_command
from utils.logging_config import setup_logging


def evaluate_family(family: str, data_dir: Path, output_dir: Path, timestamp: str) -> bool:
    """
    Evaluate every scenario and variant of one family.

    Args:
        family: boom or xiangshan
        data_dir: Dataset directory of the family
        output_dir: Directory for the metrics, points and workbook
        timestamp: Suffix shared by the run's files

    Returns:
        True if successful, False otherwise
    """
    stem = output_dir / f"{family}_{timestamp}"
    exit_code = run_command([
        "evaluate", "--family", family, "--scenario", "all", "--variant", "all", "--baselines",
        "--data", str(data_dir), "--out", f"{stem}_metrics.csv", "--points", f"{stem}_points.csv",
        "--component-metrics", f"{stem}_components.csv", "--xlsx", f"{stem}.xlsx",
    ])
    if exit_code != 0:
        logging.error(f"Evaluation of {family} failed with exit code {exit_code}")
        return False
    logging.info(f"Evaluation of {family} written under {output_dir}")
    return True


def main() -> int:
    """Main function for the grid script."""
    parser = argparse.ArgumentParser(
        description="Full evaluation grid for the analytical core power model",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Evaluate the synthetic datasets from create_sample_data.py
  python run_analysis.py -d data/synthetic -o results
        """
    )
    parser.add_argument("-d", "--data-root", required=True,
                        help="Directory holding one dataset per family (boom/, xiangshan/)")
    parser.add_argument("-o", "--output", default="results", help="Output directory (default: results)")
    parser.add_argument("--log-level", choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], default='INFO',
                        help="Logging level (default: INFO)")
    args = parser.parse_args()

    setup_logging(args.log_level)
    logger = logging.getLogger(__name__)

    data_root = Path(args.data_root)
    output_dir = Path(args.output)
    output_dir.mkdir(parents=True, exist_ok=True)
    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")

    evaluated: List[str] = []
    for family in ("boom", "xiangshan"):
        data_dir = data_root / family
        if not data_dir.is_dir():
            logger.warning(f"No dataset for {family} at {data_dir}")
            continue
        if evaluate_family(family, data_dir, output_dir, timestamp):
            evaluated.append(family)

    if evaluated:
        logger.info(f"Evaluated families: {', '.join(evaluated)}")
        return 0
    logger.error("No family evaluated successfully")
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        sys.exit(130)
