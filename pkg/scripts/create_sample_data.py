#!/usr/bin/env python3
"""
Create synthetic labelled datasets for both configuration families.
"""

import argparse
from pathlib import Path
import sys

# Add src directory to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from main import run_command


def create_sample_data(output_root: Path, seed: int = 0, noise: float = 0.0) -> int:
    """Write data/synthetic/boom and data/synthetic/xiangshan with shared hidden parameters."""
    for family in ("boom", "xiangshan"):
        output_dir = output_root / family
        exit_code = run_command(["synthesize", "--family", family, "--out", str(output_dir),
                                 "--seed", str(seed), "--noise", str(noise)])
        if exit_code != 0:
            return exit_code
        print(f"Sample data created: {output_dir}")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Create synthetic power datasets")
    parser.add_argument("-o", "--output", default=str(Path(__file__).parent.parent / "data" / "synthetic"),
                        help="Output root (default: data/synthetic)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for hidden parameters and noise")
    parser.add_argument("--noise", type=float, default=0.0, help="Relative label noise stddev")
    args = parser.parse_args()
    sys.exit(create_sample_data(Path(args.output), args.seed, args.noise))
