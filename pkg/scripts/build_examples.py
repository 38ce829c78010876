"""
Regenerate the shipped example definitions and their manifest.

Usage:
    python scripts/build_examples.py
    python scripts/build_examples.py --only c_s3 group_s3
    python scripts/build_examples.py --check
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from config.catalog import EXAMPLES
from config.settings import DEFINITIONS_DIR, MANIFEST_PATH
from src.algebra.hopf import structurally_equal
from src.data.catalog import build_example, has_recipe, load_example, write_examples, write_manifest


def check_examples(directory: str) -> int:
    """Compare every shipped file with its recipe; returns the number of mismatches."""
    bad = 0
    for name in sorted(EXAMPLES):
        shipped = load_example(name, directory=directory)
        if not has_recipe(name):
            print(f"  {name:<15} OK (data, axioms pass)")
            continue
        same = structurally_equal(shipped, build_example(name))
        print(f"  {name:<15} {'OK' if same else 'DIFFERS'}")
        bad += not same
    return bad


def main():
    parser = argparse.ArgumentParser(description='Write the example quantum groups')
    parser.add_argument('--dir', default=DEFINITIONS_DIR, help='Output directory')
    parser.add_argument('--only', nargs='+', choices=sorted(n for n in EXAMPLES if has_recipe(n)), help='Examples to write')
    parser.add_argument('--check', action='store_true', help='Compare shipped files with their recipes')
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')

    if args.check:
        sys.exit(1 if check_examples(args.dir) else 0)

    written = write_examples(args.dir, args.only)
    print(f"Wrote {len(written)} definitions to {args.dir}")
    manifest = MANIFEST_PATH if args.dir == DEFINITIONS_DIR else os.path.join(args.dir, 'manifest.csv')
    print(f"Manifest: {write_manifest(manifest)}")


if __name__ == "__main__":
    main()
