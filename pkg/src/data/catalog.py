"""
Building, loading and writing the shipped example quantum groups.

Usage:
    python scripts/build_examples.py
"""

import logging
import os
from typing import Dict, List, Optional

import pandas as pd

from config.catalog import EXAMPLES, EXPECTED_BLOCKS, EXPECTED_INTRINSIC_ORDER
from config.settings import DEFINITIONS_DIR, MANIFEST_PATH
from src.algebra.hopf import (
    FiniteQuantumGroup,
    from_finite_group,
    from_group_algebra,
    load_definition_file,
    write_definition_file,
)
from src.algebra.linalg import DEFAULT_TOL, Tolerance
from src.utils.errors import DefinitionParseError
from src.utils.groups import named_group

logger = logging.getLogger(__name__)


def has_recipe(name: str) -> bool:
    return EXAMPLES[name]["kind"] != "data"


def build_example(name: str) -> FiniteQuantumGroup:
    """
    Construct a catalog example from its recipe (no file access).

    Raises:
        DefinitionParseError: unknown name, or an example that ships as data only.
    """
    if name not in EXAMPLES:
        raise DefinitionParseError(f"unknown example '{name}' (known: {', '.join(sorted(EXAMPLES))})")
    entry = EXAMPLES[name]
    if entry["kind"] == "function":
        return from_finite_group(named_group(*entry["group"]))
    if entry["kind"] == "group_algebra":
        return from_group_algebra(named_group(*entry["group"]))
    raise DefinitionParseError(f"example '{name}' has no recipe; load {entry['file']} instead")


def example_path(name: str, directory: str = DEFINITIONS_DIR) -> str:
    return os.path.join(directory, EXAMPLES[name]["file"])


def load_example(name: str, tol: Tolerance = DEFAULT_TOL, directory: str = DEFINITIONS_DIR) -> FiniteQuantumGroup:
    """Load a catalog example from its shipped definition file."""
    if name not in EXAMPLES:
        raise DefinitionParseError(f"unknown example '{name}'")
    return load_definition_file(example_path(name, directory), tol)


def write_examples(directory: str = DEFINITIONS_DIR, names: Optional[List[str]] = None) -> Dict[str, str]:
    """
    Regenerate the definition files that have a recipe.

    Returns:
        Dict of example name -> written path.
    """
    os.makedirs(directory, exist_ok=True)
    written = {}
    for name in names or sorted(EXAMPLES):
        if not has_recipe(name):
            logger.info("%s ships as data, not regenerated", name)
            continue
        path = example_path(name, directory)
        write_definition_file(build_example(name), path)
        written[name] = path
        logger.info("wrote %s", path)
    return written


def manifest_frame() -> pd.DataFrame:
    """The expected fingerprints as a table, one row per example."""
    rows = []
    for name in sorted(EXAMPLES):
        rows.append({
            "name": name,
            "file": EXAMPLES[name]["file"],
            "kind": EXAMPLES[name]["kind"],
            "blocks": ",".join(str(n) for n in EXPECTED_BLOCKS[name]),
            "intrinsic_order": EXPECTED_INTRINSIC_ORDER[name],
        })
    return pd.DataFrame(rows)


def load_manifest(path: str = MANIFEST_PATH) -> pd.DataFrame:
    return pd.read_csv(path, dtype={"blocks": str})


def write_manifest(path: str = MANIFEST_PATH) -> str:
    manifest_frame().to_csv(path, index=False)
    return path
