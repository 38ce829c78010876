"""
Rendering of reports for the command line.

Human output follows the title / ===== / indented rows layout; structured
output is JSON with sorted keys so identical runs print identical bytes.
"""

import enum
import json
import math
from typing import Any, Dict, Iterable, List, Tuple, Union

import numpy as np
import pandas as pd

Row = Tuple[str, Any]


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars/arrays, complex numbers, enums and frames to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, pd.DataFrame):
        return [to_jsonable(r) for r in obj.to_dict(orient="records")]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [to_jsonable(float(obj.real)), to_jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isinf(value) or math.isnan(value):
            return str(value)
        return value
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2)


def format_residual(value: float) -> str:
    return "inf" if math.isinf(value) else f"{value:.2e}"


def verdict(passed: bool) -> str:
    return "OK" if passed else "FAIL"


def render_human(title: str, rows: Iterable[Union[Row, str]], width: int = 40) -> str:
    """
    Args:
        title: First line of the report.
        rows: (key, value) pairs or preformatted strings; DataFrame values are
            printed as indented tables.
    """
    lines: List[str] = [title, "=" * width]
    for row in rows:
        if isinstance(row, str):
            lines.append(f"  {row}")
            continue
        key, value = row
        if isinstance(value, pd.DataFrame):
            lines.append(f"  {key}:")
            lines.extend("    " + line for line in value.to_string(index=False).splitlines())
        else:
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)
