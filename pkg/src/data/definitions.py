"""
Definition documents for finite quantum groups.

Grammar (one statement per line, '#' starts a comment, indices are 0-based):

    name <text>
    dim <n>
    basis <label_0> ... <label_{n-1}>
    meta <key> <value...>          (any number, optional)

    MULT        entries "i j k re im"   coefficient of b_k in b_i b_j
    UNIT        entries "i re im"       coefficient of b_i in 1
    STAR        entries "i j re im"     coefficient of b_i in b_j*
    COPRODUCT   entries "k i j re im"   coefficient of b_i (x) b_j in Delta(b_k)
    COUNIT      entries "i re im"       epsilon(b_i)
    ANTIPODE    entries "i j re im"     coefficient of b_i in S(b_j)
    HAAR        entries "i re im"       h(b_i); optional, solved for when absent
    END         optional terminator

Header lines come first. Omitted entries are zero. Unknown sections,
repeated sections, repeated entries and out-of-range indices are errors.
"""

from typing import Dict, List, Optional

import numpy as np

from src.utils.errors import DefinitionParseError

# section -> number of index columns
SECTIONS = {
    "MULT": 3,
    "UNIT": 1,
    "STAR": 2,
    "COPRODUCT": 3,
    "COUNIT": 1,
    "ANTIPODE": 2,
    "HAAR": 1,
}
REQUIRED = ["MULT", "UNIT", "STAR", "COPRODUCT", "COUNIT", "ANTIPODE"]
HEADER_KEYS = ("name", "dim", "basis", "meta")


def _parse_float(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise DefinitionParseError(f"'{token}' is not a number", line_no)
    if not np.isfinite(value):
        raise DefinitionParseError(f"'{token}' is not finite", line_no)
    return value


def _parse_index(token: str, dim: int, line_no: int) -> int:
    try:
        value = int(token)
    except ValueError:
        raise DefinitionParseError(f"'{token}' is not an index", line_no)
    if not 0 <= value < dim:
        raise DefinitionParseError(f"index {value} outside 0..{dim - 1}", line_no)
    return value


def parse_definition(doc: str) -> dict:
    """
    Parse a definition document into dense tensors.

    Args:
        doc: Document text.

    Returns:
        Dict with keys name, basis, meta and tensors (section name -> complex array,
        HAAR mapped to None when absent).
    """
    name: Optional[str] = None
    dim: Optional[int] = None
    basis: Optional[List[str]] = None
    meta: Dict[str, str] = {}
    tensors: Dict[str, np.ndarray] = {}
    seen: Dict[str, set] = {}
    section: Optional[str] = None
    ended = False

    for line_no, raw in enumerate(doc.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ended:
            raise DefinitionParseError("content after END", line_no)
        tokens = line.split()
        head = tokens[0]

        if head == "END":
            ended = True
            continue

        if head.isupper():
            if head not in SECTIONS:
                raise DefinitionParseError(f"unknown section '{head}'", line_no)
            if head in tensors:
                raise DefinitionParseError(f"section {head} appears twice", line_no)
            if dim is None or basis is None:
                raise DefinitionParseError("sections must follow the dim and basis header lines", line_no)
            if len(tokens) != 1:
                raise DefinitionParseError(f"section header {head} takes no arguments", line_no)
            section = head
            n_idx = SECTIONS[head]
            tensors[head] = np.zeros((dim,) * n_idx, dtype=complex)
            seen[head] = set()
            continue

        if section is None:
            if head not in HEADER_KEYS:
                raise DefinitionParseError(f"unknown header key '{head}'", line_no)
            rest = line[len(head):].strip()
            if head == "name":
                name = rest
            elif head == "dim":
                try:
                    dim = int(rest)
                except ValueError:
                    raise DefinitionParseError(f"dim must be an integer, got '{rest}'", line_no)
                if dim <= 0:
                    raise DefinitionParseError("dim must be positive", line_no)
            elif head == "basis":
                basis = tokens[1:]
            else:
                if len(tokens) < 2:
                    raise DefinitionParseError("meta needs a key", line_no)
                meta[tokens[1]] = " ".join(tokens[2:])
            if basis is not None and dim is not None and len(basis) != dim:
                raise DefinitionParseError(f"basis has {len(basis)} labels but dim is {dim}", line_no)
            continue

        n_idx = SECTIONS[section]
        if len(tokens) != n_idx + 2:
            raise DefinitionParseError(f"{section} entries need {n_idx} indices and a re/im pair", line_no)
        idx = tuple(_parse_index(t, dim, line_no) for t in tokens[:n_idx])
        if idx in seen[section]:
            raise DefinitionParseError(f"{section} entry {idx} given twice", line_no)
        seen[section].add(idx)
        re = _parse_float(tokens[n_idx], line_no)
        im = _parse_float(tokens[n_idx + 1], line_no)
        tensors[section][idx] = complex(re, im)

    if dim is None or basis is None:
        raise DefinitionParseError("missing dim or basis header")
    missing = [s for s in REQUIRED if s not in tensors]
    if missing:
        raise DefinitionParseError(f"missing sections: {', '.join(missing)}")
    tensors.setdefault("HAAR", None)
    return {"name": name or "unnamed", "basis": basis, "meta": meta, "tensors": tensors}


def _format_entries(arr: np.ndarray) -> List[str]:
    lines = []
    for idx in zip(*np.nonzero(arr)):
        value = complex(arr[idx])
        indices = " ".join(str(int(i)) for i in idx)
        lines.append(f"{indices} {value.real!r} {value.imag!r}")
    return lines


def format_definition(name: str, basis: List[str], tensors: Dict[str, np.ndarray], meta: Dict[str, str]) -> str:
    """Inverse of parse_definition; only nonzero entries are written."""
    lines = [f"name {name}", f"dim {len(basis)}", "basis " + " ".join(basis)]
    for key in sorted(meta):
        lines.append(f"meta {key} {meta[key]}".rstrip())
    for section in SECTIONS:
        if section not in tensors or tensors[section] is None:
            continue
        lines.append(section)
        lines.extend(_format_entries(np.asarray(tensors[section], dtype=complex)))
    lines.append("END")
    return "\n".join(lines) + "\n"
