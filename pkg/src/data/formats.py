"""
Small text formats used next to definition documents.

Covector file (.cov): one or more covectors, each introduced by a header
"COVECTOR <dim>" and followed by sparse entries "i re im".

    COVECTOR 6
    0 1.0 0.0
    3 1.0 0.0

Hull file (.hull): "HULL <blocks>", then per block
"BLOCK <label> n <n> dim <k>" followed by n rows of k "re im" pairs
(the orthonormal basis of E_pi, one row per coordinate of H_pi; no rows
when k = 0).

Action file (.act): "group <family> <order>", then either a line "trivial"
or one line "perm <s> <p_0> ... <p_{d-1}>" per non-identity element s of
the group, meaning the automorphism b_i -> b_{p_i}.
"""

from typing import Dict, List, Tuple

import numpy as np

from src.utils.errors import DefinitionParseError


def _lines(doc: str):
    for line_no, raw in enumerate(doc.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line.split()


def parse_covectors(doc: str) -> List[np.ndarray]:
    covectors: List[np.ndarray] = []
    current = None
    for line_no, tokens in _lines(doc):
        if tokens[0] == "COVECTOR":
            if len(tokens) != 2 or not tokens[1].isdigit() or int(tokens[1]) <= 0:
                raise DefinitionParseError("COVECTOR header needs a positive dimension", line_no)
            current = np.zeros(int(tokens[1]), dtype=complex)
            covectors.append(current)
            continue
        if current is None:
            raise DefinitionParseError("entry before any COVECTOR header", line_no)
        if len(tokens) != 3:
            raise DefinitionParseError("covector entries are 'i re im'", line_no)
        try:
            i = int(tokens[0])
            value = complex(float(tokens[1]), float(tokens[2]))
        except ValueError:
            raise DefinitionParseError(f"bad covector entry '{' '.join(tokens)}'", line_no)
        if not 0 <= i < current.shape[0]:
            raise DefinitionParseError(f"index {i} outside 0..{current.shape[0] - 1}", line_no)
        current[i] = value
    if not covectors:
        raise DefinitionParseError("no COVECTOR found")
    return covectors


def format_covectors(covectors: List[np.ndarray]) -> str:
    lines = []
    for covec in covectors:
        covec = np.asarray(covec, dtype=complex)
        lines.append(f"COVECTOR {covec.shape[0]}")
        for i in np.nonzero(covec)[0]:
            lines.append(f"{int(i)} {float(covec[i].real)!r} {float(covec[i].imag)!r}")
    return "\n".join(lines) + "\n"


def read_covectors(path: str) -> List[np.ndarray]:
    with open(path) as fh:
        return parse_covectors(fh.read())


def _count(token: str, what: str, line_no: int) -> int:
    if not token.isdigit():
        raise DefinitionParseError(f"{what} must be a non-negative integer, got '{token}'", line_no)
    return int(token)


def parse_hull(doc: str) -> List[Tuple[str, int, np.ndarray]]:
    """Returns (label, n, basis) per block."""
    rows = list(_lines(doc))
    if not rows or rows[0][1][0] != "HULL" or len(rows[0][1]) != 2:
        raise DefinitionParseError("hull documents start with 'HULL <blocks>'", rows[0][0] if rows else None)
    expected = _count(rows[0][1][1], "block count", rows[0][0])
    parts = []
    k = 1
    while k < len(rows):
        line_no, tokens = rows[k]
        if tokens[0] != "BLOCK" or len(tokens) != 6 or tokens[2] != "n" or tokens[4] != "dim":
            raise DefinitionParseError("expected 'BLOCK <label> n <n> dim <k>'", line_no)
        label = tokens[1]
        n, dim = _count(tokens[3], "n", line_no), _count(tokens[5], "dim", line_no)
        basis = np.zeros((n, dim), dtype=complex)
        for r in range(n if dim else 0):
            k += 1
            if k >= len(rows):
                raise DefinitionParseError(f"block {label} ends early", line_no)
            row_no, values = rows[k]
            if len(values) != 2 * dim:
                raise DefinitionParseError(f"block {label} rows need {dim} re/im pairs", row_no)
            try:
                pairs = np.array([float(v) for v in values]).reshape(dim, 2)
            except ValueError:
                raise DefinitionParseError(f"bad hull entry in block {label}", row_no)
            basis[r] = pairs[:, 0] + 1j * pairs[:, 1]
        parts.append((label, n, basis))
        k += 1
    if len(parts) != expected:
        raise DefinitionParseError(f"HULL announces {expected} blocks, found {len(parts)}")
    return parts


def format_hull(parts: List[Tuple[str, int, np.ndarray]]) -> str:
    lines = [f"HULL {len(parts)}"]
    for label, n, basis in parts:
        lines.append(f"BLOCK {label} n {n} dim {basis.shape[1]}")
        if basis.shape[1] == 0:
            continue
        for r in range(n):
            lines.append(" ".join(f"{float(v.real)!r} {float(v.imag)!r}" for v in basis[r]))
    return "\n".join(lines) + "\n"


def parse_action(doc: str) -> Dict:
    """
    Returns:
        Dict with 'group' (family, order) and 'perms' (element -> basis permutation);
        'perms' is empty for the trivial action.
    """
    group = None
    perms: Dict[int, List[int]] = {}
    trivial = False
    for line_no, tokens in _lines(doc):
        head = tokens[0]
        if head == "group":
            if len(tokens) != 3 or not tokens[2].isdigit():
                raise DefinitionParseError("expected 'group <family> <order>'", line_no)
            group = (tokens[1], int(tokens[2]))
        elif head == "trivial":
            trivial = True
        elif head == "perm":
            try:
                values = [int(t) for t in tokens[1:]]
            except ValueError:
                raise DefinitionParseError("perm lines hold integers only", line_no)
            if len(values) < 2:
                raise DefinitionParseError("perm needs an element and a permutation", line_no)
            if values[0] in perms:
                raise DefinitionParseError(f"element {values[0]} given twice", line_no)
            perms[values[0]] = values[1:]
        else:
            raise DefinitionParseError(f"unknown action statement '{head}'", line_no)
    if group is None:
        raise DefinitionParseError("action document has no 'group' line")
    if trivial and perms:
        raise DefinitionParseError("an action is either trivial or given by perm lines")
    return {"group": group, "perms": perms}
