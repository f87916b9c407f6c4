"""CSV reading/writing with lossless float round-trip and atomic replace.

Conventions: comma separators, one header row, LF endings, UTF-8, numbers
at 17 significant digits (bit-exact for IEEE doubles).  Missing values
(NaN in memory) are empty fields, never NaN/inf tokens.
"""

from __future__ import annotations

import math
import os

from .errors import InvalidSpecError


def format_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isnan(x):
        return ""
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def write_csv(path: str, header: list[str], rows) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_value(v) for v in row) + "\n")
    os.replace(tmp, path)


def read_csv(path: str) -> tuple[list[str], list[list[float | None]]]:
    """Read a CSV written by write_csv; empty fields come back as None."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise InvalidSpecError(f"{path}: empty CSV")
    header = lines[0].split(",")
    rows = []
    for ln in lines[1:]:
        if not ln:
            continue
        vals: list[float | None] = []
        for tok in ln.split(","):
            vals.append(None if tok == "" else float(tok))
        rows.append(vals)
    return header, rows
