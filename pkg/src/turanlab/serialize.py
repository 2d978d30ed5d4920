"""Canonical JSON and fixed-column CSV output.

Floats are written with 17 significant digits, keys are sorted, and
non-finite floats become the strings ``"inf"``, ``"-inf"`` and ``"nan"``.
Parsing an emitted document and emitting it again gives identical bytes.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import math
from typing import Any, Iterable

import numpy as np

CSV_COLUMNS = ("inequality_id", "n", "p", "q", "lhs", "rhs", "ratio", "pass", "seed", "poly_digest")


def format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_plain(obj: Any) -> Any:
    """Reduce records, enums and numpy scalars to JSON-ready builtins."""
    if hasattr(obj, "to_dict"):
        return to_plain(obj.to_dict())
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def _flat(v: Any) -> bool:
    return not isinstance(v, (dict, list)) or (isinstance(v, list) and not any(isinstance(i, (dict, list)) for i in v))


def _emit(obj: Any, out: list[str], indent: int, level: int) -> None:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        if obj in ("inf", "-inf", "nan"):
            out.append(f'"{obj}"')
        else:
            out.append(json.dumps(obj, ensure_ascii=True))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            out.append(pad + json.dumps(key, ensure_ascii=True) + (": " if indent else ":"))
            _emit(obj[key], out, indent, level + 1)
        out.append(end + "}")
    elif isinstance(obj, list):
        if not obj:
            out.append("[]")
            return
        if indent and all(_flat(v) for v in obj):
            _emit(obj, out, 0, 0)
            return
        out.append("[")
        for i, item in enumerate(obj):
            if i:
                out.append(",")
            out.append(pad)
            _emit(item, out, indent, level + 1)
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    out: list[str] = []
    _emit(to_plain(obj), out, indent, 0)
    return "".join(out) + "\n"


def loads(text: str) -> Any:
    return json.loads(text)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value).strip('"')
    if isinstance(value, list):
        return dumps(value, indent=0).strip()
    return str(value)


def csv_text(reports: Iterable[Any], seed: int | None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        d = to_plain(r)
        d["seed"] = seed
        w.writerow([_cell(d.get(c)) for c in CSV_COLUMNS])
    return buf.getvalue()
