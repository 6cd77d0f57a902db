"""Report serialization: JSON and flat TSV with 17 significant digits."""

from __future__ import annotations

import json
import math

import numpy as np


def _number(v: float) -> str:
    if not math.isfinite(v):
        return "null"
    return format(v, ".17g")


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, tuple):
        return list(obj)
    return obj


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    obj = _plain(obj)
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _number(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(_plain(v), (dict, list)) for v in obj):
            return "[" + ", ".join(to_json(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def flatten(obj, prefix: str = "") -> list[tuple[str, object]]:
    """Leaves of a nested report as ``(dotted.key, value)`` pairs."""
    obj = _plain(obj)
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out.extend(flatten(v, f"{prefix}.{k}" if prefix else str(k)))
        return out
    if isinstance(obj, list):
        out = []
        for i, v in enumerate(obj):
            out.extend(flatten(v, f"{prefix}.{i}" if prefix else str(i)))
        return out
    return [(prefix, obj)]


def to_tsv(obj) -> str:
    lines = ["key\tvalue"]
    for key, value in flatten(obj):
        if isinstance(value, str):
            text = value
        else:
            text = to_json(value)
        lines.append(f"{key}\t{text}")
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> dict[str, object]:
    """Inverse of :func:`to_tsv` for leaves; numbers come back as floats or ints."""
    out = {}
    for line in text.splitlines()[1:]:
        key, _, raw = line.partition("\t")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out
