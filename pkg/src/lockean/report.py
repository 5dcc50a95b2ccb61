"""Plain-data encoding of library results for machine-readable reports.

Rationals become reduced ``"a/b"`` strings, model sets become sorted
world-index lists and dataclasses become dicts of their public fields.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any

from .logic import ModelSet
from .probability import Distribution, format_rational


def to_data(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, ModelSet):
        return obj.worlds()
    if isinstance(obj, Distribution):
        return [format_rational(m) for m in obj.masses]
    if dataclasses.is_dataclass(obj):
        return {
            f.name: to_data(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if f.repr
        }
    if isinstance(obj, dict):
        return {str(k): to_data(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_data(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Deterministic JSON: sorted keys, no floating-point rationals."""
    return json.dumps(to_data(obj), sort_keys=True, separators=(",", ":"))


def pretty(obj: Any, indent: int = 0) -> str:
    """Indented ``key: value`` rendering for people."""
    data = to_data(obj)
    lines: list[str] = []
    _pretty(data, indent, lines)
    return "\n".join(lines)


def _scalar(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, list) and all(not isinstance(v, (dict, list)) for v in value):
        return "[" + ", ".join(_scalar(v) for v in value) + "]"
    return str(value)


def _is_flat(value: Any) -> bool:
    if isinstance(value, dict):
        return False
    if isinstance(value, list):
        return all(not isinstance(v, (dict, list)) for v in value)
    return True


def _pretty(data: Any, indent: int, lines: list[str]) -> None:
    pad = "  " * indent
    if isinstance(data, dict):
        for key in sorted(data):
            value = data[key]
            if _is_flat(value):
                lines.append(f"{pad}{key}: {_scalar(value)}")
            else:
                lines.append(f"{pad}{key}:")
                _pretty(value, indent + 1, lines)
    elif isinstance(data, list):
        if not data:
            lines.append(f"{pad}(none)")
        for item in data:
            if _is_flat(item):
                lines.append(f"{pad}- {_scalar(item)}")
            else:
                lines.append(f"{pad}-")
                _pretty(item, indent + 1, lines)
    else:
        lines.append(pad + _scalar(data))
