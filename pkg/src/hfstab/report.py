"""Deterministic JSON/CSV emission.

All floating-point values are written with 17 significant digits so that
serialized artifacts round-trip exactly and reruns are byte-identical.
"""

from __future__ import annotations

import math

__all__ = ["format_float", "json_dumps", "csv_lines"]


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return "%.17g" % x


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + close + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [pad + _escape(str(k)) + ": " + _emit(v, indent, level + 1)
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if hasattr(obj, "to_dict"):
        return _emit(obj.to_dict(), indent, level)
    if isinstance(obj, complex):
        return _emit({"re": obj.real, "im": obj.imag}, indent, level)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def json_dumps(obj, indent: int = 2) -> str:
    """JSON text with 17-significant-digit floats and trailing newline."""
    return _emit(obj, indent, 0) + "\n"


def csv_lines(header: list[str], rows) -> str:
    """CSV text; numeric cells use the 17-significant-digit format."""
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, bool) or isinstance(v, int):
                cells.append(str(v))
            elif isinstance(v, float):
                cells.append(format_float(v))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
