"""Deterministic JSON/CSV emission with 17-significant-digit numerals.

The stdlib json module prints floats with repr (shortest round-trip);
report files instead carry a fixed 17-significant-digit form so that
equal values always serialize to equal bytes.
"""

import math

__all__ = ["format_float", "dumps"]


def format_float(value: float) -> str:
    if value != value or math.isinf(value):
        raise ValueError(f"cannot serialize non-finite float {value!r}")
    return format(value, ".17g")


def _encode(obj, out: list, indent: int, level: int) -> None:
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
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"')
                   .replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t") + '"')
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        sep, pad, close = _layout(indent, level)
        out.append("[" + pad)
        for i, item in enumerate(obj):
            if i:
                out.append("," + pad)
            _encode(item, out, indent, level + 1)
        out.append(close + "]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        sep, pad, close = _layout(indent, level)
        out.append("{" + pad)
        for i, (key, value) in enumerate(obj.items()):
            if i:
                out.append("," + pad)
            _encode(str(key), out, indent, level + 1)
            out.append(": ")
            _encode(value, out, indent, level + 1)
        out.append(close + "}")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}: {obj!r}")


def _layout(indent: int, level: int):
    if indent <= 0:
        return "", "", ""
    pad = "\n" + " " * (indent * (level + 1))
    close = "\n" + " " * (indent * level)
    return "", pad, close


def dumps(obj, indent: int = 0) -> str:
    """JSON text with floats at 17 significant digits, keys in
    insertion order."""
    out: list = []
    _encode(obj, out, indent, 0)
    return "".join(out)
