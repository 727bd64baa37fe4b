"""Canonical JSON text: two-space indentation with scalar-only arrays kept on one line."""

import json
import re
from fractions import Fraction

from .errors import SchemaError

_SCALAR_ARRAY = re.compile(r"\[\s*((?:[^\[\]{}\s][^\[\]{}]*?)?)\s*\]", re.S)


def _rational(obj):
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")


def dumps(obj):
    """Rationals are written as ``"p/q"`` strings."""
    text = json.dumps(obj, indent=2, ensure_ascii=False, default=_rational)

    def collapse(match):
        inner = match.group(1)
        items = [s.strip() for s in inner.split(",\n")] if inner else []
        if len(items) == 1 and "\n" in items[0]:
            return match.group(0)
        return "[" + ", ".join(items) + "]"

    return _SCALAR_ARRAY.sub(collapse, text) + "\n"


def loads(text, schema):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"not valid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise SchemaError("$", "top level must be an object")
    if data.get("schema", schema) != schema:
        raise SchemaError("$.schema", f"expected {schema!r}, got {data.get('schema')!r}")
    return data


def require(obj, key, kind, path):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}.{key}", "missing")
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"{path}.{key}", "expected an integer")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def int_vector(value, path, length=None):
    if not isinstance(value, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in value):
        raise SchemaError(path, "expected a list of integers")
    if length is not None and len(value) != length:
        raise SchemaError(path, f"expected length {length}, got {len(value)}")
    return tuple(value)
