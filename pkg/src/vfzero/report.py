"""Canonical JSON serialization for reports.

Exact values (indices, rational endpoints, expressions) are emitted as
strings so nothing is corrupted by float conversion; floats appear only in
trajectory samples and residuals.  Output is byte-deterministic for a
fixed payload: keys sorted, fixed separators, trailing newline.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction
from typing import Any, Optional

from .expr import Expr
from .fields import VectorField
from .intervals import Box, Interval


def jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, Expr):
        return str(obj)
    if isinstance(obj, VectorField):
        return str(obj)
    if isinstance(obj, Interval):
        return {"lo": str(obj.lo), "hi": str(obj.hi)}
    if isinstance(obj, Box):
        return {
            "x0": str(obj.x.lo),
            "y0": str(obj.y.lo),
            "x1": str(obj.x.hi),
            "y1": str(obj.y.hi),
        }
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_report(payload: dict) -> str:
    return json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n"


def emit_report(payload: dict, path: Optional[str] = None) -> str:
    text = render_report(payload)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text
