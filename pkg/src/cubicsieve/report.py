"""
Run manifests, deterministic JSON/CSV emission and schema validation.

Floats are written with 17 significant digits, keys are sorted, and timing
fields are dropped unless requested, so the same manifest always yields
byte-identical output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from dataclasses import asdict, dataclass, field, is_dataclass
from fractions import Fraction
from importlib import resources
from typing import Any, Dict, List, Optional

import jsonschema

from . import __version__

TIMING_KEYS = {"wall_time", "runtime"}


@dataclass
class RunManifest:
    command: str
    config: Dict[str, Any]
    versions: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    wall_time: Optional[float] = None
    outputs: List[str] = field(default_factory=list)


def versions() -> Dict[str, str]:
    import gmpy2
    import mpmath
    import numpy
    import sympy

    return {"cubicsieve": __version__, "python": platform.python_version(), "numpy": numpy.__version__,
            "mpmath": mpmath.__version__, "sympy": sympy.__version__, "gmpy2": gmpy2.version()}


def to_plain(obj: Any) -> Any:
    """Dataclasses, Fractions and numpy scalars to JSON-ready values."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_plain(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "item") and not isinstance(obj, (int, float)):  # numpy scalar
        return to_plain(obj.item())
    if isinstance(obj, (int, float)):
        return obj
    return str(obj)


def strip_timing(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if k not in TIMING_KEYS}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj


def _fmt_float(v: float) -> str:
    if not math.isfinite(v):
        # JSON has no inf/nan; emit them as strings
        return json.dumps(repr(v))
    s = format(v, ".17g")
    if all(ch not in s for ch in ".en"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: sorted keys, 17 significant digits."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(obj[k], indent, _level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def load_schema() -> dict:
    text = resources.files("cubicsieve").joinpath("schemas/report.schema.json").read_text()
    return json.loads(text)


def validate(doc: dict) -> None:
    jsonschema.validate(doc, load_schema())


def build_document(manifest: RunManifest, result: Any, timing: bool = False) -> dict:
    doc = {"manifest": to_plain(manifest), "result": to_plain(result)}
    if not timing:
        doc = strip_timing(doc)
    validate(doc)
    return doc


def _flatten(obj: Any, prefix: str = "") -> List[List[str]]:
    rows = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            rows.extend(_flatten(obj[k], f"{prefix}.{k}" if prefix else str(k)))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}.{i}"))
    else:
        rows.append([prefix, _fmt_float(obj) if isinstance(obj, float) else ("" if obj is None else str(obj))])
    return rows


def to_csv(doc: dict) -> str:
    """A table when the result holds a list of uniform rows, else key,value pairs."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    result = doc["result"]
    table = result.get("rows") if isinstance(result, dict) else None
    if isinstance(table, list) and table and all(isinstance(r, dict) for r in table):
        cols = sorted(table[0])
        w.writerow(cols)
        for r in table:
            w.writerow([_flatten(r[c])[0][1] if not isinstance(r[c], (dict, list)) else json.dumps(r[c])
                        for c in cols])
    else:
        w.writerow(["key", "value"])
        w.writerows(_flatten(doc))
    return out.getvalue()
