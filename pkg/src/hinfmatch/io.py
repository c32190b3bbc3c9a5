"""JSON encodings of instances and controllers.

Instance file::

    {"a": {"num": [...], "den": [...]}, "b": {"num": [...], "den": [...]}}

Controller file::

    {"s1": <rational> | "optimal", "s2": <rational> | "optimal"}

Coefficients are ascending; an omitted ``"den"`` means ``[1]``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .complex_core import RationalFunction
from .exceptions import InstanceValidationError
from .hinf_norm import ProblemInstance


class FileFormatError(ValueError):
    """Malformed input file; the message names the offending field."""


def _coeff_list(obj, where: str) -> list[float]:
    if not isinstance(obj, list) or not obj:
        raise FileFormatError(f"{where}: expected a non-empty list of numbers")
    out = []
    for i, c in enumerate(obj):
        if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
            raise FileFormatError(f"{where}[{i}]: expected a finite number, got {c!r}")
        out.append(float(c))
    return out


def parse_rational(obj, where: str) -> RationalFunction:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{where}: expected an object with 'num' (and optional 'den')")
    if "num" not in obj:
        raise FileFormatError(f"{where}.num: missing")
    num = _coeff_list(obj["num"], f"{where}.num")
    den = _coeff_list(obj.get("den", [1.0]), f"{where}.den")
    if all(d == 0.0 for d in den):
        raise FileFormatError(f"{where}.den: identically zero")
    return RationalFunction(num, den)


def _read_json(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(obj, dict):
        raise FileFormatError(f"{path}: top level must be an object")
    return obj


def instance_from_obj(obj: dict) -> ProblemInstance:
    for key in ("a", "b"):
        if key not in obj:
            raise FileFormatError(f"{key}: missing")
    a = parse_rational(obj["a"], "a")
    b = parse_rational(obj["b"], "b")
    try:
        return ProblemInstance(a, b)
    except InstanceValidationError as exc:
        raise FileFormatError(str(exc)) from exc


def load_instance(path) -> ProblemInstance:
    return instance_from_obj(_read_json(path))


def dump_instance(inst: ProblemInstance, path=None) -> str:
    text = json.dumps(inst.to_dict(), indent=2)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def load_controller_spec(path) -> dict:
    """``{"s1": RationalFunction | "optimal", "s2": ...}`` from a controller file."""
    obj = _read_json(path)
    out = {}
    for key in ("s1", "s2"):
        if key not in obj:
            raise FileFormatError(f"{key}: missing")
        entry = obj[key]
        out[key] = "optimal" if entry == "optimal" else parse_rational(entry, key)
    return out


def encode_rational(f: RationalFunction | None, digits: int = 12):
    if f is None:
        return None
    return {"num": [fmt_float(c, digits) for c in f.num.coeffs],
            "den": [fmt_float(c, digits) for c in f.den.coeffs]}


def fmt_float(x: float, digits: int = 12) -> float:
    """Round to ``digits`` significant digits."""
    x = float(x)
    if not math.isfinite(x):
        return x
    return float(f"{x:.{digits}g}")


def unit_circle_poles(f: RationalFunction, tol: float = 1e-10) -> np.ndarray:
    poles = f.poles()
    return poles[np.abs(np.abs(poles) - 1.0) <= tol]
