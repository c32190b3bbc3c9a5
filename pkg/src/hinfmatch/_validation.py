"""Input validation helpers.

``sklearn.utils.check_array`` rejects complex input, so points in the
plane are validated here.
"""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from .exceptions import InstanceValidationError
from .hinf_norm import ProblemInstance


def check_points(X, *, max_modulus: float | None = None, name: str = "X") -> np.ndarray:
    """Return ``X`` as a complex ndarray, rejecting non-finite values.

    With ``max_modulus`` set, points farther than ``max_modulus + 1e-12`` from
    the origin are rejected.
    """
    try:
        arr = np.asarray(X, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} cannot be converted to complex numbers") from exc
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinity")
    if max_modulus is not None and np.any(np.abs(arr) > max_modulus + 1e-12):
        raise ValueError(f"{name} has points outside the disc of radius {max_modulus}")
    return arr


def check_instance(X) -> ProblemInstance:
    """Accept a :class:`ProblemInstance` or its JSON-style mapping."""
    if isinstance(X, ProblemInstance):
        return X
    if isinstance(X, Mapping):
        try:
            return ProblemInstance.from_dict(X)
        except KeyError as exc:
            raise InstanceValidationError(f"instance mapping lacks field {exc.args[0]!r}") from exc
    raise TypeError(f"expected a ProblemInstance or mapping, got {type(X).__name__}")
