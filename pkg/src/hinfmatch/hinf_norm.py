"""Boundary-grid cost evaluation for the structured matching family.

For ``L0 = I + a J`` and ``L1 = b J`` with ``Q = diag(S1, S2)``::

    L0 + L1 Q = [[1,          a + b S2],
                 [a + b S1,   1       ]]

and the cost is the supremum over the unit circle of the largest singular
value of that matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .complex_core import Matrix2, RationalFunction, sigma_max_2x2
from .exceptions import InstanceValidationError

__all__ = [
    "ProblemInstance",
    "BoundarySamples",
    "DiscSamples",
    "DiagonalController",
    "NormEstimate",
    "matching_value",
    "hinf_norm",
    "symmetric_norm",
    "uniqueness_gap_check",
    "circle_grid",
]

WELLPOSED_GRID = 2**16
WELLPOSED_TOL = 1e-8
START_GRID = 1024
MAX_GRID = 2**22
PEAKS = 4


def circle_grid(n: int) -> np.ndarray:
    """``n`` equispaced points ``exp(2 pi j m / n)`` on the unit circle.

    Quarter-turn points are exactly ``1, j, -1, -j`` and the grid is exactly
    conjugate symmetric; the lens map amplifies rounding near ``+-j``.
    """
    w = np.exp(2j * np.pi * np.arange(n) / n)
    m = np.arange(n)
    quarter = (4 * m) % n == 0
    w[quarter] = 1j ** ((4 * m[quarter]) // n)
    half = m[1 : n // 2 + 1]
    w[n - half] = np.conj(w[half])
    return w


@dataclass(frozen=True)
class ProblemInstance:
    """Rational data ``(a, b)`` with ``L0 = I + a J`` and ``L1 = b J``."""

    a: RationalFunction
    b: RationalFunction

    def __post_init__(self):
        for name in ("a", "b"):
            f = getattr(self, name)
            if not isinstance(f, RationalFunction):
                raise InstanceValidationError(f"{name} must be a RationalFunction")
            if not f.is_stable():
                raise InstanceValidationError(f"{name} is not stable: pole in the closed unit disc")
        if self.b.is_zero():
            raise InstanceValidationError("b vanishes on the unit circle (b is identically zero)")
        bmin = float(np.min(np.abs(self.b(circle_grid(WELLPOSED_GRID)))))
        if bmin <= WELLPOSED_TOL:
            raise InstanceValidationError(f"b vanishes on the unit circle (min |b| = {bmin:.3g})")

    @classmethod
    def from_coeffs(cls, a_num, b_num, a_den=(1.0,), b_den=(1.0,)) -> "ProblemInstance":
        return cls(RationalFunction(a_num, a_den), RationalFunction(b_num, b_den))

    @classmethod
    def sqrt2_example(cls) -> "ProblemInstance":
        """``a = 0.5 w``, ``b = w**2``: optimal cost sqrt(2), non-rational optimum."""
        return cls.from_coeffs([0.0, 0.5], [0.0, 0.0, 1.0])

    def to_dict(self) -> dict:
        return {"a": self.a.to_dict(), "b": self.b.to_dict()}

    @classmethod
    def from_dict(cls, d) -> "ProblemInstance":
        return cls(RationalFunction.from_dict(d["a"]), RationalFunction.from_dict(d["b"]))


@dataclass(frozen=True)
class BoundarySamples:
    """Values of a function on the uniform circle grid ``circle_grid(len(values))``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        n = v.size
        if n < 256 or n & (n - 1):
            raise ValueError("boundary tables need a power-of-two length >= 256")
        mirror = np.conj(v[(-np.arange(n)) % n])
        if np.max(np.abs(v - mirror)) > 1e-8:
            raise ValueError("boundary table is not conjugate symmetric")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_function(cls, f: Callable, n: int) -> "BoundarySamples":
        return cls(np.asarray(f(circle_grid(n)), dtype=complex))

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class DiscSamples:
    """Values of a function on concentric circles ``r * exp(2 pi j m / count)``."""

    radii: tuple
    count: int
    values: np.ndarray = field(repr=False)

    @classmethod
    def from_function(cls, f: Callable, radii=(0.3, 0.6, 0.9), count: int = 256) -> "DiscSamples":
        radii = tuple(float(r) for r in radii)
        pts = cls.grid(radii, count)
        return cls(radii, count, np.asarray(f(pts), dtype=complex))

    @staticmethod
    def grid(radii, count) -> np.ndarray:
        return np.asarray(radii)[:, None] * circle_grid(count)[None, :]

    @property
    def points(self) -> np.ndarray:
        return self.grid(self.radii, self.count)


Entry = Union[RationalFunction, BoundarySamples, Callable]


@dataclass(frozen=True)
class DiagonalController:
    """``Q = diag(s1, s2)``.

    ``kind`` is ``"rational"`` (both entries :class:`RationalFunction`),
    ``"sampled"`` (both :class:`BoundarySamples` of equal length) or
    ``"optimal"`` (callables, typically an
    :class:`~hinfmatch.interpolation.OptimalController`).
    """

    kind: str
    s1: Entry
    s2: Entry

    def __post_init__(self):
        if self.kind == "rational":
            for s in (self.s1, self.s2):
                if not isinstance(s, RationalFunction):
                    raise TypeError("rational controllers need RationalFunction entries")
                if not s.is_stable():
                    raise InstanceValidationError("controller entry has a pole in the closed unit disc")
        elif self.kind == "sampled":
            if not (isinstance(self.s1, BoundarySamples) and isinstance(self.s2, BoundarySamples)):
                raise TypeError("sampled controllers need BoundarySamples entries")
            if len(self.s1) != len(self.s2):
                raise ValueError("sampled entries must share a grid")
        elif self.kind == "optimal":
            if not (callable(self.s1) and callable(self.s2)):
                raise TypeError("optimal controller entries must be callable")
        else:
            raise ValueError(f"unknown controller kind {self.kind!r}")

    @classmethod
    def zero(cls) -> "DiagonalController":
        z = RationalFunction.constant(0.0)
        return cls("rational", z, z)

    @classmethod
    def rational(cls, s1: RationalFunction, s2: RationalFunction | None = None) -> "DiagonalController":
        return cls("rational", s1, s1 if s2 is None else s2)

    @classmethod
    def sampled(cls, s1: BoundarySamples, s2: BoundarySamples | None = None) -> "DiagonalController":
        return cls("sampled", s1, s1 if s2 is None else s2)

    @classmethod
    def optimal(cls, s: Callable) -> "DiagonalController":
        return cls("optimal", s, s)

    def swapped(self) -> "DiagonalController":
        return DiagonalController(self.kind, self.s2, self.s1)

    def evaluate(self, w) -> tuple:
        """``(s1(w), s2(w))``; sampled entries only on their own grid."""
        if self.kind == "sampled":
            n = len(self.s1)
            if np.shape(w) != (n,) or not np.allclose(w, circle_grid(n), atol=1e-14):
                raise ValueError("sampled controllers can only be evaluated on their grid")
            return self.s1.values, self.s2.values
        return self.s1(w), self.s2(w)


@dataclass(frozen=True)
class NormEstimate:
    """Grid maximum of the cost (a lower bound on the supremum) with refinement data."""

    value: float
    grid_size: int
    converged: bool
    last_delta: float

    def to_dict(self) -> dict:
        return {"norm": self.value, "grid_size": self.grid_size, "converged": self.converged}


def _offdiagonals(inst: ProblemInstance, q: DiagonalController, w):
    s1, s2 = q.evaluate(w)
    a = inst.a(w)
    b = inst.b(w)
    return a + b * s1, a + b * s2


def matching_value(inst: ProblemInstance, q: DiagonalController, w: complex) -> Matrix2:
    """``L0(w) + L1(w) Q(w)`` as a :class:`Matrix2`."""
    g1, g2 = _offdiagonals(inst, q, w)
    one = np.ones_like(g1)
    return Matrix2(one, g2, g1, one)


def _cost_on(inst, q, w) -> np.ndarray:
    g1, g2 = _offdiagonals(inst, q, w)
    one = np.ones_like(g1)
    return sigma_max_2x2(Matrix2(one, g2, g1, one))


def _corner_points(n: int = 256, halfwidth: float = 1e-3) -> np.ndarray:
    # extra samples where the optimal entry meets the lens corners
    t = np.linspace(-halfwidth, halfwidth, n)
    return np.exp(1j * np.concatenate([np.pi / 2 + t, -np.pi / 2 + t]))


def _polish_peaks(inst, q, cost: np.ndarray, n: int, k: int = PEAKS) -> float:
    # bounded 1-D maximisation around the k largest local grid maxima; every
    # result is itself a sample, so the estimate stays a lower bound
    left, right = np.roll(cost, 1), np.roll(cost, -1)
    idx = np.flatnonzero((cost >= left) & (cost >= right))
    idx = idx[np.argsort(cost[idx])[::-1][:k]]
    h = 2.0 * np.pi / n
    best = -np.inf

    def neg(t):
        return -float(_cost_on(inst, q, np.array([np.exp(1j * t)]))[0])

    for i in idx:
        t0 = 2.0 * np.pi * i / n
        r = minimize_scalar(neg, bounds=(t0 - h, t0 + h), method="bounded",
                            options={"xatol": 1e-12})
        best = max(best, -r.fun)
    return best


def hinf_norm(inst: ProblemInstance, q: DiagonalController, tol: float = 1e-6,
              start: int = START_GRID, cap: int = MAX_GRID) -> NormEstimate:
    """Estimate ``sup_T sigma_max(L0 + L1 Q)`` on doubling uniform grids.

    Grids are nested, so the estimate never decreases.  At every level the
    few largest grid peaks are also polished by bounded 1-D maximisation;
    without that a doubling which happens to miss a peak reports a spurious
    zero change.  Refinement stops when two successive estimates differ by
    less than ``tol`` or the grid reaches ``cap`` points.  Sampled controllers are refined by subsampling their
    own table instead.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if q.kind == "sampled":
        n = len(q.s1)
        cost = _cost_on(inst, q, circle_grid(n))
        coarse = float(np.max(cost[::2]))
        value = float(np.max(cost))
        delta = value - coarse
        return NormEstimate(value, n, delta < tol, delta)

    extra = -np.inf
    if q.kind == "optimal":
        extra = float(np.max(_cost_on(inst, q, _corner_points())))
    n = start
    cost = _cost_on(inst, q, circle_grid(n))
    prev = float(max(np.max(cost), extra, _polish_peaks(inst, q, cost, n)))
    delta = math.inf
    while n < cap:
        n *= 2
        # odd-indexed points are the new ones; even ones were already sampled
        new = np.exp(2j * np.pi * (np.arange(n // 2) * 2 + 1) / n)
        merged = np.empty(n)
        merged[::2] = cost
        merged[1::2] = _cost_on(inst, q, new)
        cost = merged
        value = float(max(prev, np.max(cost), _polish_peaks(inst, q, cost, n)))
        delta = value - prev
        prev = value
        if delta < tol:
            return NormEstimate(value, n, True, delta)
    return NormEstimate(prev, n, delta < tol, delta)


def symmetric_norm(g_samples) -> float:
    """``max |1 - g|, |1 + g|`` over samples: the cost of ``[[1, g], [g, 1]]``."""
    g = g_samples.values if isinstance(g_samples, BoundarySamples) else np.asarray(g_samples, dtype=complex)
    if g.size == 0:
        raise ValueError("empty sample table")
    return float(np.max(np.maximum(np.abs(1.0 - g), np.abs(1.0 + g))))


def uniqueness_gap_check(g1: DiscSamples, g2: DiscSamples, tol: float = 0.0) -> bool:
    """Check ``|D(w)|**2 <= 1 - |w|**2 + tol`` with ``D = (g1 - g2)/2``.

    Any pair achieving cost sqrt(2) on the example instance must satisfy this
    at every interior point.
    """
    if g1.radii != g2.radii or g1.count != g2.count:
        raise ValueError("sample tables are on different grids")
    d = 0.5 * (g1.values - g2.values)
    bound = 1.0 - np.abs(g1.points) ** 2
    return bool(np.all(np.abs(d) ** 2 <= bound + tol))
