"""The lens region and its conformal parameterization by the unit disc.

The lens ``{s : |1 - s| < gamma, |1 + s| < gamma}`` is the image of the open
disc under ``F = U o R o V`` where

    V(w) = (1 + jw) / (1 - jw)              disc -> right half plane
    R(s) = s ** (2 alpha / pi)              half plane -> cone |arg| < alpha
    U(y) = j tan(alpha) (1 - y) / (1 + y)   cone -> lens

and ``gamma = 1 / cos(alpha)``.  ``V(-j)`` is the point at infinity, which
is carried through the chain as :data:`POINT_AT_INFINITY`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .complex_core import TruncatedSeries, principal_power, series_power
from .exceptions import LensDomainError

__all__ = [
    "POINT_AT_INFINITY",
    "LensParams",
    "mobius_V",
    "mobius_V_inv",
    "power_R",
    "mobius_U",
    "lens_map",
    "lens_map_inv",
    "lens_contains",
    "lens_derivative_at_zero",
    "lens_map_series",
    "lens_map_inv_series",
]

POINT_AT_INFINITY = complex(math.inf, 0.0)
BOUNDARY_TOL = 1e-12
CORNER_TOL = 1e-15
INVERSE_LENS_TOL = 1e-10


@dataclass(frozen=True)
class LensParams:
    """Lens half-angle ``alpha`` in (0, pi/2) and ``gamma = 1/cos(alpha)``."""

    gamma: float
    alpha: float

    def __post_init__(self):
        if not (1.0 < self.gamma < math.inf):
            raise ValueError(f"gamma must lie in (1, inf), got {self.gamma}")
        if not (0.0 < self.alpha < math.pi / 2):
            raise ValueError(f"alpha must lie in (0, pi/2), got {self.alpha}")
        if abs(math.cos(self.alpha) * self.gamma - 1.0) > 1e-12:
            raise ValueError("gamma and alpha are inconsistent")

    @classmethod
    def from_gamma(cls, gamma: float) -> "LensParams":
        gamma = float(gamma)
        if not gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {gamma}")
        return cls(gamma, math.acos(1.0 / gamma))

    @classmethod
    def from_alpha(cls, alpha: float) -> "LensParams":
        alpha = float(alpha)
        return cls(1.0 / math.cos(alpha), alpha)

    @property
    def tan_alpha(self) -> float:
        return math.tan(self.alpha)

    @property
    def exponent(self) -> float:
        """Exponent ``2 alpha / pi`` of the power map."""
        return 2.0 * self.alpha / math.pi


def _is_inf(z):
    return np.isinf(np.real(z)) | np.isinf(np.imag(z))


def _finish(out, like):
    return complex(out) if np.ndim(like) == 0 else out


def mobius_V(w):
    """``(1 + jw)/(1 - jw)``; the pole ``w = -j`` maps to the infinity sentinel."""
    w_arr = np.asarray(w, dtype=complex)
    den = 1.0 - 1j * w_arr
    pole = np.abs(den) < CORNER_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(pole, POINT_AT_INFINITY, (1.0 + 1j * w_arr) / np.where(pole, 1.0, den))
    return _finish(out, w)


def mobius_V_inv(z):
    """Inverse of :func:`mobius_V`: ``w = -j (z - 1)/(z + 1)``."""
    z_arr = np.asarray(z, dtype=complex)
    inf = _is_inf(z_arr)
    zf = np.where(inf, 0.0, z_arr)
    if np.any((np.abs(zf + 1.0) < CORNER_TOL) & ~inf):
        raise LensDomainError("z = -1 has no preimage under V")
    out = np.where(inf, -1j, -1j * (zf - 1.0) / (zf + 1.0))
    return _finish(out, z)


def power_R(params: LensParams, s):
    """``s ** (2 alpha/pi)`` on the principal branch; infinity maps to infinity."""
    s_arr = np.asarray(s, dtype=complex)
    inf = _is_inf(s_arr)
    sf = np.where(inf, 1.0, s_arr)
    if np.any(sf.real < -BOUNDARY_TOL * np.maximum(1.0, np.abs(sf))):
        raise LensDomainError("power_R is defined on the closed right half plane")
    out = np.where(inf, POINT_AT_INFINITY, principal_power(sf, params.exponent))
    return _finish(out, s)


def mobius_U(params: LensParams, y):
    """``j tan(alpha) (1 - y)/(1 + y)``; infinity maps to the lower corner."""
    y_arr = np.asarray(y, dtype=complex)
    inf = _is_inf(y_arr)
    yf = np.where(inf, 0.0, y_arr)
    if np.any((np.abs(yf + 1.0) < CORNER_TOL) & ~inf):
        raise LensDomainError("y = -1 maps to infinity, outside the lens closure")
    t = params.tan_alpha
    out = np.where(inf, -1j * t, 1j * t * (1.0 - yf) / (1.0 + yf))
    return _finish(out, y)


def lens_map(params: LensParams, w):
    """The conformal map of the closed unit disc onto the closed lens.

    ``w = -j`` goes to the lower corner ``-j tan(alpha)`` through the infinity
    sentinel; ``w = j`` reaches the upper corner through ``V(j) = 0``.
    """
    w_arr = np.asarray(w, dtype=complex)
    if np.any(np.abs(w_arr) > 1.0 + BOUNDARY_TOL):
        raise LensDomainError("lens_map is defined on the closed unit disc")
    v = np.asarray(mobius_V(w_arr))
    # Re V = (1 - |w|^2)/|1 - jw|^2 >= 0 on the closed disc; a negative value
    # is rounding at a boundary point, amplified near the corner w = -j
    v = np.where(~_is_inf(v) & (v.real < 0), 1j * v.imag, v)
    out = mobius_U(params, power_R(params, v))
    return _finish(out, w)


def lens_contains(params: LensParams, s, tol: float = 0.0):
    """Whether ``|1 - s| < gamma + tol`` and ``|1 + s| < gamma + tol``."""
    s_arr = np.asarray(s, dtype=complex)
    g = params.gamma + tol
    out = (np.abs(1.0 - s_arr) < g) & (np.abs(1.0 + s_arr) < g)
    return bool(out) if np.ndim(s) == 0 else out


def lens_map_inv(params: LensParams, s):
    """Inverse of :func:`lens_map` by the explicit chain ``V^-1 o R^-1 o U^-1``."""
    s_arr = np.asarray(s, dtype=complex)
    if not np.all(lens_contains(params, s_arr, tol=INVERSE_LENS_TOL)):
        raise LensDomainError("point outside the closed lens")
    jt = 1j * params.tan_alpha
    den = jt + s_arr
    corner = np.abs(den) < CORNER_TOL
    with np.errstate(divide="ignore", invalid="ignore"):
        y = np.where(corner, POINT_AT_INFINITY, (jt - s_arr) / np.where(corner, 1.0, den))
    yf = np.where(corner, 1.0, y)
    z = np.where(corner, POINT_AT_INFINITY, principal_power(yf, 1.0 / params.exponent))
    out = mobius_V_inv(z)
    return _finish(out, s)


def lens_derivative_at_zero(params: LensParams) -> float:
    """Derivative of the lens map at the origin, ``2 alpha tan(alpha) / pi``."""
    return 2.0 * params.alpha * params.tan_alpha / math.pi


def lens_map_series(params: LensParams, f: TruncatedSeries) -> TruncatedSeries:
    """Jet of ``lens_map o f``; ``f(0)`` must lie in the open disc."""
    if abs(f[0]) >= 1.0:
        raise LensDomainError("series centre must lie in the open disc")
    v = (1.0 + 1j * f) / (1.0 - 1j * f)
    y = series_power(v, params.exponent)
    return 1j * params.tan_alpha * (1.0 - y) / (1.0 + y)


def lens_map_inv_series(params: LensParams, g: TruncatedSeries) -> TruncatedSeries:
    """Jet of ``lens_map_inv o g``; ``g(0)`` must lie in the open lens."""
    if not lens_contains(params, complex(g[0])):
        raise LensDomainError("series centre must lie in the open lens")
    jt = 1j * params.tan_alpha
    y = (jt - g) / (jt + g)
    z = series_power(y, 1.0 / params.exponent)
    return -1j * (z - 1.0) / (z + 1.0)
