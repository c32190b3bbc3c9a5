"""Contour Taylor extraction and polynomial approximants of the optimum.

The optimal matched entry ``G* = lens_map o p`` is continuous on the closed
disc but not rational.  Truncating its Taylor series and re-imposing the
interpolation constraints gives rational controllers whose costs approach
the optimal cost from above without reaching it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional

import numpy as np

from .complex_core import RationalFunction, RealPolynomial
from .conformal import LensParams, lens_map_inv, lens_map_series
from .hinf_norm import DiagonalController, ProblemInstance, circle_grid, hinf_norm
from .interpolation import InterpolationData, recover_p, reduce_instance

__all__ = [
    "TaylorExtract",
    "GapPoint",
    "taylor_coeffs",
    "normalize_to_X",
    "match_constraints",
    "polynomial_controller",
    "optimal_taylor_coeffs",
    "gap_sequence",
    "schwarz_derivative",
    "pulled_back_derivative",
]

ROUNDOFF_TARGET = 1e-8
DIVISION_TOL = 1e-10


@dataclass(frozen=True)
class TaylorExtract:
    radius: float
    count: int
    coeffs: np.ndarray
    residual_imag: float


@dataclass(frozen=True)
class GapPoint:
    order: int
    norm_value: float
    excess: float


def _contour_fft(f: Callable, radius: float, count: int) -> np.ndarray:
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if count < 64 or count & (count - 1):
        raise ValueError("count must be a power of two >= 64")
    vals = np.asarray(f(radius * circle_grid(count)), dtype=complex)
    if vals.shape != (count,) or not np.all(np.isfinite(vals)):
        raise ValueError("function evaluation failed on the sampling circle")
    return np.fft.fft(vals) / count, float(np.max(np.abs(vals)))


def taylor_coeffs(f: Callable, radius: float = 0.9, count: int = 8192,
                  n_coeffs: Optional[int] = None) -> TaylorExtract:
    """Taylor coefficients of ``f`` at 0 from samples on ``|w| = radius``.

    Coefficient ``k`` is the ``k``-th DFT bin divided by ``radius**k``.
    Without ``n_coeffs``, indices are kept only while the amplified
    round-off ``eps * max|f| / radius**k`` stays below 1e-8.
    """
    c, fmax = _contour_fft(f, radius, count)
    if n_coeffs is None:
        noise = np.finfo(float).eps * max(fmax, 1e-300)
        kmax = int(math.log(ROUNDOFF_TARGET / noise) / math.log(1.0 / radius)) + 1
        n_coeffs = max(1, min(count // 2, kmax))
    elif n_coeffs > count // 2:
        raise ValueError("n_coeffs exceeds half the sample count")
    k = np.arange(n_coeffs)
    coeffs = c[:n_coeffs] / radius**k
    return TaylorExtract(radius, count, coeffs.real.copy(), float(np.max(np.abs(coeffs.imag))))


def schwarz_derivative(p: Callable, radius: float = 0.5, count: int = 4096) -> complex:
    """Contour-integral value of ``p'(0)``."""
    c, _ = _contour_fft(p, radius, count)
    return complex(c[1] / radius)


def pulled_back_derivative(g: Callable, gamma: float, radius: float = 0.5, count: int = 4096) -> complex:
    """``p'(0)`` for ``p = lens_map_inv o g`` at level ``gamma``.

    For ``g`` with cost at most ``gamma`` the function ``p`` is a Schur
    function vanishing at 0, so the modulus is at most 1.
    """
    params = LensParams.from_gamma(gamma)
    return schwarz_derivative(lambda w: lens_map_inv(params, g(w)), radius, count)


def normalize_to_X(r: RealPolynomial) -> RealPolynomial:
    """``(r - r(0)) / (2 r'(0))``: vanishes at 0 with slope exactly 1/2."""
    c = list(r.coeffs) + [0.0, 0.0]
    if abs(c[1]) <= 1e-12:
        raise ValueError("linear coefficient vanishes; cannot normalize")
    out = [0.0] + [x / (2.0 * c[1]) for x in c[1:]]
    out[1] = 0.5
    return RealPolynomial(out)


def match_constraints(g: RealPolynomial, data: InterpolationData) -> RealPolynomial:
    """Add the low-degree polynomial that makes ``g`` satisfy ``data`` exactly.

    Jet data fixes coefficients ``0..n-1``; node data is matched by a
    correction of degree below the node count.
    """
    if data.kind == "jet":
        n = data.size
        c = list(g.coeffs) + [0.0] * max(0, n - len(g.coeffs))
        for k in range(n):
            c[k] = float(data.jet[k].real)
        return RealPolynomial(c)
    z = data.node_points
    resid = data.node_targets - g(z)
    vander = np.vander(z, increasing=True)
    corr = np.linalg.solve(vander, resid)
    return g + RealPolynomial(corr.real)


def _disc_factor(inst: ProblemInstance, data: InterpolationData) -> RealPolynomial:
    if data.kind == "jet":
        return RealPolynomial([0.0] * data.size + [1.0])
    return RealPolynomial.from_roots(data.node_points)


def polynomial_controller(g: RealPolynomial, inst: ProblemInstance,
                          data: InterpolationData) -> RationalFunction:
    """The rational ``S`` with ``a + b S = g``, by exact polynomial division.

    ``g`` must already satisfy ``data``; a division remainder above 1e-10
    signals that it does not.
    """
    a, b = inst.a, inst.b
    top = g * a.den - a.num
    inner = _disc_factor(inst, data)
    quot, rem = divmod(top, inner)
    scale = max(1.0, top.scale())
    if rem.scale() > DIVISION_TOL * scale:
        raise ArithmeticError(f"constraint not met: division remainder {rem.scale():.3g}")
    outer, orem = divmod(b.num, inner)
    if orem.scale() > DIVISION_TOL * max(1.0, b.num.scale()):
        raise ArithmeticError("disc zeros of b do not divide its numerator")
    return RationalFunction(quot * b.den, a.den * outer)


def optimal_taylor_coeffs(p: RationalFunction, gamma: float, order: int) -> np.ndarray:
    """Taylor coefficients of ``lens_map o p`` at 0 through ``order``."""
    jet = lens_map_series(LensParams.from_gamma(gamma), p.jet(0.0, order))
    return jet.coeffs.real.copy()


def gap_sequence(inst: ProblemInstance, gamma_star: float, orders: Iterable[int],
                 p: Optional[RationalFunction] = None, tol: float = 1e-10) -> list[GapPoint]:
    """Costs of constraint-matched Taylor sections of the optimal entry.

    ``p`` defaults to the inner function recovered at ``gamma_star``.
    """
    orders = [int(n) for n in orders]
    if not orders or orders != sorted(orders) or orders[0] < 0:
        raise ValueError("orders must be a non-empty ascending list of non-negative integers")
    data = reduce_instance(inst)
    if p is None:
        p = recover_p(LensParams.from_gamma(gamma_star), data)
    coeffs = optimal_taylor_coeffs(p, gamma_star, orders[-1])
    out = []
    for n in orders:
        g = match_constraints(RealPolynomial(coeffs[: n + 1]), data)
        s = polynomial_controller(g, inst, data)
        est = hinf_norm(inst, DiagonalController.rational(s), tol=tol)
        out.append(GapPoint(n, float(est.value), float(est.value - gamma_star)))
    return out
