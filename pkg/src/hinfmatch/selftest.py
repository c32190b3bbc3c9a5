"""Embedded invariant suite behind ``hinfmatch selftest``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .approximation import schwarz_derivative
from .complex_core import (
    Matrix2,
    TruncatedSeries,
    principal_power,
    series_multiply,
    series_reciprocal,
    sigma_max_2x2,
)
from .conformal import LensParams, lens_contains, lens_derivative_at_zero, lens_map, lens_map_inv
from .hinf_norm import DiagonalController, ProblemInstance, hinf_norm
from .interpolation import solve_gamma

SEED = 20240601


def _random_disc(rng, n):
    return np.sqrt(rng.uniform(0, 1, n)) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def _arithmetic(rng, perturb):
    ok = abs(principal_power(-1.0, 0.5) - 1j) < 1e-15
    f = TruncatedSeries(rng.normal(size=8) + 1j * rng.normal(size=8) + 2.0)
    unit = series_multiply(f, series_reciprocal(f))
    ok &= unit.allclose(TruncatedSeries.constant(1.0, 7), atol=1e-12)
    return ok, "principal branch, series reciprocal"


def _conformal(rng, perturb):
    worst = 0.0
    ok = True
    for g in (1.1, math.sqrt(2), 2.0, 5.0):
        params = LensParams.from_gamma(g)
        w = _random_disc(rng, 1000)
        s = lens_map(params, w)
        worst = max(worst, np.max(np.abs(lens_map(params, np.conj(w)) - np.conj(s))))
        ok &= bool(np.all(lens_contains(params, s)))
        ok &= np.max(np.abs(lens_map_inv(params, s) - w)) < 1e-10
        sb = lens_map(params, np.exp(1j * rng.uniform(-np.pi, np.pi, 1000)))
        ok &= np.max(np.abs(np.maximum(np.abs(1 - sb), np.abs(1 + sb)) - g)) < 1e-10
    return ok and worst < 1e-12, f"symmetry defect {worst:.2e}"


def _symmetric_sigma(rng, perturb):
    g = rng.normal(size=1000) + 1j * rng.normal(size=1000)
    one = np.ones_like(g)
    err = np.max(np.abs(sigma_max_2x2(Matrix2(one, g, g, one)) - np.maximum(np.abs(1 - g), np.abs(1 + g))))
    return err < 1e-12, f"max error {err:.2e}"


def _parallelogram(rng, perturb):
    worst = 0.0
    for _ in range(1000):
        m1 = Matrix2.from_array(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        m2 = Matrix2.from_array(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        ma, md = (m1 + m2) * 0.5, (m1 - m2) * 0.5
        lhs = ma.gram().as_array() + md.gram().as_array()
        rhs = 0.5 * (m1.gram().as_array() + m2.gram().as_array())
        worst = max(worst, np.max(np.abs(lhs - rhs)))
    return worst < 1e-13, f"max error {worst:.2e}"


def _derivative(rng, perturb):
    params = LensParams.from_gamma(math.sqrt(2))
    formula = lens_derivative_at_zero(params)
    contour = schwarz_derivative(lambda w: lens_map(params, w), 0.5, 4096)
    err = abs(contour - formula)
    return abs(formula - 0.5) < 1e-15 and err < 1e-8, f"contour error {err:.2e}"


def _golden(rng, perturb):
    inst = ProblemInstance.sqrt2_example()
    expected = math.sqrt(2) + perturb
    res = solve_gamma(inst)
    norm = hinf_norm(inst, res.controller(), tol=1e-6).value
    zero = hinf_norm(inst, DiagonalController.zero(), tol=1e-9).value
    ok = abs(res.gamma_star - expected) < 1e-9 and abs(norm - expected) < 1e-6
    ok &= abs(res.p(0.5) - 0.5) < 1e-9 and abs(zero - 1.5) < 1e-9
    return ok, f"gamma*={res.gamma_star:.12g} optimal cost={norm:.12g}"


GROUPS: list[tuple[str, Callable]] = [
    ("arithmetic", _arithmetic),
    ("conformal", _conformal),
    ("symmetric-sigma", _symmetric_sigma),
    ("parallelogram", _parallelogram),
    ("derivative", _derivative),
    ("golden-values", _golden),
]


def run_selftest(perturb: float = 0.0) -> list[tuple[str, bool, str]]:
    """Run every group; ``perturb`` shifts the golden constant (negative control)."""
    rng = np.random.default_rng(SEED)
    out = []
    for name, fn in GROUPS:
        try:
            ok, detail = fn(rng, perturb)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
