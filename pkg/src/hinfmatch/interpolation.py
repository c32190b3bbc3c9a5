"""Optimal cost and optimal controller via lens-map interpolation.

A matched entry ``G = a + b S`` has cost at most ``gamma`` exactly when ``G``
maps the disc into the lens, i.e. when ``p = lens_map_inv o G`` is a Schur
function.  The membership ``G in a + b H^inf`` only fixes ``G`` at the disc
zeros of ``b``, so feasibility at a given ``gamma`` is a classical
interpolation question:

* all zeros of ``b`` at the origin (order n): the first n Taylor
  coefficients of ``p`` are fixed (Caratheodory-Fejer; Toeplitz test);
* simple zeros ``z_i``: the values ``p(z_i)`` are fixed (Nevanlinna-Pick).

The optimal cost is the smallest feasible ``gamma``, found by bisection.
At that level the interpolant ``p`` is a unique finite Blaschke product and
``S* = (lens_map(p) - a) / b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complex_core import RationalFunction, TruncatedSeries, polynomial_roots
from .conformal import (
    LensParams,
    lens_contains,
    lens_map,
    lens_map_inv,
    lens_map_inv_series,
    lens_map_series,
)
from .exceptions import (
    DegenerateInstanceError,
    LensDomainError,
    NotAtBoundaryError,
    UnsupportedStructureError,
)
from .hinf_norm import DiagonalController, ProblemInstance, hinf_norm

__all__ = [
    "InterpolationData",
    "BisectionCertificate",
    "SolveResult",
    "OptimalController",
    "reduce_instance",
    "check_nondegenerate",
    "feasibility_margin",
    "cf_feasible",
    "pick_feasible",
    "feasibility_threshold",
    "solve_gamma",
    "recover_p",
    "construct_optimal_S",
]

FEASIBILITY_SLACK = 1e-12
ROOT_SEPARATION = 1e-6
BOUNDARY_MARGIN_TOL = 1e-6
GAMMA_FLOOR = 1.0 + 1e-12
LOCAL_RADIUS = 0.05
LOCAL_ORDER = 8
MISMATCH_TOL = 1e-8


@dataclass(frozen=True)
class InterpolationData:
    """Either a Taylor jet at the origin or a conjugation-closed list of nodes."""

    kind: str
    jet: tuple = ()
    nodes: tuple = ()

    def __post_init__(self):
        if self.kind == "jet":
            if len(self.jet) < 1:
                raise ValueError("jet data needs at least one coefficient")
        elif self.kind == "nodes":
            if not self.nodes:
                raise ValueError("node data needs at least one node")
            zs = np.array([z for z, _ in self.nodes], dtype=complex)
            targets = np.array([t for _, t in self.nodes], dtype=complex)
            if np.any(np.abs(zs) >= 1.0):
                raise ValueError("interpolation nodes must lie in the open disc")
            if zs.size > 1:
                gaps = np.abs(zs[:, None] - zs[None, :]) + np.eye(zs.size)
                if np.min(gaps) <= ROOT_SEPARATION:
                    raise ValueError("interpolation nodes must be distinct")
            for z, t in zip(zs, targets):
                k = np.argmin(np.abs(zs - np.conj(z)))
                if abs(zs[k] - np.conj(z)) > 1e-12 or abs(targets[k] - np.conj(t)) > 1e-10:
                    raise ValueError("node data must be closed under conjugation")
        else:
            raise ValueError(f"unknown interpolation kind {self.kind!r}")

    @classmethod
    def from_jet(cls, coeffs) -> "InterpolationData":
        return cls("jet", jet=tuple(complex(c) for c in coeffs))

    @classmethod
    def from_nodes(cls, nodes) -> "InterpolationData":
        return cls("nodes", nodes=tuple((complex(z), complex(t)) for z, t in nodes))

    @property
    def size(self) -> int:
        return len(self.jet) if self.kind == "jet" else len(self.nodes)

    @property
    def node_points(self) -> np.ndarray:
        return np.array([z for z, _ in self.nodes], dtype=complex)

    @property
    def node_targets(self) -> np.ndarray:
        return np.array([t for _, t in self.nodes], dtype=complex)


def reduce_instance(inst: ProblemInstance) -> InterpolationData:
    """Interpolation constraints that characterize ``a + b H^inf``.

    Raises :class:`UnsupportedStructureError` for mixed or repeated
    off-origin disc zeros of ``b`` and :class:`DegenerateInstanceError` when
    ``b`` has no disc zeros at all.
    """
    bn = inst.b.num
    v = bn.valuation
    rest = type(bn)(bn.coeffs[v:])
    others = polynomial_roots(rest) if rest.degree >= 1 else np.array([], dtype=complex)
    inside = [r for r in others if abs(r) < 1.0]
    if v > 0 and inside:
        raise UnsupportedStructureError(
            "b mixes zeros at the origin with other zeros in the disc")
    if v > 0:
        coeffs = inst.a.jet(0.0, v - 1).coeffs.real
        return InterpolationData.from_jet(coeffs)
    if not inside:
        raise DegenerateInstanceError("b has no zeros in the unit disc; every a + b S is reachable")
    zs = np.array(inside)
    if zs.size > 1:
        gaps = np.abs(zs[:, None] - zs[None, :]) + np.eye(zs.size)
        if np.min(gaps) <= ROOT_SEPARATION:
            raise UnsupportedStructureError("b has repeated zeros in the disc away from the origin")
    nodes = []
    for z in zs:
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
            x = complex(z.real, 0.0)
            nodes.append((x, complex(inst.a(x).real, 0.0)))
        elif z.imag > 0:
            t = complex(inst.a(z))
            nodes.extend([(z, t), (z.conjugate(), t.conjugate())])
    return InterpolationData.from_nodes(nodes)


def check_nondegenerate(data: InterpolationData, tol: float = 1e-12) -> None:
    """Raise if some constant matched entry satisfies the constraints."""
    if data.kind == "jet":
        if data.size < 2 or max(abs(c) for c in data.jet[1:]) <= tol:
            raise DegenerateInstanceError("degenerate: constant-achievable (jet has no non-constant part)")
    else:
        t = data.node_targets
        if t.size < 2 or np.max(np.abs(t - t[0])) <= tol:
            raise DegenerateInstanceError("degenerate: constant-achievable (all node targets coincide)")


def _p_jet(params: LensParams, data: InterpolationData) -> TruncatedSeries:
    return lens_map_inv_series(params, TruncatedSeries(data.jet))


def _lower_toeplitz(c) -> np.ndarray:
    n = len(c)
    t = np.zeros((n, n), dtype=complex)
    for k in range(n):
        t[np.arange(k, n), np.arange(0, n - k)] = c[k]
    return t


def _pick_matrix(z: np.ndarray, p: np.ndarray) -> np.ndarray:
    return (1.0 - p[:, None] * np.conj(p[None, :])) / (1.0 - z[:, None] * np.conj(z[None, :]))


def feasibility_margin(params: LensParams, data: InterpolationData) -> float:
    """Signed distance from infeasibility at level ``params.gamma``.

    ``1 - sigma_max(Toeplitz)`` for jets, smallest Pick eigenvalue for nodes;
    ``-inf`` when a target value already lies outside the open lens.
    Feasible iff the margin is (numerically) non-negative.
    """
    if data.kind == "jet":
        if not lens_contains(params, data.jet[0]):
            return -math.inf
        p = _p_jet(params, data)
        return 1.0 - float(np.linalg.norm(_lower_toeplitz(p.coeffs), 2))
    t = data.node_targets
    if not np.all(lens_contains(params, t)):
        return -math.inf
    pk = _pick_matrix(data.node_points, lens_map_inv(params, t))
    return float(np.min(np.linalg.eigvalsh(0.5 * (pk + pk.conj().T))))


def cf_feasible(params: LensParams, data: InterpolationData) -> bool:
    """Caratheodory-Fejer test: is the lens-pulled jet a Schur-class jet?"""
    if data.kind != "jet":
        raise ValueError("cf_feasible needs jet data")
    if not lens_contains(params, data.jet[0]):
        raise LensDomainError("jet constant term lies outside the lens")
    return feasibility_margin(params, data) >= -FEASIBILITY_SLACK


def pick_feasible(params: LensParams, data: InterpolationData) -> bool:
    """Nevanlinna-Pick test on the lens-pulled node values."""
    if data.kind != "nodes":
        raise ValueError("pick_feasible needs node data")
    return feasibility_margin(params, data) >= -FEASIBILITY_SLACK


@dataclass(frozen=True)
class BisectionCertificate:
    """Final bracket: feasible at ``upper``, infeasible at ``lower``."""

    lower: float
    upper: float
    margin_lower: float
    margin_upper: float
    history: tuple = field(default=(), repr=False)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _feasible(gamma: float, data: InterpolationData) -> tuple[bool, float]:
    m = feasibility_margin(LensParams.from_gamma(gamma), data)
    return m >= -FEASIBILITY_SLACK, m


def feasibility_threshold(data: InterpolationData, tol: float = 1e-10,
                          upper: Optional[float] = None) -> BisectionCertificate:
    """Smallest ``gamma`` at which the interpolation problem is solvable.

    Bisection over ``(1, upper]``.  When the problem is already feasible at
    ``gamma = 1 + 1e-12`` the bracket collapses onto that floor.
    """
    ok, m_lo = _feasible(GAMMA_FLOOR, data)
    if ok:
        return BisectionCertificate(1.0, GAMMA_FLOOR, math.nan, m_lo)
    hi = 2.0 if upper is None else float(upper)
    ok, m_hi = _feasible(hi, data)
    for _ in range(64):
        if ok:
            break
        hi *= 2.0
        ok, m_hi = _feasible(hi, data)
    else:
        raise RuntimeError("no feasible gamma found")
    lo = GAMMA_FLOOR
    history = [(lo, hi)]
    while hi - lo >= tol:
        mid = 0.5 * (lo + hi)
        ok, m = _feasible(mid, data)
        if ok:
            hi, m_hi = mid, m
        else:
            lo, m_lo = mid, m
        history.append((lo, hi))
    return BisectionCertificate(lo, hi, m_lo, m_hi, tuple(history))


def recover_p(params: LensParams, data: InterpolationData) -> RationalFunction:
    """The inner interpolant at the optimal level (jet order <= 2, <= 2 nodes).

    Jets: the extremal two-term Schur jet ``(p0, p1)`` with
    ``|p1| = 1 - |p0|**2`` extends uniquely to the Blaschke factor
    ``(p0 + e w)/(1 + p0 e w)``, ``|e| = 1``.  Nodes: one Schur step at
    ``z1`` leaves a unimodular constant at ``z2``.
    """
    margin = feasibility_margin(params, data)
    if not abs(margin) <= BOUNDARY_MARGIN_TOL:
        raise NotAtBoundaryError(f"feasibility margin {margin:.3g} is not at the boundary")
    if data.kind == "jet":
        if data.size == 1:
            raise DegenerateInstanceError("a single jet coefficient forces a constant p")
        if data.size > 2:
            raise UnsupportedStructureError("inner-function recovery is implemented for jet order <= 2")
        pj = _p_jet(params, data)
        p0, p1 = float(pj[0].real), float(pj[1].real)
        e = p1 / (1.0 - p0 * p0)
        e = math.copysign(1.0, e)
        return RationalFunction([p0, e], [1.0, p0 * e])
    if data.size == 1:
        raise DegenerateInstanceError("a single node forces a constant p")
    if data.size > 2:
        raise UnsupportedStructureError("inner-function recovery is implemented for <= 2 nodes")
    (z1, z2), (t1, t2) = data.node_points, data.node_targets
    p1, p2 = lens_map_inv(params, np.array([t1, t2]))
    b12 = (z2 - z1) / (1.0 - np.conj(z1) * z2)
    ratio = (p2 - p1) / (1.0 - np.conj(p1) * p2) / b12
    e = ratio / abs(ratio)
    num = np.array([p1 - e * z1, e - p1 * np.conj(z1)])
    den = np.array([1.0 - np.conj(p1) * e * z1, np.conj(p1) * e - np.conj(z1)])
    num, den = num / den[0], den / den[0]
    imag = max(np.max(np.abs(num.imag)), np.max(np.abs(den.imag)))
    if imag > 1e-6:
        raise NotAtBoundaryError("recovered Blaschke factor is not real symmetric")
    return RationalFunction(num.real, den.real)


class OptimalController:
    """Evaluator of ``S* = (lens_map(p) - a) / b``.

    Near each disc zero of ``b`` (within ``LOCAL_RADIUS``) the quotient is
    taken between local Taylor jets of order ``LOCAL_ORDER`` so the removable
    singularity is evaluated without cancellation.
    """

    def __init__(self, params: LensParams, p: RationalFunction, inst: ProblemInstance):
        self.params = params
        self.p = p
        self.inst = inst
        self._local = []
        bn = inst.b.num
        v = bn.valuation
        zeros = [(0j, v)] if v else []
        if v == 0:
            zeros = [(complex(z), 1) for z in polynomial_roots(bn) if abs(z) < 1.0]
        for z0, m in zeros:
            num = lens_map_series(params, p.jet(z0, LOCAL_ORDER)) - inst.a.jet(z0, LOCAL_ORDER)
            lead = np.max(np.abs(num.coeffs[:m]))
            if lead > MISMATCH_TOL:
                raise ValueError(f"interpolation mismatch {lead:.3g} at zero {z0} of b")
            den = inst.b.jet(z0, LOCAL_ORDER)
            self._local.append((z0, num.shift_down(m) / den.shift_down(m)))

    @property
    def gamma(self) -> float:
        return self.params.gamma

    def matched(self, w):
        """``G*(w) = lens_map(p(w))``, the optimal off-diagonal entry."""
        pw = np.asarray(self.p(w), dtype=complex)
        # |p| = 1 on the circle only up to rounding
        mag = np.abs(pw)
        pw = np.where(mag > 1.0, pw / np.maximum(mag, 1.0), pw)
        out = lens_map(self.params, pw)
        return complex(out) if np.ndim(w) == 0 else out

    def __call__(self, w):
        w_arr = np.atleast_1d(np.asarray(w, dtype=complex))
        out = np.empty_like(w_arr)
        done = np.zeros(w_arr.shape, dtype=bool)
        for z0, jet in self._local:
            near = (np.abs(w_arr - z0) < LOCAL_RADIUS) & ~done
            if np.any(near):
                out[near] = jet(w_arr[near] - z0)
                done |= near
        far = ~done
        if np.any(far):
            wf = w_arr[far]
            out[far] = (self.matched(wf) - self.inst.a(wf)) / self.inst.b(wf)
        return complex(out[0]) if np.ndim(w) == 0 else out.reshape(np.shape(w))


def construct_optimal_S(gamma_star: float, p: RationalFunction, inst: ProblemInstance) -> OptimalController:
    """Build the evaluator of the optimal diagonal entry ``S*``."""
    return OptimalController(LensParams.from_gamma(gamma_star), p, inst)


@dataclass(frozen=True)
class SolveResult:
    """Optimal cost, recovered inner function and optimal controller."""

    gamma_star: float
    p: Optional[RationalFunction]
    s_star: Optional[OptimalController]
    certificate: BisectionCertificate
    data: InterpolationData

    @property
    def supported(self) -> bool:
        return self.p is not None

    @property
    def feasibility_margin(self) -> float:
        return self.certificate.margin_upper

    def controller(self) -> DiagonalController:
        if self.s_star is None:
            raise UnsupportedStructureError("no explicit optimal controller for this structure")
        return DiagonalController.optimal(self.s_star)


def solve_gamma(inst: ProblemInstance, tol: float = 1e-10) -> SolveResult:
    """Optimal structured cost for ``inst`` together with ``p`` and ``S*``.

    The bisection is started from the cost of ``Q = 0``.  For structures
    beyond jet order 2 or two nodes only the cost and its certificate are
    returned (``p`` and ``s_star`` are ``None``).
    """
    data = reduce_instance(inst)
    check_nondegenerate(data)
    upper = hinf_norm(inst, DiagonalController.zero(), tol=1e-9).value
    cert = feasibility_threshold(data, tol=tol, upper=upper * (1.0 + 1e-9) + 1e-12)
    gamma_star = cert.upper
    p = s_star = None
    if data.size <= 2:
        p = recover_p(LensParams.from_gamma(gamma_star), data)
        s_star = construct_optimal_S(gamma_star, p, inst)
    return SolveResult(gamma_star, p, s_star, cert, data)
