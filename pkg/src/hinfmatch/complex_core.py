"""Foundation arithmetic: principal powers, real polynomials, rational
functions, truncated power series and 2x2 singular values.

Polynomials store coefficients in *ascending* order, ``coeffs[k]``
multiplies ``w**k``.  All value types are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .exceptions import OrderMismatchError, PoleError, SeriesDomainError

__all__ = [
    "principal_power",
    "RealPolynomial",
    "RationalFunction",
    "TruncatedSeries",
    "Matrix2",
    "sigma_max_2x2",
    "series_multiply",
    "series_compose",
    "series_reciprocal",
    "series_power",
    "rational_eval",
    "polynomial_roots",
]

POLE_TOL = 1e-14
REDUCE_TOL = 1e-10


def principal_power(w, beta: float):
    """Return ``w**beta`` on the principal branch, ``arg w`` in (-pi, pi].

    ``numpy.angle`` returns ``-pi`` for a negative real with a negative
    zero imaginary part; exactly real negatives are folded onto ``+pi`` so
    the cut belongs to the upper side.  A tiny nonzero negative imaginary
    part keeps its angle, which preserves conjugate symmetry off the cut.  ``0**beta`` is ``0``.
    Works elementwise on arrays.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    w_arr = np.asarray(w, dtype=complex)
    r = np.abs(w_arr)
    theta = np.angle(w_arr)
    theta = np.where((w_arr.imag == 0) & (w_arr.real < 0), np.pi, theta)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(r == 0, 0.0, r**beta * np.exp(1j * beta * theta))
    if np.ndim(w) == 0:
        return complex(out)
    return out


# ---------------------------------------------------------------------------
# Polynomials and rational functions
# ---------------------------------------------------------------------------


def _horner(coeffs: Sequence, w):
    acc = np.zeros_like(np.asarray(w, dtype=complex)) if np.ndim(w) else 0j
    for c in reversed(coeffs):
        acc = acc * w + c
    return acc


def _taylor_shift(coeffs: Sequence, center: complex) -> list[complex]:
    """Coefficients of ``P(center + h)`` in powers of ``h``."""
    work = [complex(c) for c in reversed(coeffs)]  # descending
    n = len(work)
    out = []
    for k in range(n):
        # synthetic division by (x - center); remainder is the next coefficient
        for i in range(1, n - k):
            work[i] += work[i - 1] * center
        out.append(work[n - k - 1])
    return out


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial with real coefficients in ascending powers."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Iterable[float] = (0.0,)):
        cs = [float(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            cs = [0.0]
        if not all(math.isfinite(c) for c in cs):
            raise ValueError("polynomial coefficients must be finite")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_roots(cls, roots: Iterable[complex], lead: float = 1.0, tol: float = 1e-8) -> "RealPolynomial":
        """Build ``lead * prod(w - r)`` from a conjugation-closed root list."""
        c = np.array([1.0 + 0j])
        for r in roots:
            c = np.convolve(c, [-r, 1.0])
        if np.max(np.abs(c.imag), initial=0.0) > tol * max(1.0, np.max(np.abs(c))):
            raise ValueError("roots are not closed under conjugation")
        return cls(lead * c.real)

    @property
    def degree(self) -> int:
        return -1 if self.is_zero() else len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    @property
    def valuation(self) -> int:
        """Number of vanishing low-order coefficients (order of the zero at 0)."""
        for k, c in enumerate(self.coeffs):
            if c != 0.0:
                return k
        return len(self.coeffs)

    def __call__(self, w):
        return _horner(self.coeffs, w)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.pad(self.coeffs, (0, n - len(self.coeffs)))
        b = np.pad(other.coeffs, (0, n - len(other.coeffs)))
        return RealPolynomial(a + b)

    __radd__ = __add__

    def __neg__(self):
        return RealPolynomial(-np.asarray(self.coeffs))

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return RealPolynomial(np.asarray(self.coeffs) * other)
        other = _as_poly(other)
        return RealPolynomial(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __divmod__(self, other: "RealPolynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        num = list(self.coeffs)
        den = list(other.coeffs)
        if len(num) < len(den):
            return RealPolynomial([0.0]), self
        quot = [0.0] * (len(num) - len(den) + 1)
        for k in range(len(quot) - 1, -1, -1):
            q = num[k + len(den) - 1] / den[-1]
            quot[k] = q
            for i, d in enumerate(den):
                num[k + i] -= q * d
        rem = num[: len(den) - 1] or [0.0]
        return RealPolynomial(quot), RealPolynomial(rem)

    def derivative(self) -> "RealPolynomial":
        if len(self.coeffs) == 1:
            return RealPolynomial([0.0])
        return RealPolynomial([k * c for k, c in enumerate(self.coeffs)][1:])

    def roots(self) -> np.ndarray:
        return polynomial_roots(self)

    def jet(self, center: complex, order: int) -> "TruncatedSeries":
        """Taylor jet of the polynomial at ``center`` through ``order``."""
        shifted = _taylor_shift(self.coeffs, complex(center))
        shifted = (shifted + [0j] * (order + 1))[: order + 1]
        return TruncatedSeries(shifted)

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))


def _as_poly(x) -> RealPolynomial:
    if isinstance(x, RealPolynomial):
        return x
    if isinstance(x, (int, float)):
        return RealPolynomial([x])
    raise TypeError(f"cannot interpret {type(x).__name__} as a polynomial")


def polynomial_roots(p: RealPolynomial) -> np.ndarray:
    """All complex roots of ``p`` with multiplicity.

    Roots at the origin are read off exactly from vanishing low-order
    coefficients; the rest are eigenvalues of the companion matrix,
    each polished by one Newton step when that lowers the residual.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no finite root set")
    if p.degree < 1:
        raise ValueError("polynomial_roots needs degree >= 1")
    v = p.valuation
    rest = np.asarray(p.coeffs[v:], dtype=float)
    n = len(rest) - 1
    roots = [0j] * v
    if n > 0:
        monic = rest / rest[-1]
        comp = np.zeros((n, n))
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -monic[:-1]
        eig = np.linalg.eigvals(comp)
        dp = p.derivative()
        for r in eig:
            r = complex(r)
            f = p(r)
            d = dp(r)
            if d != 0:
                cand = r - f / d
                if abs(p(cand)) < abs(f):
                    r = cand
            roots.append(r)
    return np.array(roots, dtype=complex)


def _symmetrize_roots(roots: Iterable[complex], tol: float) -> list[complex]:
    """Snap near-real roots to the real axis and pair the rest exactly."""
    out = []
    upper = []
    for r in roots:
        if abs(r.imag) <= tol * max(1.0, abs(r)):
            out.append(complex(r.real, 0.0))
        elif r.imag > 0:
            upper.append(r)
    for r in upper:
        out.extend([r, r.conjugate()])
    return out


@dataclass(frozen=True)
class RationalFunction:
    """``num / den`` with real coefficients, stored with common roots cancelled."""

    num: RealPolynomial
    den: RealPolynomial

    def __init__(self, num, den=None, reduce: bool = True):
        num = num if isinstance(num, RealPolynomial) else RealPolynomial(num)
        if den is None:
            den = RealPolynomial([1.0])
        den = den if isinstance(den, RealPolynomial) else RealPolynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if reduce:
            num, den = _cancel_common(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def constant(cls, c: float) -> "RationalFunction":
        return cls([c])

    def __call__(self, w):
        return rational_eval(self, w)

    def poles(self) -> np.ndarray:
        if self.den.degree < 1:
            return np.array([], dtype=complex)
        return polynomial_roots(self.den)

    def is_stable(self, margin: float = 1e-10) -> bool:
        """No poles in the closed unit disc (all poles have modulus > 1 + margin)."""
        return bool(np.all(np.abs(self.poles()) > 1.0 + margin))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def jet(self, center: complex, order: int) -> "TruncatedSeries":
        return self.num.jet(center, order) * series_reciprocal(self.den.jet(center, order))

    def to_dict(self) -> dict:
        return {"num": list(self.num.coeffs), "den": list(self.den.coeffs)}

    @classmethod
    def from_dict(cls, d) -> "RationalFunction":
        return cls(d["num"], d.get("den", [1.0]))


def _cancel_common(num: RealPolynomial, den: RealPolynomial):
    if num.is_zero():
        return num, RealPolynomial([1.0])
    if num.degree < 1 or den.degree < 1:
        return num, den
    rn = list(polynomial_roots(num))
    common = []
    for r in polynomial_roots(den):
        for i, s in enumerate(rn):
            if abs(r - s) <= REDUCE_TOL * max(1.0, abs(r)):
                common.append(r)
                rn.pop(i)
                break
    if not common:
        return num, den
    try:
        factor = RealPolynomial.from_roots(_symmetrize_roots(common, REDUCE_TOL))
    except ValueError:
        return num, den
    qn, _ = divmod(num, factor)
    qd, _ = divmod(den, factor)
    return qn, qd


def rational_eval(f: RationalFunction, w):
    """Evaluate ``f`` at ``w`` (scalar or array) by Horner's rule.

    Raises :class:`PoleError` when ``|den(w)|`` falls below 1e-14.
    """
    d = f.den(w)
    if np.any(np.abs(d) < POLE_TOL):
        raise PoleError(f"evaluation at a pole of {f}")
    return f.num(w) / d


# ---------------------------------------------------------------------------
# Truncated power series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Complex power series ``c_0 + c_1 h + ... + c_N h**N`` with explicit order N.

    Arithmetic between series of different orders raises
    :class:`OrderMismatchError`; use :meth:`truncate` to change order.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable[complex]):
        c = np.array(list(coeffs), dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("a series needs at least one coefficient")
        c.flags.writeable = False
        self._c = c

    @classmethod
    def constant(cls, value: complex, order: int) -> "TruncatedSeries":
        return cls([value] + [0j] * order)

    @classmethod
    def variable(cls, order: int, center: complex = 0j) -> "TruncatedSeries":
        """Jet of the identity ``w = center + h``."""
        c = [0j] * (order + 1)
        c[0] = center
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self._c.size - 1

    @property
    def coeffs(self) -> np.ndarray:
        return self._c

    def __getitem__(self, k):
        return self._c[k]

    def __len__(self):
        return self._c.size

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self._c.tolist()})"

    def _check(self, other: "TruncatedSeries"):
        if other.order != self.order:
            raise OrderMismatchError(f"series orders differ: {self.order} vs {other.order}")

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return other
        return TruncatedSeries.constant(complex(other), self.order)

    def __add__(self, other):
        return TruncatedSeries(self._c + self._coerce(other)._c)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(-self._c)

    def __sub__(self, other):
        return TruncatedSeries(self._c - self._coerce(other)._c)

    def __rsub__(self, other):
        return TruncatedSeries(self._coerce(other)._c - self._c)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_multiply(self, other)
        return TruncatedSeries(self._c * complex(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_multiply(self, series_reciprocal(other))
        return TruncatedSeries(self._c / complex(other))

    def __rtruediv__(self, other):
        return series_reciprocal(self) * complex(other)

    def __call__(self, h):
        return _horner(self._c, h)

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise OrderMismatchError("cannot extend a truncated series")
        return TruncatedSeries(self._c[: order + 1])

    def shift_down(self, m: int) -> "TruncatedSeries":
        """Divide by ``h**m``, dropping the first ``m`` coefficients (order drops by m)."""
        if m > self.order:
            raise OrderMismatchError("shift larger than the series order")
        return TruncatedSeries(self._c[m:])

    def is_real_symmetric(self, tol: float = 1e-10) -> bool:
        return bool(np.all(np.abs(self._c.imag) < tol))

    def allclose(self, other: "TruncatedSeries", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self._c, other._c, rtol=0, atol=atol))


def series_multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    f._check(g)
    n = f.order + 1
    return TruncatedSeries(np.convolve(f.coeffs, g.coeffs)[:n])


def series_reciprocal(f: TruncatedSeries) -> TruncatedSeries:
    """Jet of ``1/f``; requires ``f(0) != 0``."""
    c = f.coeffs
    if c[0] == 0:
        raise SeriesDomainError("reciprocal of a series with zero constant term")
    out = np.zeros_like(c)
    out[0] = 1.0 / c[0]
    for k in range(1, c.size):
        out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
    return TruncatedSeries(out)


def series_compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Jet of ``f(g(h))`` for ``g(0) = 0``, by Horner's rule in the series ring."""
    f._check(g)
    scale = max(1.0, float(np.max(np.abs(g.coeffs))))
    if abs(g[0]) > 1e-13 * scale:
        raise SeriesDomainError("inner series must vanish at the origin")
    g = TruncatedSeries(np.concatenate([[0j], g.coeffs[1:]]))
    acc = TruncatedSeries.constant(f[f.order], f.order)
    for k in range(f.order - 1, -1, -1):
        acc = series_multiply(acc, g) + f[k]
    return acc


def series_power(f: TruncatedSeries, beta: float) -> TruncatedSeries:
    """Jet of ``f**beta`` with the principal branch at ``f(0)``.

    Uses the recurrence from ``f g' = beta f' g``; unlike composing with the
    binomial series this stays well conditioned when ``f - f(0)`` has large
    coefficients.
    """
    c = f.coeffs
    if c[0] == 0:
        raise SeriesDomainError("power of a series with zero constant term")
    g = np.zeros_like(c)
    g[0] = principal_power(complex(c[0]), beta)
    for k in range(1, c.size):
        j = np.arange(1, k + 1)
        g[k] = np.sum(((beta + 1) * j - k) * c[1 : k + 1] * g[k - 1 :: -1][:k]) / (k * c[0])
    return TruncatedSeries(g)


# ---------------------------------------------------------------------------
# 2x2 matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Matrix2:
    """2x2 complex matrix; entries may also be equally shaped arrays (batched)."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex

    @classmethod
    def from_array(cls, a) -> "Matrix2":
        a = np.asarray(a, dtype=complex)
        return cls(a[0, 0], a[0, 1], a[1, 0], a[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    def __add__(self, o):
        return Matrix2(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)

    def __sub__(self, o):
        return Matrix2(self.m11 - o.m11, self.m12 - o.m12, self.m21 - o.m21, self.m22 - o.m22)

    def __mul__(self, s):
        return Matrix2(self.m11 * s, self.m12 * s, self.m21 * s, self.m22 * s)

    __rmul__ = __mul__

    def gram(self) -> "Matrix2":
        """``M^H M``."""
        a, b, c, d = self.m11, self.m12, self.m21, self.m22
        return Matrix2(
            abs(a) ** 2 + abs(c) ** 2,
            np.conj(a) * b + np.conj(c) * d,
            np.conj(b) * a + np.conj(d) * c,
            abs(b) ** 2 + abs(d) ** 2,
        )


def sigma_max_2x2(m: Matrix2):
    """Largest singular value in closed form.

    With ``T = ||M||_F**2`` and ``D = |det M|**2`` the squared singular values
    are the roots of ``x**2 - T x + D``.  The discriminant ``T**2 - 4D`` is
    evaluated as ``(p - r)**2 + 4|q|**2`` from ``M M^H = [[p, q], [q*, r]]``,
    which avoids cancellation when the two singular values nearly coincide.
    """
    a, b, c, d = m.m11, m.m12, m.m21, m.m22
    p = abs(a) ** 2 + abs(b) ** 2
    r = abs(c) ** 2 + abs(d) ** 2
    q = a * np.conj(c) + b * np.conj(d)
    disc = (p - r) ** 2 + 4.0 * abs(q) ** 2
    return np.sqrt((p + r + np.sqrt(disc)) / 2.0)
