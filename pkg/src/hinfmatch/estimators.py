"""scikit-learn style wrappers.

``LensMap`` is a stateless transformer from the unit disc onto the lens.
``StructuredHinfSolver`` is "fit" on a problem instance and then predicts
the optimal controller entry at arbitrary points of the closed disc.
"""

from __future__ import annotations

import math

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_scalar
from sklearn.utils.validation import check_is_fitted

from ._validation import check_instance, check_points
from .approximation import gap_sequence
from .conformal import LensParams, lens_derivative_at_zero, lens_map, lens_map_inv
from .hinf_norm import DiagonalController, hinf_norm
from .interpolation import solve_gamma


class LensMap(TransformerMixin, BaseEstimator):
    """Conformal map of the unit disc onto the lens of half-width ``gamma``.

    Parameters
    ----------
    gamma : float, default=sqrt(2)
        Lens parameter, must exceed 1.

    Attributes
    ----------
    params_ : LensParams
    derivative_at_zero_ : float
    """

    def __init__(self, gamma=math.sqrt(2)):
        self.gamma = gamma

    def fit(self, X=None, y=None):
        check_scalar(self.gamma, "gamma", (int, float), min_val=1.0, include_boundaries="neither")
        self.params_ = LensParams.from_gamma(self.gamma)
        self.derivative_at_zero_ = lens_derivative_at_zero(self.params_)
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        return lens_map(self.params_, check_points(X, max_modulus=1.0))

    def inverse_transform(self, X):
        check_is_fitted(self, "params_")
        return lens_map_inv(self.params_, check_points(X))


class StructuredHinfSolver(BaseEstimator):
    """Optimal diagonal controller for ``L0 = I + aJ``, ``L1 = bJ``.

    Parameters
    ----------
    tol : float, default=1e-10
        Bisection bracket width on the cost.
    norm_tol : float, default=1e-6
        Grid-refinement tolerance used by :meth:`cost`.

    Attributes
    ----------
    gamma_star_ : float
        Optimal cost.
    p_ : RationalFunction or None
        Inner function with ``G* = lens_map o p``.
    result_ : SolveResult
    """

    def __init__(self, tol=1e-10, norm_tol=1e-6):
        self.tol = tol
        self.norm_tol = norm_tol

    def fit(self, X, y=None):
        check_scalar(self.tol, "tol", (int, float), min_val=0.0, include_boundaries="neither")
        check_scalar(self.norm_tol, "norm_tol", (int, float), min_val=0.0, include_boundaries="neither")
        self.instance_ = check_instance(X)
        self.result_ = solve_gamma(self.instance_, tol=self.tol)
        self.gamma_star_ = self.result_.gamma_star
        self.p_ = self.result_.p
        self.interpolation_data_ = self.result_.data
        return self

    def _controller(self):
        check_is_fitted(self, "result_")
        return self.result_.controller()

    def predict(self, X):
        """Optimal diagonal entry ``S*`` at points of the closed disc."""
        self._controller()
        return self.result_.s_star(check_points(X, max_modulus=1.0))

    def transform(self, X):
        """Optimal matched entry ``a + b S* = lens_map(p)`` at points of the closed disc."""
        self._controller()
        return self.result_.s_star.matched(check_points(X, max_modulus=1.0))

    def cost(self, controller=None):
        """Grid estimate of the cost of ``controller`` (default: the fitted optimum)."""
        q = self._controller() if controller is None else controller
        return hinf_norm(self.instance_, q, tol=self.norm_tol)

    def gap_sequence(self, orders=(1, 3, 5, 9, 15, 25)):
        check_is_fitted(self, "result_")
        return gap_sequence(self.instance_, self.gamma_star_, orders, p=self.p_)

    def zero_cost(self):
        check_is_fitted(self, "instance_")
        return hinf_norm(self.instance_, DiagonalController.zero(), tol=self.norm_tol)
