"""Scikit-learn style wrappers around the functional core.

``Rank1Hankel`` / ``Rank1Toeplitz`` behave as transformers: ``fit`` learns
a generator and scale from one matrix, ``transform`` projects a matrix of
the same shape onto the learned structure (re-estimating only the scale),
so ``fit_transform(X)`` is the structured approximation of ``X`` itself.
``SlidingWindowDoA`` is a predictor over window matrices.  All parameters
follow sklearn conventions (stored verbatim, validated in ``fit``), so the
estimators compose with pipelines, ``clone`` and ``get_params``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .doa import ArrayConfig, ThetaGrid, estimate_doa_l1, estimate_doa_l2
from .grids import GridSpec
from .hankel import flip, structure_vector
from .l1 import WeiszfeldConfig, approx_l1, weighted_median_coeff
from .l2 import approx_l2, coefficient_l2
from .validation import as_complex_matrix

__all__ = ["Rank1Hankel", "Rank1Toeplitz", "SlidingWindowDoA"]


class Rank1Hankel(TransformerMixin, BaseEstimator):
    """Rank-1 Hankel approximation as a transformer.

    Parameters
    ----------
    norm : "l2" or "l1", the element-wise error to minimize.
    delta_rho, delta_phi : grid steps; None uses the per-norm defaults.
    real_only : restrict the generator to [-1, 1].
    refine : golden-section refinement after the grid search.
    max_iters, tol : inner Weiszfeld budget (l1 only).

    Attributes (after fit)
    ----------------------
    z_, c_ : learned generator and scale.
    matrix_ : the structured approximation of the fitted matrix.
    residual_ : fitted-norm error at the optimum.
    branch_ : which unit-disc search won.
    """

    def __init__(
        self,
        norm: str = "l2",
        delta_rho: float | None = None,
        delta_phi: float | None = None,
        real_only: bool = False,
        refine: bool = False,
        max_iters: int = 100,
        tol: float = 1e-10,
    ):
        self.norm = norm
        self.delta_rho = delta_rho
        self.delta_phi = delta_phi
        self.real_only = real_only
        self.refine = refine
        self.max_iters = max_iters
        self.tol = tol

    def _grid(self) -> GridSpec:
        base = GridSpec.default_l2() if self.norm == "l2" else GridSpec.default_l1()
        return GridSpec(
            self.delta_rho if self.delta_rho is not None else base.delta_rho,
            self.delta_phi if self.delta_phi is not None else base.delta_phi,
            restrict_real=self.real_only,
        )

    def _weiszfeld(self) -> WeiszfeldConfig:
        return WeiszfeldConfig(max_iters=self.max_iters, tol=self.tol)

    def _fit_once(self, X):
        if self.norm == "l2":
            return approx_l2(X, self._grid(), refine=self.refine)
        if self.norm == "l1":
            return approx_l1(X, self._grid(), self._weiszfeld(), refine=self.refine)
        raise ValueError(f"norm must be 'l2' or 'l1', got {self.norm!r}")

    def fit(self, X, y=None):
        fit = self._fit_once(as_complex_matrix(X))
        self.fit_ = fit
        self.z_ = fit.z
        self.c_ = fit.c
        self.matrix_ = fit.matrix
        self.residual_ = fit.residual
        self.branch_ = fit.branch
        return self

    def transform(self, X):
        if not hasattr(self, "fit_"):
            raise NotFittedError("call fit before transform")
        X = as_complex_matrix(X)
        d, w = X.shape
        if self.norm == "l2":
            c = coefficient_l2(X, self.z_)
        else:
            c = weighted_median_coeff(X, self.z_, self._weiszfeld()).c
        return c * np.outer(structure_vector(self.z_, d), structure_vector(self.z_, w))


class Rank1Toeplitz(Rank1Hankel):
    """Rank-1 Toeplitz approximation; same interface as :class:`Rank1Hankel`."""

    def fit(self, X, y=None):
        X = as_complex_matrix(X)
        fit = self._fit_once(flip(X, "rows"))
        self.fit_ = fit
        self.z_ = fit.z
        self.c_ = fit.c
        self.matrix_ = np.ascontiguousarray(fit.matrix[::-1])
        self.residual_ = fit.residual
        self.branch_ = fit.branch
        return self

    def transform(self, X):
        return super().transform(flip(as_complex_matrix(X), "rows"))[::-1]


class SlidingWindowDoA(BaseEstimator):
    """Direction-of-arrival predictor over sliding-window matrices.

    Each sample is one ``d x w`` window matrix; the array size is implied
    by the matrix shape (``m = d + w - 1``).  ``predict`` accepts a single
    matrix or a stack and returns degrees.
    """

    def __init__(
        self,
        method: str = "l2",
        spacing_ratio: float = 0.5,
        theta_step: float = 0.01,
        two_stage: bool = False,
        max_iters: int = 100,
        tol: float = 1e-10,
    ):
        self.method = method
        self.spacing_ratio = spacing_ratio
        self.theta_step = theta_step
        self.two_stage = two_stage
        self.max_iters = max_iters
        self.tol = tol

    def fit(self, X=None, y=None):
        if self.method not in ("l2", "l1"):
            raise ValueError(f"method must be 'l2' or 'l1', got {self.method!r}")
        ThetaGrid(step=self.theta_step)  # validates the step
        self.is_fitted_ = True
        return self

    def _predict_one(self, X) -> float:
        X = as_complex_matrix(X)
        d, w = X.shape
        config = ArrayConfig(m=d + w - 1, d=d, spacing_ratio=self.spacing_ratio)
        grid = ThetaGrid(step=self.theta_step)
        if self.method == "l2":
            return estimate_doa_l2(X, config, grid)
        return estimate_doa_l1(
            X,
            config,
            grid,
            WeiszfeldConfig(max_iters=self.max_iters, tol=self.tol),
            two_stage=self.two_stage,
        )

    def predict(self, X):
        if not hasattr(self, "is_fitted_"):
            self.fit()
        arr = np.asarray(X, dtype=np.complex128)
        if arr.ndim == 2:
            return self._predict_one(arr)
        if arr.ndim == 3:
            return np.array([self._predict_one(sample) for sample in arr])
        raise ValueError("X must be one matrix or a stack of matrices")
