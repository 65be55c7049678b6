"""Rank-1 Toeplitz approximation via the row-flip reduction.

A Toeplitz matrix is a row-flipped Hankel matrix, and the row flip is an
isometry for both element-wise norms, so the Toeplitz problem for ``X`` is
exactly the Hankel problem for the row-flip of ``X``.  There is no second
search path: this module only re-labels the Hankel solution.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .grids import GridSpec
from .hankel import flip
from .l1 import WeiszfeldConfig, approx_l1
from .l2 import approx_l2
from .results import Rank1Fit
from .validation import as_complex_matrix

__all__ = ["toeplitz_approx"]


def toeplitz_approx(
    X,
    norm: str = "l2",
    grid: GridSpec | None = None,
    cfg: WeiszfeldConfig | None = None,
    refine: bool = False,
) -> Rank1Fit:
    """Best rank-1 Toeplitz approximation of ``X`` under the chosen norm.

    The returned record carries the Toeplitz matrix; generator, scale and
    residual are those of the underlying Hankel fit of the row-flipped
    input (the residual transfers exactly).
    """
    X = as_complex_matrix(X)
    Xh = flip(X, "rows")
    if norm == "l2":
        fit = approx_l2(Xh, grid, refine=refine)
    elif norm == "l1":
        fit = approx_l1(Xh, grid, cfg, refine=refine)
    else:
        raise ValueError(f"norm must be 'l2' or 'l1', got {norm!r}")
    T = np.ascontiguousarray(fit.matrix[::-1])
    return replace(fit, matrix=T, structure="toeplitz")
