"""Result record shared by the L2 and L1 structured fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class Rank1Fit:
    """One rank-1 structured approximation.

    z / c: generator and scale of the fitted outer product.  ``|z|`` may
    exceed 1 when the reciprocal branch wins.
    matrix: the assembled approximation, same shape as the input.
    residual: value of the fitted norm at the optimum.
    norm: "l2" or "l1".
    branch: "direct" or "flipped" (which of the two unit-disc searches won).
    pre_flipped: input was corner-normalized by a double flip before search.
    refined: local refinement was applied after the grid argmax.
    structure: "hankel" or "toeplitz".
    inner_mode / inner_failures: L1 only; how the per-point coefficient
    solver ran and how many grid points hit its iteration cap.
    """

    z: complex
    c: complex
    matrix: np.ndarray = field(repr=False)
    residual: float
    norm: str
    branch: str
    pre_flipped: bool = False
    refined: bool = False
    structure: str = "hankel"
    inner_mode: str | None = None
    inner_failures: int = 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape
