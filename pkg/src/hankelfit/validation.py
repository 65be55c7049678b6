"""Input validation helpers shared by every module.

All matrices in this package are dense 2-D ``numpy.ndarray`` of
``complex128`` in row-major (C) layout.  ``as_complex_matrix`` is the single
entry point that enforces this convention.
"""

from __future__ import annotations

import numpy as np

__all__ = ["as_complex_matrix", "as_complex_vector", "check_not_all_zero"]


def as_complex_matrix(X, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a finite 2-D complex128 array in C order."""
    A = np.ascontiguousarray(X, dtype=np.complex128)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and one column")
    if not np.all(np.isfinite(A.view(np.float64))):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def as_complex_vector(v, name: str = "v") -> np.ndarray:
    """Coerce ``v`` to a finite 1-D complex128 array."""
    a = np.ascontiguousarray(v, dtype=np.complex128).ravel()
    if a.size < 1:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def check_not_all_zero(X: np.ndarray, name: str = "X") -> None:
    if not np.any(X):
        from .exceptions import DegenerateInputError

        raise DegenerateInputError(f"{name} is identically zero")
