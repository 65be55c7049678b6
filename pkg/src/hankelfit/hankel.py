"""Hankel structure primitives: parameter-vector embedding, exchange flips
and the normalized geometric structure vector.

A rank-1 Hankel matrix is exactly an outer product of two geometric
(structure) vectors sharing one generator ``z``; everything else in this
package builds on the helpers below.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .validation import as_complex_matrix, as_complex_vector

__all__ = [
    "hankel_from_vector",
    "is_hankel",
    "flip",
    "geometric_norm",
    "structure_vector",
    "structure_rows",
]

# |rho - 1| below this uses the limit form of the geometric-sum norm,
# avoiding the 0/0 at rho == 1.  Continuity across the switch is covered by
# the property tests.
_UNIT_RADIUS_TOL = 1e-9


def hankel_from_vector(h, rows: int) -> np.ndarray:
    """Build the ``rows x (len(h) - rows + 1)`` Hankel matrix of ``h``.

    ``h`` supplies the first column and last row; entry ``(i, j)`` is
    ``h[i + j]`` (0-based).
    """
    h = as_complex_vector(h, "h")
    if not 1 <= rows <= h.size:
        raise ValueError(f"need 1 <= rows <= len(h), got rows={rows}, len(h)={h.size}")
    return scipy.linalg.hankel(h[:rows], h[rows - 1 :])


def is_hankel(X, tol: float = 0.0) -> bool:
    """True iff every anti-diagonal of ``X`` is constant within ``tol``.

    ``tol`` bounds the max pairwise modulus distance on each anti-diagonal.
    """
    X = as_complex_matrix(X)
    if tol < 0:
        raise ValueError("tol must be non-negative")
    D, W = X.shape
    flipped = X[::-1]  # anti-diagonals of X are diagonals of the row-flip
    for k in range(-(D - 1), W):
        d = np.diagonal(flipped, offset=k)
        if d.size < 2:
            continue
        spread = np.abs(d[:, None] - d[None, :]).max()
        if spread > tol:
            return False
    return True


def flip(X, mode: str = "both") -> np.ndarray:
    """Exchange-matrix flip: ``rows`` reverses row order, ``both`` also columns."""
    X = as_complex_matrix(X)
    if mode == "rows":
        return X[::-1].copy()
    if mode == "both":
        return X[::-1, ::-1].copy()
    raise ValueError(f"mode must be 'rows' or 'both', got {mode!r}")


def geometric_norm(rho: float, n: int) -> float:
    """Euclidean norm of ``[1, rho, ..., rho**(n-1)]`` for real ``rho >= 0``.

    Uses the closed geometric-sum form away from ``rho == 1`` and the
    ``sqrt(n)`` limit inside a 1e-9 band around it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rho = float(rho)
    if abs(rho - 1.0) < _UNIT_RADIUS_TOL:
        return float(np.sqrt(n))
    r2 = rho * rho
    return float(np.sqrt((1.0 - r2**n) / (1.0 - r2)))


def structure_vector(z: complex, n: int) -> np.ndarray:
    """Unit-norm geometric vector ``[1, z, ..., z**(n-1)] / ||.||``.

    Stable for any finite ``z``: for ``|z| > 1`` the powers are formed from
    ``1/|z|`` so that neither the entries nor the norm overflow.  The first
    entry is always real and positive.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ValueError("z must be finite")
    k = np.arange(n)
    rho = abs(z)
    if rho <= 1.0:
        return np.power(z, k) / geometric_norm(rho, n)
    # |z| > 1: v_k = rho**(k-(n-1)) * phase**k / ||s_n(1/rho)||
    phase = z / rho
    mags = np.power(1.0 / rho, (n - 1) - k)
    return mags * np.power(phase, k) / geometric_norm(1.0 / rho, n)


def structure_rows(zs: np.ndarray, n: int) -> np.ndarray:
    """Stack ``structure_vector(z, n)`` as rows for a batch of in-disc ``z``.

    Vectorized companion of :func:`structure_vector`; requires ``|z| <= 1``
    (plus round-off) for every entry.
    """
    zs = np.asarray(zs, dtype=np.complex128).ravel()
    rho = np.abs(zs)
    if rho.size and rho.max() > 1.0 + 1e-9:
        raise ValueError("structure_rows requires |z| <= 1; use structure_vector")
    V = np.vander(zs, n, increasing=True)
    r2 = rho * rho
    near_one = np.abs(rho - 1.0) < _UNIT_RADIUS_TOL
    denom = np.where(near_one, 1.0, 1.0 - r2)
    ratio = np.maximum((1.0 - r2**n) / denom, 0.0)  # clamp round-off at rho ~ 1
    norms = np.where(near_one, np.sqrt(n), np.sqrt(ratio))
    return V / norms[:, None]
