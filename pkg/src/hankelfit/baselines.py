"""Reference direction-of-arrival estimators for benchmarking.

Five standard single-source methods: a rank-1 matrix pencil on the window
matrix, MUSIC driven by the window matrix SVD, forward-backward spatially
smoothed MUSIC, and two methods working on the per-sensor averaged vector
(peak correlation, and MUSIC on a Toeplitz covariance estimate).  Signal
order is fixed to one throughout.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .doa import ArrayConfig, ThetaGrid, z_of_theta
from .validation import as_complex_matrix, as_complex_vector

__all__ = [
    "max_energy",
    "toeplitz_music",
    "matrix_pencil",
    "hankel_music",
    "fbss_music",
]


def _steering_rows(thetas: np.ndarray, m: int, spacing_ratio: float) -> np.ndarray:
    zs = z_of_theta(thetas, spacing_ratio)
    return np.vander(zs, m, increasing=True)


def _clamp_theta(theta: float) -> float:
    return float(min(max(theta, -90.0), np.nextafter(90.0, 0.0)))


def max_energy(r_tilde, config: ArrayConfig, grid: ThetaGrid | None = None) -> float:
    """Peak of ``|a_m(theta)^H r|`` over the angle lattice."""
    r = as_complex_vector(r_tilde, "r_tilde")
    if r.size != config.m:
        raise ValueError("r_tilde length must equal the sensor count")
    grid = grid or ThetaGrid()
    thetas = grid.thetas()
    A = _steering_rows(thetas, config.m, config.spacing_ratio)
    vals = np.abs(np.conj(A) @ r)
    return float(thetas[int(np.argmax(vals))])


def toeplitz_music(
    r_tilde,
    config: ArrayConfig,
    grid: ThetaGrid | None = None,
    info: dict | None = None,
) -> float:
    """MUSIC on a Toeplitz covariance estimated from the averaged vector.

    Lag-k covariance entries average every available conjugate product at
    that lag; falls back to :func:`max_energy` if the eigendecomposition is
    unusable (flagged through ``info``).
    """
    r = as_complex_vector(r_tilde, "r_tilde")
    m = config.m
    if r.size != m:
        raise ValueError("r_tilde length must equal the sensor count")
    if m < 2:
        raise ValueError("need at least two sensors")
    grid = grid or ThetaGrid()
    lags = np.array([np.mean(r[k:] * np.conj(r[: m - k])) for k in range(m)])
    R = scipy.linalg.toeplitz(lags)
    try:
        evals, evecs = np.linalg.eigh(R)
        if not np.all(np.isfinite(evals)):
            raise np.linalg.LinAlgError("non-finite eigenvalues")
    except np.linalg.LinAlgError:
        if info is not None:
            info["fallback"] = "max_energy"
        return max_energy(r, config, grid)
    En = evecs[:, :-1]  # all but the dominant eigenvector
    thetas = grid.thetas()
    A = _steering_rows(thetas, m, config.spacing_ratio)
    proj = np.abs(np.conj(A) @ En) ** 2
    denom = proj.sum(axis=1)
    return float(thetas[int(np.argmin(denom))])


def matrix_pencil(
    X,
    config: ArrayConfig,
    pencil_param: int | None = None,
    info: dict | None = None,
) -> float:
    """Dominant generalized eigenvalue of the row-shifted pencil.

    The window matrix already carries the shift structure, so the pencil is
    (rows 2..d, rows 1..d-1); the rank-1 truncated solution is
    ``u1^H X_up v1 / sigma1``.  An eigenvalue far off the unit circle flags
    the estimate as unreliable (``info['unreliable'] = True``) but the
    phase is still mapped to an angle.  ``pencil_param`` is accepted for
    interface compatibility; the order-1 pencil on pre-structured data has
    no free window length.
    """
    X = as_complex_matrix(X)
    d = config.d
    if X.shape != (config.d, config.w):
        raise ValueError("matrix shape does not match config")
    if d < 2:
        raise ValueError("need d >= 2 for the shifted pencil")
    if pencil_param is None:
        pencil_param = d // 2
    if not 1 <= pencil_param < d:
        raise ValueError("pencil_param must lie in [1, d)")
    X_lo, X_up = X[:-1, :], X[1:, :]
    U, s, Vh = np.linalg.svd(X_lo, full_matrices=False)
    z = complex(np.conj(U[:, 0]) @ X_up @ np.conj(Vh[0, :])) / s[0]
    if info is not None and abs(np.log(abs(z))) > 1.0:
        info["unreliable"] = True
    val = -np.angle(z) / (2.0 * np.pi * config.spacing_ratio)
    theta = np.rad2deg(np.arcsin(np.clip(val, -1.0, 1.0)))
    return _clamp_theta(theta)


def hankel_music(X, config: ArrayConfig, grid: ThetaGrid | None = None) -> float:
    """MUSIC from the window-matrix SVD, order-1 signal subspace."""
    X = as_complex_matrix(X)
    if X.shape != (config.d, config.w):
        raise ValueError("matrix shape does not match config")
    if config.d < 2:
        raise ValueError("need d >= 2 for a noise subspace")
    grid = grid or ThetaGrid()
    U, _, _ = np.linalg.svd(X, full_matrices=True)
    Un = U[:, 1:]
    thetas = grid.thetas()
    S = _steering_rows(thetas, config.d, config.spacing_ratio) / np.sqrt(config.d)
    denom = (np.abs(np.conj(S) @ Un) ** 2).sum(axis=1)
    return float(thetas[int(np.argmin(denom))])


def fbss_music(
    X,
    config: ArrayConfig,
    grid: ThetaGrid | None = None,
    smoothing_len: int | None = None,
) -> float:
    """Forward-backward spatially smoothed MUSIC over the window columns.

    Every length-``smoothing_len`` sub-vector of every column contributes a
    forward outer product; the backward half is the exchange-conjugated
    mirror, which makes the smoothed covariance persymmetric by
    construction.
    """
    X = as_complex_matrix(X)
    d = config.d
    if X.shape != (config.d, config.w):
        raise ValueError("matrix shape does not match config")
    if smoothing_len is None:
        smoothing_len = max(d - 1, 2)
    if smoothing_len < 2:
        raise ValueError("smoothing_len must be >= 2")
    if smoothing_len > d:
        raise ValueError("smoothing_len cannot exceed the window length")
    grid = grid or ThetaGrid()
    L = smoothing_len
    segments = np.lib.stride_tricks.sliding_window_view(X, (L, 1)).reshape(-1, L)
    Rf = (segments[:, :, None] * np.conj(segments[:, None, :])).mean(axis=0)
    Rb = Rf[::-1, ::-1].conj()
    R = 0.5 * (Rf + Rb)
    evals, evecs = np.linalg.eigh(R)
    En = evecs[:, :-1]
    thetas = grid.thetas()
    S = _steering_rows(thetas, L, config.spacing_ratio) / np.sqrt(L)
    denom = (np.abs(np.conj(S) @ En) ** 2).sum(axis=1)
    return float(thetas[int(np.argmin(denom))])
