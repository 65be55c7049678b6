"""Rank-1 Hankel approximation under element-wise L2 (Frobenius) error.

For a fixed generator ``z`` the optimal scale has the closed form
``c = s_D(z)^H X s_W(z)^*`` and the residual decreases exactly as ``|c|``
grows, so the search reduces to maximizing ``|s_D(z)^H X s_W(z)^*|`` over
``z``.  Two complementary unit-disc scans (the matrix and its double flip)
cover generators inside and outside the disc; the flipped winner maps back
through ``z -> 1/z``.
"""

from __future__ import annotations

import numpy as np

from .exceptions import ReciprocalOfZeroError
from .grids import GridSpec
from .hankel import flip, structure_rows, structure_vector
from .results import Rank1Fit
from .validation import as_complex_matrix, check_not_all_zero

__all__ = ["objective_l2", "coefficient_l2", "approx_l2", "approx_l2_real"]


def coefficient_l2(X, z: complex) -> complex:
    """Closed-form optimal scale for generator ``z``: ``s_D^H X s_W^*``."""
    X = as_complex_matrix(X)
    D, W = X.shape
    sd = structure_vector(z, D)
    sw = structure_vector(z, W)
    return complex(np.conj(sd) @ X @ np.conj(sw))


def objective_l2(X, z: complex) -> float:
    """Bilinear-form magnitude ``|s_D(z)^H X s_W(z)^*|`` (larger is better)."""
    return abs(coefficient_l2(X, z))


def _objective_rows(X: np.ndarray, zs: np.ndarray) -> np.ndarray:
    """Vectorized ``objective_l2`` over a batch of in-disc generators."""
    D, W = X.shape
    Cd = structure_rows(np.conj(zs), D)
    Cw = structure_rows(np.conj(zs), W)
    return np.abs(np.einsum("nw,nw->n", Cd @ X, Cw))


def _scan_branch(X: np.ndarray, grid: GridSpec, skip_origin: bool) -> tuple[float, complex]:
    """Grid argmax with first-in-traversal tie-breaking."""
    best = -1.0
    best_z = 0j
    for _, zs in grid.iter_rows(skip_origin=skip_origin):
        vals = _objective_rows(X, zs)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_z = complex(zs[i])
    return best, best_z


def _golden_max(f, lo: float, hi: float, iters: int = 40) -> float:
    """Golden-section maximizer of a scalar function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _refine_polar(objective, z: complex, grid: GridSpec) -> complex:
    """One golden-section pass in radius then angle around a grid winner."""
    rho, phi = abs(z), float(np.angle(z))
    if grid.restrict_real:
        # stay on the real axis; search signed z in a one-cell bracket
        x = z.real
        lo, hi = max(-1.0, x - grid.delta_rho), min(1.0, x + grid.delta_rho)
        x = _golden_max(lambda t: objective(complex(t, 0.0)), lo, hi)
        return complex(x, 0.0)
    lo, hi = max(0.0, rho - grid.delta_rho), min(1.0, rho + grid.delta_rho)
    rho = _golden_max(lambda r: objective(r * np.exp(1j * phi)), lo, hi)
    if rho > 0.0:
        phi = _golden_max(
            lambda p: objective(rho * np.exp(1j * p)), phi - grid.delta_phi, phi + grid.delta_phi
        )
    return complex(rho * np.exp(1j * phi))


def _reciprocal(z: complex) -> complex:
    if z == 0:
        raise ReciprocalOfZeroError(
            "winning generator is the origin of the reciprocal branch; "
            "the fit would need a generator at infinity",
            z,
        )
    return 1.0 / z


def approx_l2(X, grid: GridSpec | None = None, refine: bool = False) -> Rank1Fit:
    """Best rank-1 Hankel approximation of ``X`` in the L2 sense.

    Scans the unit-disc lattice for both the input and its double flip,
    keeps the larger objective (direct wins ties), maps a flipped winner
    through the reciprocal, then assembles scale, matrix and residual.
    Deterministic for a given ``(X, grid)``.
    """
    X = as_complex_matrix(X)
    check_not_all_zero(X)
    if grid is None:
        grid = GridSpec.default_l2()

    # Corner normalization: make the top-left entry dominate so the optimum
    # stays representable (finite generator).
    pre_flipped = abs(X[0, 0]) < abs(X[-1, -1])
    Xw = flip(X, "both") if pre_flipped else X

    obj_a, z_a = _scan_branch(Xw, grid, skip_origin=False)
    obj_b, z_b = _scan_branch(flip(Xw, "both"), grid, skip_origin=True)

    if obj_a >= obj_b:
        branch, z_disc = "direct", z_a
        branch_matrix = Xw
    else:
        branch, z_disc = "flipped", z_b
        branch_matrix = flip(Xw, "both")

    if refine:
        z_disc = _refine_polar(lambda z: objective_l2(branch_matrix, z), z_disc, grid)

    odd = (branch == "flipped") != pre_flipped
    z_hat = _reciprocal(z_disc) if odd else z_disc

    c_hat = coefficient_l2(X, z_hat)
    if c_hat == 0:
        from .exceptions import DegenerateInputError

        raise DegenerateInputError(f"optimal scale vanished at z={z_hat!r}")
    D, W = X.shape
    if not X.imag.any() and z_hat.imag == 0.0:
        c_hat = complex(c_hat.real, 0.0)  # real data + real generator give a real fit
    H = c_hat * np.outer(structure_vector(z_hat, D), structure_vector(z_hat, W))
    residual = float(np.linalg.norm(X - H))
    return Rank1Fit(
        z=z_hat,
        c=c_hat,
        matrix=H,
        residual=residual,
        norm="l2",
        branch=branch,
        pre_flipped=pre_flipped,
        refined=refine,
    )


def approx_l2_real(X, grid: GridSpec | None = None, refine: bool = False) -> Rank1Fit:
    """L2 fit with the generator restricted to the real interval [-1, 1]."""
    if grid is None:
        grid = GridSpec.default_l2(restrict_real=True)
    elif not grid.restrict_real:
        raise ValueError("approx_l2_real requires grid.restrict_real=True")
    return approx_l2(X, grid, refine=refine)
