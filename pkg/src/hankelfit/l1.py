"""Rank-1 Hankel approximation under element-wise L1 error.

For a fixed generator ``z`` the structured fit costs

    || X - c * s_D(z) s_W(z)^T ||_1  =  sum_k | x_k - ct * z**m_k |

where ``m_k = i + j`` runs over the 0-based anti-diagonal index of each
entry and ``ct = c * alpha(z)`` folds the structure-vector normalization
into the scale.  The right-hand side is the whole working form used here:
it is finite for every ``z`` including the origin, whereas expanding the
weights as ``|z|**m * |x * z**-m - ct|`` blows up for small ``|z|`` even
though both expressions are algebraically identical.

Minimizing over ``ct`` is a weighted geometric median problem, solved by
the guarded Weiszfeld fixed-point iteration (an IRLS scheme).  The outer
search over ``z`` mirrors the L2 module: two complementary unit-disc scans,
the flipped one standing in for generators outside the disc.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ReciprocalOfZeroError
from .grids import GridSpec
from .hankel import flip, geometric_norm, structure_vector
from .results import Rank1Fit
from .validation import as_complex_matrix, check_not_all_zero

__all__ = [
    "WeiszfeldConfig",
    "L1InnerSolution",
    "alpha",
    "weighted_median_coeff",
    "objective_l1",
    "approx_l1",
    "approx_l1_real",
    "real_weighted_median",
    "weiszfeld_batch",
]


@dataclass(frozen=True)
class WeiszfeldConfig:
    """Iteration budget and guards for the inner median solver.

    anchor_epsilon=None scales the singularity guard with the data as
    1e-12 * (1 + max|x|); pass a positive value to pin it.
    """

    max_iters: int = 100
    tol: float = 1e-10
    anchor_epsilon: float | None = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.anchor_epsilon is not None and self.anchor_epsilon <= 0:
            raise ValueError("anchor_epsilon must be positive")

    def epsilon_for(self, x: np.ndarray) -> float:
        if self.anchor_epsilon is not None:
            return self.anchor_epsilon
        return 1e-12 * (1.0 + float(np.abs(x).max(initial=0.0)))


@dataclass
class L1InnerSolution:
    """Outcome of one inner median solve at a fixed generator."""

    c_tilde: complex
    c: complex
    objective: float
    iters_used: int
    converged: bool


def alpha(z: complex, D: int, W: int) -> float:
    """Normalization folding both structure-vector norms into the scale.

    Equals ``1 / (||[1, z, ..., z^(D-1)]|| * ||[1, z, ..., z^(W-1)]||)``;
    evaluated through the reciprocal radius when ``|z| > 1``.
    """
    if D < 1 or W < 1:
        raise ValueError("D and W must be >= 1")
    rho = abs(complex(z))
    if not np.isfinite(rho):
        raise ValueError("z must be finite")
    if rho <= 1.0:
        return 1.0 / (geometric_norm(rho, D) * geometric_norm(rho, W))
    inv = 1.0 / rho
    nd = rho ** (D - 1) * geometric_norm(inv, D)
    nw = rho ** (W - 1) * geometric_norm(inv, W)
    return 1.0 / (nd * nw)


def anti_diagonal_exponents(D: int, W: int) -> np.ndarray:
    """0-based anti-diagonal index per entry, flattened row-major."""
    return (np.arange(D)[:, None] + np.arange(W)[None, :]).ravel()


def weiszfeld_batch(
    x: np.ndarray,
    A: np.ndarray,
    cfg: WeiszfeldConfig,
    c0: np.ndarray | None = None,
    history_out: list | None = None,
):
    """Solve ``min_c sum_k |x_k - c * A[n, k]|`` independently per row of A.

    Returns ``(c, objective, iters, converged)``, each of length ``n``.
    The returned pair is the best iterate seen, not necessarily the last.
    ``c0`` warm-starts the iteration; the default start is the least-squares
    scale, which the first update also produces from any interior point.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim != 2 or A.shape[1] != x.size:
        raise ValueError("A must be (n, len(x))")
    n = A.shape[0]
    eps = cfg.epsilon_for(x)

    # constants of the iteration, hoisted: x_k * conj(a_k) and |a_k|^2
    work_B = np.conj(A) * x[None, :]
    work_A2 = A.real * A.real + A.imag * A.imag
    if c0 is None:
        work_c = work_B.sum(axis=1) / work_A2.sum(axis=1)  # least-squares start
    else:
        work_c = np.array(c0, dtype=np.complex128).ravel().copy()
        if work_c.size != n:
            raise ValueError("c0 must have one entry per row of A")

    c = work_c.copy()
    best_c = work_c.copy()
    best_obj = np.full(n, np.inf)
    iters = np.zeros(n, dtype=np.int64)
    converged = np.zeros(n, dtype=bool)
    work_A = A
    work_idx = np.arange(n)

    for _ in range(cfg.max_iters):
        if work_idx.size == 0:
            break
        r = np.abs(x[None, :] - work_c[:, None] * work_A)
        obj = r.sum(axis=1)
        improved = obj < best_obj[work_idx]
        upd = work_idx[improved]
        best_obj[upd] = obj[improved]
        best_c[upd] = work_c[improved]
        if history_out is not None:
            history_out.append(obj.copy())

        w = np.maximum(r, eps, out=r)
        np.reciprocal(w, out=w)
        num = (work_B * w).sum(axis=1)
        den = (work_A2 * w).sum(axis=1)
        c_new = num / den
        done = np.abs(c_new - work_c) <= cfg.tol * (1.0 + np.abs(c_new))
        c[work_idx] = c_new
        iters[work_idx] += 1
        if done.any():
            converged[work_idx[done]] = True
            keep = ~done
            work_idx = work_idx[keep]
            work_A = work_A[keep]
            work_B = work_B[keep]
            work_A2 = work_A2[keep]
            work_c = c_new[keep]
        else:
            work_c = c_new

    # the final update may beat every recorded iterate
    r = np.abs(x[None, :] - c[:, None] * A)
    obj = r.sum(axis=1)
    improved = obj < best_obj
    best_obj[improved] = obj[improved]
    best_c[improved] = c[improved]
    return best_c, best_obj, iters, converged


def weighted_median_coeff(X, z: complex, cfg: WeiszfeldConfig | None = None) -> L1InnerSolution:
    """Optimal transformed scale ``ct`` at generator ``z`` plus diagnostics.

    Non-convergence within the iteration budget is reported, not raised:
    the best iterate is still the returned solution.
    """
    X = as_complex_matrix(X)
    if cfg is None:
        cfg = WeiszfeldConfig()
    D, W = X.shape
    x = X.ravel()
    a = np.power(complex(z), anti_diagonal_exponents(D, W))
    ct, obj, iters, conv = weiszfeld_batch(x, a[None, :], cfg)
    c_tilde = complex(ct[0])
    return L1InnerSolution(
        c_tilde=c_tilde,
        c=c_tilde / alpha(z, D, W),
        objective=float(obj[0]),
        iters_used=int(iters[0]),
        converged=bool(conv[0]),
    )


def objective_l1(X, z: complex, cfg: WeiszfeldConfig | None = None) -> float:
    """Achieved L1 error ``||X - c_hat(z) s_D(z) s_W(z)^T||_1``."""
    return weighted_median_coeff(X, z, cfg).objective


def real_weighted_median(values: np.ndarray, weights: np.ndarray) -> float:
    """Exact minimizer of ``sum_k w_k |v_k - t|`` over real ``t``.

    Lower endpoint of the median interval, found by sorting; deterministic.
    """
    v = np.asarray(values, dtype=np.float64).ravel()
    w = np.asarray(weights, dtype=np.float64).ravel()
    if v.size == 0:
        raise ValueError("values must be non-empty")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    order = np.argsort(v, kind="stable")
    cum = np.cumsum(w[order])
    half = 0.5 * cum[-1]
    idx = int(np.searchsorted(cum, half))
    return float(v[order[min(idx, v.size - 1)]])


def _real_exact_coeff(x: np.ndarray, a: np.ndarray) -> tuple[float, float]:
    """Exact real inner solve: returns (ct, objective)."""
    nz = a != 0.0
    if not np.any(nz):
        return 0.0, float(np.abs(x).sum())
    ct = real_weighted_median(x[nz] / a[nz], np.abs(a[nz]))
    return ct, float(np.abs(x - ct * a).sum())


class _BranchScan:
    __slots__ = ("objective", "z", "c_tilde", "failures")

    def __init__(self, objective, z, c_tilde, failures):
        self.objective = objective
        self.z = z
        self.c_tilde = c_tilde
        self.failures = failures


def _scan_branch_l1(
    X: np.ndarray, grid: GridSpec, cfg: WeiszfeldConfig, skip_origin: bool, exact_real: bool
) -> _BranchScan:
    """Grid argmin of the L1 objective, first-in-traversal tie-breaking.

    The Weiszfeld state of each angle column is carried to the next radius
    ring as a warm start; the traversal order is fixed so the result does
    not depend on chunking.
    """
    D, W = X.shape
    x = X.ravel()
    m = anti_diagonal_exponents(D, W)
    n_exp = D + W - 1

    best = np.inf
    best_z = 0j
    best_ct = 0j
    failures = 0
    prev_c: np.ndarray | None = None

    for _, zs in grid.iter_rows(skip_origin=skip_origin):
        V = np.vander(zs, n_exp, increasing=True)
        A = V[:, m]
        if exact_real:
            for k, z in enumerate(zs):
                ct, obj = _real_exact_coeff(x.real, A[k].real)
                if obj < best:
                    best, best_z, best_ct = obj, complex(z), complex(ct)
            continue
        c0 = prev_c if prev_c is not None and prev_c.size == zs.size else None
        c, obj, _, conv = weiszfeld_batch(x, A, cfg, c0=c0)
        failures += int((~conv).sum())
        if zs.size > 1:
            prev_c = c
        i = int(np.argmin(obj))
        if obj[i] < best:
            best, best_z, best_ct = float(obj[i]), complex(zs[i]), complex(c[i])
    return _BranchScan(best, best_z, best_ct, failures)


def _reciprocal(z: complex) -> complex:
    if z == 0:
        raise ReciprocalOfZeroError(
            "winning generator is the origin of the reciprocal branch; "
            "the fit would need a generator at infinity",
            z,
        )
    return 1.0 / z


def approx_l1(
    X,
    grid: GridSpec | None = None,
    cfg: WeiszfeldConfig | None = None,
    refine: bool = False,
) -> Rank1Fit:
    """Best rank-1 Hankel approximation of ``X`` in the L1 sense.

    Same two-branch unit-disc search as the L2 fit, with the closed-form
    scale replaced by the Weiszfeld median solve per grid point.  The
    reciprocal branch is scanned through the double flip of the input,
    which is the overflow-safe equivalent of substituting ``1/z``; its
    origin point is excluded so the reciprocal always exists.
    """
    X = as_complex_matrix(X)
    check_not_all_zero(X)
    if grid is None:
        grid = GridSpec.default_l1()
    if cfg is None:
        cfg = WeiszfeldConfig()
    D, W = X.shape

    pre_flipped = abs(X[0, 0]) < abs(X[-1, -1])
    Xw = flip(X, "both") if pre_flipped else X
    exact_real = grid.restrict_real and not X.imag.any()

    direct = _scan_branch_l1(Xw, grid, cfg, skip_origin=False, exact_real=exact_real)
    flipped = _scan_branch_l1(
        flip(Xw, "both"), grid, cfg, skip_origin=True, exact_real=exact_real
    )

    if direct.objective <= flipped.objective:
        branch, won = "direct", direct
        branch_matrix = Xw
    else:
        branch, won = "flipped", flipped
        branch_matrix = flip(Xw, "both")
    z_disc, ct = won.z, won.c_tilde

    if refine:
        from .l2 import _refine_polar

        z_disc = _refine_polar(
            lambda z: -objective_l1(branch_matrix, z, cfg), z_disc, grid
        )
        sol = weighted_median_coeff(branch_matrix, z_disc, cfg)
        ct = sol.c_tilde

    odd = (branch == "flipped") != pre_flipped
    c_branch = ct / alpha(z_disc, D, W)
    if odd:
        z_hat = _reciprocal(z_disc)
        # the flipped-problem scale maps back with a pure phase twist
        phase = z_disc / abs(z_disc)
        c_hat = c_branch * phase ** (D + W - 2)
    else:
        z_hat = z_disc
        c_hat = c_branch

    if c_hat == 0:
        from .exceptions import DegenerateInputError

        raise DegenerateInputError(f"optimal scale vanished at z={z_hat!r}")
    if exact_real and z_hat.imag == 0.0:
        c_hat = complex(c_hat.real, 0.0)
    H = c_hat * np.outer(structure_vector(z_hat, D), structure_vector(z_hat, W))
    residual = float(np.abs(X - H).sum())
    return Rank1Fit(
        z=z_hat,
        c=c_hat,
        matrix=H,
        residual=residual,
        norm="l1",
        branch=branch,
        pre_flipped=pre_flipped,
        refined=refine,
        inner_mode="exact-real" if exact_real else "batch-rows",
        inner_failures=direct.failures + flipped.failures,
    )


def approx_l1_real(
    X,
    grid: GridSpec | None = None,
    cfg: WeiszfeldConfig | None = None,
    refine: bool = False,
) -> Rank1Fit:
    """L1 fit restricted to real generators in [-1, 1].

    Real inputs take an exact sorted-median inner solve instead of the
    Weiszfeld iteration, and yield a fully real approximation.
    """
    if grid is None:
        grid = GridSpec.default_l1(restrict_real=True)
    elif not grid.restrict_real:
        raise ValueError("approx_l1_real requires grid.restrict_real=True")
    return approx_l1(X, grid, cfg, refine=refine)
