"""Condensed oracle checks runnable from the CLI.

A fast subset of the full test suite: each check pits a production path
against an independent computation and prints one PASS/FAIL line.  The
full suite lives under tests/ and is the authority; this exists so a
deployed install can sanity-check itself without pytest.
"""

from __future__ import annotations

import numpy as np

from .doa import ArrayConfig, ThetaGrid, acquire, estimate_doa_l2, matched_filter_ml
from .hankel import flip, is_hankel, structure_vector
from .l1 import WeiszfeldConfig, approx_l1, weighted_median_coeff
from .l2 import approx_l2
from .noise import NoiseModel, calibrate_amplitude, rng_from_seed
from .toeplitz import toeplitz_approx

__all__ = ["run_selftest"]


def _check_exact_recovery() -> bool:
    from .grids import GridSpec

    rng = np.random.default_rng(7)
    grid = GridSpec(1 / 64, 2 * np.pi / 256)  # coarse scan + refine keeps this quick
    for _ in range(4):
        d, w = rng.integers(2, 6, size=2)
        z = (0.2 + 0.7 * rng.random()) * np.exp(2j * np.pi * rng.random())
        c = (1.0 + rng.random()) * np.exp(2j * np.pi * rng.random())
        X = c * np.outer(structure_vector(z, d), structure_vector(z, w))
        norms = {"l2": float(np.linalg.norm(X)), "l1": float(np.abs(X).sum())}
        for fit in (approx_l2(X, grid, refine=True), approx_l1(X, grid, refine=True)):
            if fit.residual > 1e-2 * norms[fit.norm]:
                return False
            if not is_hankel(fit.matrix, 1e-8 * abs(c)):
                return False
    return True


def _check_weiszfeld_median() -> bool:
    # collinear real points: the geometric median is the middle one
    X = np.array([[1.0, 5.0, 100.0]], dtype=complex)
    sol = weighted_median_coeff(X, 1.0, WeiszfeldConfig())
    return abs(sol.c_tilde - 5.0) < 1e-6 and abs(sol.objective - 99.0) < 1e-6


def _check_matched_filter_agreement() -> bool:
    config = ArrayConfig(m=12, d=6)
    grid = ThetaGrid(step=0.05)
    model = NoiseModel.white(1.0)
    for seed in range(5):
        rng = rng_from_seed((42, seed))
        amp = calibrate_amplitude(5.0, model, rng)
        theta0 = float(rng.uniform(-80, 80))
        scene = acquire(config, theta0, amp, model, rng=rng)
        if estimate_doa_l2(scene.X, config, grid) != matched_filter_ml(scene.X, config, grid):
            return False
    return True


def _check_toeplitz_reduction() -> bool:
    rng = np.random.default_rng(11)
    X = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    fit = toeplitz_approx(X, norm="l2")
    direct = approx_l2(flip(X, "rows"))
    return abs(fit.residual - direct.residual) <= 1e-12 * max(direct.residual, 1.0)


def _check_determinism() -> bool:
    rng = np.random.default_rng(3)
    X = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    a, b = approx_l2(X), approx_l2(X)
    return a.z == b.z and a.c == b.c and a.residual == b.residual


_CHECKS = (
    ("exact rank-1 recovery (l2 + l1)", _check_exact_recovery),
    ("weiszfeld collinear median", _check_weiszfeld_median),
    ("l2 estimator vs matched filter", _check_matched_filter_agreement),
    ("toeplitz residual equals flipped hankel", _check_toeplitz_reduction),
    ("repeat-call determinism", _check_determinism),
)


def run_selftest(verbose: bool = True) -> bool:
    all_ok = True
    for name, check in _CHECKS:
        ok = bool(check())
        all_ok &= ok
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}")
    if verbose:
        print("selftest:", "OK" if all_ok else "FAILED")
    return all_ok
