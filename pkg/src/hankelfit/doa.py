"""Sliding-subarray sensing model and direction-of-arrival estimators.

A uniform linear array of ``m`` sensors is read through ``w = m - d + 1``
overlapping windows of length ``d``, each window acquired with fresh noise.
Stacking the windows as columns gives a ``d x w`` measurement matrix whose
noise-free part is rank-1 Hankel with a unit-circle generator determined
by the arrival angle, which is what the structured fits exploit: the angle
search is a 1-D sweep of the generator along the unit circle.

Angles are degrees at the API boundary (radians internally), with the
convention ``theta in [-90, 90)`` measured from broadside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .l1 import WeiszfeldConfig, weiszfeld_batch
from .noise import NoiseModel, draw_noise, rng_from_seed
from .validation import as_complex_matrix

__all__ = [
    "ArrayConfig",
    "ThetaGrid",
    "DoaScene",
    "steering_vector",
    "z_of_theta",
    "acquire",
    "estimate_doa_l2",
    "estimate_doa_l1",
    "matched_filter_ml",
    "average_per_sensor",
]

_THETA_CHUNK = 4096  # bounds the (n_theta x d*w) work arrays


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry: ``m`` sensors, windows of length ``d``, spacing d/lambda."""

    m: int
    d: int
    spacing_ratio: float = 0.5

    def __post_init__(self):
        if not 1 <= self.d <= self.m:
            raise ValueError("need 1 <= d <= m")
        if self.spacing_ratio <= 0:
            raise ValueError("spacing_ratio must be positive")

    @property
    def w(self) -> int:
        return self.m - self.d + 1

    @property
    def aliased(self) -> bool:
        """Spacing beyond half a wavelength makes distinct angles ambiguous."""
        return self.spacing_ratio > 0.5


@dataclass(frozen=True)
class ThetaGrid:
    """Uniform angle lattice ``-90 + k*step`` on [-90, 90) degrees."""

    step: float = 0.01
    lo: float = -90.0
    hi: float = 90.0

    def __post_init__(self):
        if not 0.0 < self.step <= 180.0:
            raise ValueError("step must lie in (0, 180]")

    def _count(self) -> int:
        return int(np.ceil((self.hi - self.lo) / self.step - 1e-9))

    def thetas(self) -> np.ndarray:
        return self.lo + self.step * np.arange(self._count())

    def window(self, center: float, half_width: float) -> np.ndarray:
        """Lattice points within ``center +- half_width``, same spacing."""
        k_lo = max(0, int(np.ceil((center - half_width - self.lo) / self.step - 1e-9)))
        k_hi = min(
            self._count() - 1,
            int(np.floor((center + half_width - self.lo) / self.step + 1e-9)),
        )
        return self.lo + self.step * np.arange(k_lo, k_hi + 1)


@dataclass
class DoaScene:
    """One acquisition: ground truth plus the measured matrix."""

    config: ArrayConfig
    theta0: float
    amplitude: complex
    X: np.ndarray
    seed: int | None = None


def steering_vector(theta_deg: float, m: int, spacing_ratio: float = 0.5) -> np.ndarray:
    """Array response ``exp(-2j*pi*k*(d/lambda)*sin(theta))``, k = 0..m-1."""
    phase = -2.0 * np.pi * spacing_ratio * np.sin(np.deg2rad(theta_deg))
    return np.exp(1j * phase * np.arange(m))


def z_of_theta(theta_deg, spacing_ratio: float = 0.5):
    """Unit-circle generator of the arrival angle; accepts scalars or arrays."""
    phase = -2.0 * np.pi * spacing_ratio * np.sin(np.deg2rad(theta_deg))
    return np.exp(1j * phase)


def acquire(
    config: ArrayConfig,
    theta0: float,
    amplitude: complex,
    noise: NoiseModel | None = None,
    rng=None,
    seed: int | None = None,
) -> DoaScene:
    """Simulate one sliding-window acquisition.

    Every window sees the same signal but draws its own noise vector;
    column ``i`` of the result is window ``i``.  Pass either an ``rng`` or
    a ``seed`` (seed wins a place in the record for bookkeeping).
    """
    a = steering_vector(theta0, config.m, config.spacing_ratio)
    d, w = config.d, config.w
    cols = np.lib.stride_tricks.sliding_window_view(a, d).T  # (d, w)
    X = complex(amplitude) * cols.astype(np.complex128)
    if noise is not None:
        if rng is None:
            rng = rng_from_seed(0 if seed is None else seed)
        N = draw_noise(noise, d * w, rng).reshape(w, d).T  # column blocks in draw order
        X = X + N
    return DoaScene(config=config, theta0=float(theta0), amplitude=complex(amplitude), X=X, seed=seed)


def _unit_structure_rows(zs: np.ndarray, n: int) -> np.ndarray:
    # all |z| == 1 here, so the normalization is just sqrt(n)
    return np.vander(zs, n, increasing=True) / np.sqrt(n)


def _l2_spectrum(X: np.ndarray, thetas: np.ndarray, spacing_ratio: float) -> np.ndarray:
    """``|s_d(z(theta))^H X s_w(z(theta))^*|`` over the angle lattice."""
    d, w = X.shape
    zc = np.conj(z_of_theta(thetas, spacing_ratio))
    Cd = _unit_structure_rows(zc, d)
    Cw = _unit_structure_rows(zc, w)
    return np.abs(np.einsum("nw,nw->n", Cd @ X, Cw))


def estimate_doa_l2(
    X, config: ArrayConfig, grid: ThetaGrid | None = None, refine: bool = False
) -> float:
    """Angle maximizing the structured-fit objective along the unit circle.

    Equivalently the angle whose rank-1 Hankel L2 fit leaves the smallest
    residual; ties break toward the lower angle.  ``refine`` follows the
    grid argmax with a golden-section pass inside one lattice step, taking
    the result off the lattice.
    """
    X = as_complex_matrix(X)
    _check_shape(X, config)
    grid = grid or ThetaGrid()
    thetas = grid.thetas()
    spec = _l2_spectrum(X, thetas, config.spacing_ratio)
    theta = float(thetas[int(np.argmax(spec))])
    if refine:
        from .l2 import _golden_max

        theta = _golden_max(
            lambda t: float(_l2_spectrum(X, np.array([t]), config.spacing_ratio)[0]),
            max(grid.lo, theta - grid.step),
            min(grid.hi, theta + grid.step),
        )
    return theta


def _l1_objectives(
    X: np.ndarray,
    thetas: np.ndarray,
    config: ArrayConfig,
    cfg: WeiszfeldConfig,
    c0: complex | None = None,
):
    """L1 fit objective per angle, chunked; returns (objectives, coeffs, fails)."""
    d, w = X.shape
    x = X.ravel()
    m_exp = (np.arange(d)[:, None] + np.arange(w)[None, :]).ravel()
    n_exp = d + w - 1
    objs = np.empty(thetas.size)
    coeffs = np.empty(thetas.size, dtype=np.complex128)
    failures = 0
    for lo in range(0, thetas.size, _THETA_CHUNK):
        sl = slice(lo, min(lo + _THETA_CHUNK, thetas.size))
        zs = z_of_theta(thetas[sl], config.spacing_ratio)
        A = np.vander(zs, n_exp, increasing=True)[:, m_exp]
        start = None if c0 is None else np.full(zs.size, c0, dtype=np.complex128)
        c, obj, _, conv = weiszfeld_batch(x, A, cfg, c0=start)
        objs[sl] = obj
        coeffs[sl] = c
        failures += int((~conv).sum())
    return objs, coeffs, failures


def estimate_doa_l1(
    X,
    config: ArrayConfig,
    grid: ThetaGrid | None = None,
    cfg: WeiszfeldConfig | None = None,
    two_stage: bool = False,
    coarse_step: float = 1.0,
    fine_half_width: float = 2.0,
    refine: bool = False,
    info: dict | None = None,
) -> float:
    """Angle minimizing the L1 structured-fit cost along the unit circle.

    ``two_stage`` sweeps a coarse lattice first and refines on the full
    lattice only within ``fine_half_width`` degrees of the coarse winner,
    warm-starting the inner solver from the coarse solution; positions stay
    on the global lattice so results remain step-quantized.  ``refine``
    adds an off-lattice golden-section pass inside one step.  Inner solves
    that hit the iteration cap are counted in ``info['inner_failures']``
    but still contribute their best iterate.
    """
    X = as_complex_matrix(X)
    _check_shape(X, config)
    grid = grid or ThetaGrid()
    cfg = cfg or WeiszfeldConfig()
    failures = 0
    if two_stage and coarse_step > grid.step:
        coarse = ThetaGrid(step=coarse_step, lo=grid.lo, hi=grid.hi).thetas()
        objs, coeffs, f0 = _l1_objectives(X, coarse, config, cfg)
        failures += f0
        i0 = int(np.argmin(objs))
        thetas = grid.window(float(coarse[i0]), fine_half_width)
        objs, _, f1 = _l1_objectives(X, thetas, config, cfg, c0=complex(coeffs[i0]))
        failures += f1
    else:
        thetas = grid.thetas()
        objs, _, f0 = _l1_objectives(X, thetas, config, cfg)
        failures += f0
    theta = float(thetas[int(np.argmin(objs))])
    if refine:
        from .l2 import _golden_max

        theta = _golden_max(
            lambda t: -_l1_objectives(X, np.array([t]), config, cfg)[0][0],
            max(grid.lo, theta - grid.step),
            min(grid.hi, theta + grid.step),
        )
    if info is not None:
        info["inner_failures"] = failures
        info["n_points"] = int(thetas.size)
    return float(theta)


def matched_filter_ml(X, config: ArrayConfig, grid: ThetaGrid | None = None) -> float:
    """Matched filter on the column-stacked snapshot.

    Correlates ``vec(X)`` against the Kronecker (virtual) steering vector
    of each candidate angle and returns the peak.  Kept as an independent
    code path from :func:`estimate_doa_l2` so the two can cross-check each
    other numerically.
    """
    X = as_complex_matrix(X)
    _check_shape(X, config)
    grid = grid or ThetaGrid()
    thetas = grid.thetas()
    d, w = X.shape
    rv = X.ravel(order="F")  # column stacking
    best = -1.0
    best_theta = thetas[0]
    for lo in range(0, thetas.size, _THETA_CHUNK):
        sl = slice(lo, min(lo + _THETA_CHUNK, thetas.size))
        zs = z_of_theta(thetas[sl], config.spacing_ratio)
        Sd = _unit_structure_rows(zs, d)
        Sw = _unit_structure_rows(zs, w)
        # rows are kron(s_w, s_d) for each angle
        Av = np.einsum("nw,nd->nwd", Sw, Sd).reshape(zs.size, d * w)
        vals = np.abs(np.conj(Av) @ rv) ** 2
        i = int(np.argmax(vals))
        if vals[i] > best:
            best = float(vals[i])
            best_theta = thetas[sl][i]
    return float(best_theta)


def average_per_sensor(X, config: ArrayConfig) -> np.ndarray:
    """Collapse the window matrix to one averaged value per sensor.

    Sensor ``k`` is read by every entry on anti-diagonal ``k``; their mean
    estimates the sensor's sample with variance reduced by the coverage
    count.
    """
    X = as_complex_matrix(X)
    _check_shape(X, config)
    d, w = X.shape
    idx = (np.arange(d)[:, None] + np.arange(w)[None, :]).ravel()
    acc = np.zeros(config.m, dtype=np.complex128)
    np.add.at(acc, idx, X.ravel())
    counts = np.bincount(idx, minlength=config.m)
    return acc / counts


def _check_shape(X: np.ndarray, config: ArrayConfig) -> None:
    if X.shape != (config.d, config.w):
        raise ValueError(
            f"matrix shape {X.shape} does not match config (d={config.d}, w={config.w})"
        )
