"""Noise models, SNR calibration and sensor-fault injection.

Randomness policy: every stream is a ``numpy.random.Generator`` backed by
the Philox 4x64 counter-based bit generator, keyed by a ``SeedSequence``.
Philox is algorithmically fixed across numpy releases, so a seed tuple
pins the exact sample stream; independent streams come from distinct seed
tuples, never from sharing state.

Complex Gaussian convention: ``CN(0, s2)`` has total variance ``s2`` split
evenly between the real and imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "NoiseModel",
    "FaultSpec",
    "rng_from_seed",
    "seed_sequence",
    "draw_noise",
    "calibrate_amplitude",
    "inject_faults",
    "ula_sensor_map",
]


def seed_sequence(*key) -> np.random.SeedSequence:
    """SeedSequence keyed by a tuple of non-negative integers."""
    return np.random.SeedSequence(tuple(int(k) for k in key))


def rng_from_seed(seed) -> np.random.Generator:
    """Philox generator from an int, a key tuple, or a SeedSequence."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        ss = seed
    elif isinstance(seed, tuple):
        ss = seed_sequence(*seed)
    else:
        ss = seed_sequence(int(seed))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class NoiseModel:
    """Per-sample complex noise law.

    kind="white_gaussian": circularly-symmetric Gaussian, variance sigma2.
    kind="bernoulli_gaussian": with probability p the sample comes from the
    high-variance component sigma2_2, otherwise from sigma1_2.
    """

    kind: str = "white_gaussian"
    sigma2: float = 1.0
    p: float = 0.0
    sigma1_2: float = 1.0
    sigma2_2: float = 1.0

    def __post_init__(self):
        if self.kind == "white_gaussian":
            if self.sigma2 <= 0:
                raise ValueError("sigma2 must be positive")
        elif self.kind == "bernoulli_gaussian":
            if not 0.0 < self.p < 1.0:
                raise ValueError("p must lie in (0, 1)")
            if not self.sigma2_2 > self.sigma1_2 > 0.0:
                raise ValueError("need sigma2_2 > sigma1_2 > 0")
        else:
            raise ValueError(f"unknown noise kind {self.kind!r}")

    @classmethod
    def white(cls, sigma2: float = 1.0) -> "NoiseModel":
        return cls(kind="white_gaussian", sigma2=sigma2)

    @classmethod
    def impulsive(cls, p: float, sigma1_2: float, sigma2_2: float) -> "NoiseModel":
        return cls(kind="bernoulli_gaussian", p=p, sigma1_2=sigma1_2, sigma2_2=sigma2_2)

    @property
    def effective_power(self) -> float:
        """Mean per-sample power E|n|^2 of the model."""
        if self.kind == "white_gaussian":
            return self.sigma2
        return (1.0 - self.p) * self.sigma1_2 + self.p * self.sigma2_2


def _circular_gaussian(n: int, variance, rng: np.random.Generator) -> np.ndarray:
    scale = np.sqrt(np.asarray(variance, dtype=np.float64) / 2.0)
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    return scale * (re + 1j * im)


def draw_noise(model: NoiseModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` i.i.d. complex samples from the model.

    Draw order is frozen (mixture mask first, then one Gaussian block) so a
    seeded stream reproduces bit-identically.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if model.kind == "white_gaussian":
        return _circular_gaussian(n, model.sigma2, rng)
    impulse = rng.random(n) < model.p
    variance = np.where(impulse, model.sigma2_2, model.sigma1_2)
    return _circular_gaussian(n, variance, rng)


def calibrate_amplitude(snr_db: float, model: NoiseModel, rng: np.random.Generator) -> complex:
    """Signal amplitude with ``|x|^2 = 10^(snr/10) * E|n|^2`` and random phase.

    The SNR definition (signal power over effective noise power) is the
    contract; the phase is uniform on [0, 2*pi).
    """
    mag = np.sqrt(10.0 ** (snr_db / 10.0) * model.effective_power)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return complex(mag * np.exp(1j * phase))


@dataclass(frozen=True)
class FaultSpec:
    """Sensors to blank out and how loud the replacement noise is.

    Faulty entries are replaced column by column with circular Gaussian
    noise whose variance is ``10^(alpha_db/10)`` times the mean power of
    that column's healthy entries.
    """

    faulty_sensors: frozenset = field(default_factory=frozenset)
    alpha_db: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "faulty_sensors", frozenset(int(s) for s in self.faulty_sensors))


def ula_sensor_map(D: int, W: int) -> np.ndarray:
    """0-based sensor index sampled by each entry of a sliding-window matrix.

    Column ``i`` covers sensors ``i .. i+D-1``; entry ``(d, i)`` therefore
    reads sensor ``d + i``.
    """
    return np.arange(D)[:, None] + np.arange(W)[None, :]


def inject_faults(
    X, sensor_map: np.ndarray, spec: FaultSpec, rng: np.random.Generator
) -> np.ndarray:
    """Replace faulty-sensor entries with scaled noise-only measurements.

    Column scaling uses the healthy entries of the same column; a column
    with no healthy entry is a configuration error.
    """
    X = np.array(X, dtype=np.complex128)
    sensor_map = np.asarray(sensor_map)
    if sensor_map.shape != X.shape:
        raise ValueError("sensor_map must match the matrix shape")
    if not spec.faulty_sensors:
        return X
    lo, hi = int(sensor_map.min()), int(sensor_map.max())
    out_of_range = sorted(s for s in spec.faulty_sensors if s < lo or s > hi)
    if out_of_range:
        raise ValueError(f"faulty sensor indices outside the array: {out_of_range}")
    faulty = np.isin(sensor_map, list(spec.faulty_sensors))
    gain = 10.0 ** (spec.alpha_db / 10.0)
    for i in range(X.shape[1]):
        bad = faulty[:, i]
        if not bad.any():
            continue
        healthy = X[~bad, i]
        if healthy.size == 0:
            raise ValueError(f"column {i} has no healthy entries to scale against")
        var = gain * float(np.mean(np.abs(healthy) ** 2))
        X[bad, i] = _circular_gaussian(int(bad.sum()), var, rng)
    return X
