import numpy as np
import numpy.testing as npt
import pytest
import scipy.stats

from hankelfit.noise import (
    FaultSpec,
    NoiseModel,
    calibrate_amplitude,
    draw_noise,
    inject_faults,
    rng_from_seed,
    seed_sequence,
    ula_sensor_map,
)


def test_white_noise_power():
    rng = rng_from_seed(100)
    n = draw_noise(NoiseModel.white(1.0), 100_000, rng)
    assert np.mean(np.abs(n) ** 2) == pytest.approx(1.0, rel=0.02)


def test_impulsive_noise_power():
    # mixture mean power: 0.9*1 + 0.1*200 = 20.9
    rng = rng_from_seed(101)
    model = NoiseModel.impulsive(0.1, 1.0, 200.0)
    assert model.effective_power == pytest.approx(20.9)
    n = draw_noise(model, 100_000, rng)
    assert np.mean(np.abs(n) ** 2) == pytest.approx(20.9, rel=0.03)


def test_impulsive_degenerates_to_white():
    rng = rng_from_seed(102)
    model = NoiseModel.impulsive(1e-6, 1.0, 200.0)
    n = np.abs(draw_noise(model, 10_000, rng))
    # |n| for a circular Gaussian with unit power is Rayleigh(sqrt(1/2))
    stat = scipy.stats.kstest(n, "rayleigh", args=(0, np.sqrt(0.5)))
    assert stat.pvalue > 0.01


def test_circular_symmetry():
    rng = rng_from_seed(103)
    n = draw_noise(NoiseModel.white(2.0), 100_000, rng)
    assert abs(np.mean(n**2)) < 3 * 2.0 / np.sqrt(n.size)


def test_noise_model_validation():
    with pytest.raises(ValueError):
        NoiseModel.white(0.0)
    with pytest.raises(ValueError):
        NoiseModel.impulsive(0.0, 1.0, 200.0)
    with pytest.raises(ValueError):
        NoiseModel.impulsive(0.1, 5.0, 2.0)
    with pytest.raises(ValueError):
        NoiseModel(kind="pink")


def test_calibrate_amplitude_white():
    rng = rng_from_seed(104)
    x = calibrate_amplitude(0.0, NoiseModel.white(1.0), rng)
    assert abs(x) == pytest.approx(1.0)
    # oracle: direct formula, 4 * 10^(-0.5)
    x = calibrate_amplitude(-5.0, NoiseModel.white(4.0), rng)
    assert abs(x) ** 2 == pytest.approx(1.2649110640673518, rel=1e-12)


def test_calibrate_amplitude_impulsive():
    rng = rng_from_seed(105)
    model = NoiseModel.impulsive(0.1, 1.0, 200.0)
    x = calibrate_amplitude(10.0, model, rng)
    assert abs(x) ** 2 == pytest.approx(209.0, rel=1e-12)


def test_calibrate_phase_uniform():
    rng = rng_from_seed(106)
    phases = np.array(
        [np.angle(calibrate_amplitude(0.0, NoiseModel.white(1.0), rng)) for _ in range(4000)]
    )
    stat = scipy.stats.kstest((phases + 2 * np.pi) % (2 * np.pi), "uniform", args=(0, 2 * np.pi))
    assert stat.pvalue > 0.01


def test_inject_faults_noop_without_faulty_sensors():
    rng = rng_from_seed(107)
    X = np.arange(12, dtype=complex).reshape(3, 4) + 1.0
    out = inject_faults(X, ula_sensor_map(3, 4), FaultSpec(), rng)
    npt.assert_array_equal(out, X)
    assert out is not X  # caller's matrix untouched


def test_inject_faults_power_scaling():
    # healthy entries of unit modulus, alpha 10 dB -> injected variance 10
    d, w = 4, 1
    X = np.exp(1j * np.linspace(0, 1, d * w)).reshape(d, w)
    spec = FaultSpec(faulty_sensors={0}, alpha_db=10.0)
    smap = ula_sensor_map(d, w)
    rng = rng_from_seed(108)
    samples = np.array([inject_faults(X, smap, spec, rng)[0, 0] for _ in range(10_000)])
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(10.0, rel=0.05)


def test_inject_faults_alpha_zero_matches_healthy_power():
    rng = rng_from_seed(109)
    d, w = 5, 1
    X = (2.0 + 0j) * np.ones((d, w))  # healthy power 4
    spec = FaultSpec(faulty_sensors={2}, alpha_db=0.0)
    smap = ula_sensor_map(d, w)
    samples = np.array([inject_faults(X, smap, spec, rng)[2, 0] for _ in range(10_000)])
    assert np.mean(np.abs(samples) ** 2) == pytest.approx(4.0, rel=0.05)


def test_inject_faults_exact_alpha_scaling():
    # same stream: entries scale exactly by 10^(alpha/20)
    X = np.ones((3, 2), dtype=complex)
    smap = ula_sensor_map(3, 2)
    base = inject_faults(X, smap, FaultSpec({1}, 0.0), rng_from_seed(110))
    loud = inject_faults(X, smap, FaultSpec({1}, 10.0), rng_from_seed(110))
    mask = np.isin(smap, [1])
    npt.assert_allclose(loud[mask], base[mask] * 10 ** (10 / 20), rtol=1e-12)
    npt.assert_array_equal(loud[~mask], X[~mask])


def test_inject_faults_rejects_fully_faulty_column():
    X = np.ones((2, 2), dtype=complex)
    spec = FaultSpec(faulty_sensors={0, 1, 2}, alpha_db=0.0)
    with pytest.raises(ValueError):
        inject_faults(X, ula_sensor_map(2, 2), spec, rng_from_seed(111))


def test_inject_faults_rejects_out_of_range_sensor():
    X = np.ones((2, 2), dtype=complex)
    with pytest.raises(ValueError):
        inject_faults(X, ula_sensor_map(2, 2), FaultSpec({9}, 0.0), rng_from_seed(112))


def test_streams_are_reproducible_and_independent():
    a = draw_noise(NoiseModel.white(1.0), 64, rng_from_seed((5, 1)))
    b = draw_noise(NoiseModel.white(1.0), 64, rng_from_seed((5, 1)))
    c = draw_noise(NoiseModel.white(1.0), 64, rng_from_seed((5, 2)))
    npt.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_seed_sequence_accepts_tuples():
    ss = seed_sequence(1, 2, 3)
    assert isinstance(ss, np.random.SeedSequence)
    assert rng_from_seed(ss).standard_normal() == rng_from_seed((1, 2, 3)).standard_normal()
