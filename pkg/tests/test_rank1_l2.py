import numpy as np
import numpy.testing as npt
import pytest

from hankelfit.exceptions import DegenerateInputError
from hankelfit.grids import GridSpec
from hankelfit.hankel import flip, geometric_norm, is_hankel, structure_vector
from hankelfit.l2 import _scan_branch, approx_l2, approx_l2_real, coefficient_l2, objective_l2


def naive_objective(X, z):
    """Triple-loop evaluation of |s_D^H X s_W^*| with explicit powers."""
    D, W = X.shape
    total = 0.0 + 0.0j
    nd = geometric_norm(abs(z), D)
    nw = geometric_norm(abs(z), W)
    for i in range(D):
        for j in range(W):
            total += np.conj(z**i) * X[i, j] * np.conj(z**j)
    return abs(total) / (nd * nw)


def rank1_hankel(c, z, d, w):
    return c * np.outer(structure_vector(z, d), structure_vector(z, w))


def test_objective_picks_corner_at_origin():
    X = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    assert objective_l2(X, 0.0) == pytest.approx(1.0)


def test_objective_averages_uniform_matrix():
    assert objective_l2(np.ones((2, 2)), 1.0) == pytest.approx(2.0)


def test_objective_matches_naive_triple_loop():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    z = 0.3 + 0.4j
    assert objective_l2(X, z) == pytest.approx(naive_objective(X, z), abs=1e-12)


def test_coefficient_recovers_exact_scale():
    X = rank1_hankel(2.0, 0.5, 2, 3)
    assert coefficient_l2(X, 0.5) == pytest.approx(2.0)
    assert coefficient_l2(np.ones((2, 2)), 1.0) == pytest.approx(2.0)
    assert coefficient_l2(np.zeros((2, 2)), 0.3 + 0.1j) == 0.0


def test_coefficient_magnitude_equals_objective():
    rng = np.random.default_rng(6)
    X = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
    for z in (0.2, 0.9j, -0.5 + 0.3j):
        assert abs(coefficient_l2(X, z)) == pytest.approx(objective_l2(X, z))


def test_approx_recovers_noiseless_input():
    X = rank1_hankel(2.0, 0.5, 2, 3)
    fit = approx_l2(X, GridSpec(1e-3, 1e-3))
    assert abs(fit.z - 0.5) <= 2e-3
    assert fit.residual <= 1e-2 * np.linalg.norm(X)


def test_approx_ones_matrix_is_exact():
    fit = approx_l2(np.ones((2, 2)))
    assert fit.z == pytest.approx(1.0)
    assert fit.c == pytest.approx(2.0)
    npt.assert_allclose(fit.matrix, np.ones((2, 2)), atol=1e-12)
    assert fit.residual <= 1e-12


def test_approx_rejects_zero_matrix():
    with pytest.raises(DegenerateInputError):
        approx_l2(np.zeros((3, 3)))


def test_fit_matrix_is_rank1_hankel():
    rng = np.random.default_rng(8)
    X = rng.standard_normal((4, 5)) + 1j * rng.standard_normal((4, 5))
    fit = approx_l2(X, GridSpec(1 / 64, 2 * np.pi / 128))
    scale = np.abs(fit.matrix).max()
    assert is_hankel(fit.matrix, 1e-10 * scale)
    # every 2x2 minor vanishes
    H = fit.matrix
    minors = H[:-1, :-1] * H[1:, 1:] - H[:-1, 1:] * H[1:, :-1]
    assert np.abs(minors).max() <= 1e-10 * scale**2
    # matrix equals the declared outer product
    rebuilt = rank1_hankel(fit.c, fit.z, 4, 5)
    npt.assert_allclose(fit.matrix, rebuilt, rtol=1e-10, atol=1e-12 * scale)


def test_objective_beats_or_matches_finer_grid_oracle():
    """Default-style search vs an independent exhaustive scan, 2x finer."""
    rng = np.random.default_rng(11)
    coarse = GridSpec(1 / 32, 2 * np.pi / 64)
    fine = GridSpec(1 / 64, 2 * np.pi / 128)
    for _ in range(5):
        X = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        obj_coarse, z_coarse = _scan_branch(X, coarse, skip_origin=False)
        # oracle: plain loop over every fine-grid point
        best_fine, z_fine = -1.0, 0j
        for _, zs in fine.iter_rows():
            for z in zs:
                v = naive_objective(X, z)
                if v > best_fine:
                    best_fine, z_fine = v, z
        assert obj_coarse <= best_fine + 1e-12
        # within the objective variation of one coarse cell around the winner
        cell = [
            z_fine + coarse.delta_rho * np.exp(1j * np.angle(z_fine or 1.0)),
            z_fine * np.exp(1j * coarse.delta_phi),
        ]
        variation = max(abs(naive_objective(X, zc) - best_fine) for zc in cell)
        assert obj_coarse >= best_fine - variation - 1e-12


def test_monotone_refinement():
    rng = np.random.default_rng(12)
    X = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    grid = GridSpec(1 / 16, 2 * np.pi / 32)
    halved = GridSpec(grid.delta_rho / 2, grid.delta_phi / 2)
    obj, _ = _scan_branch(X, grid, skip_origin=False)
    obj_halved, _ = _scan_branch(X, halved, skip_origin=False)
    assert obj_halved >= obj - 1e-15


def test_scale_equivariance():
    rng = np.random.default_rng(13)
    X = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    grid = GridSpec(1 / 64, 2 * np.pi / 128)
    base = approx_l2(X, grid)
    for a in (2.0, -3.0, 1.5 - 2.5j):
        scaled = approx_l2(a * X, grid)
        assert scaled.z == base.z
        assert scaled.c == pytest.approx(a * base.c, rel=1e-10)


def test_flip_duality():
    rng = np.random.default_rng(14)
    grid = GridSpec(1 / 64, 2 * np.pi / 128)
    for _ in range(4):
        X = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        h_x = approx_l2(X, grid).matrix
        h_flip = approx_l2(flip(X, "both"), grid).matrix
        npt.assert_allclose(h_flip, flip(h_x, "both"), rtol=1e-8, atol=1e-10)


def test_structured_residual_at_least_unstructured():
    rng = np.random.default_rng(15)
    for _ in range(10):
        d, w = rng.integers(2, 6, size=2)
        X = rng.standard_normal((d, w)) + 1j * rng.standard_normal((d, w))
        fit = approx_l2(X, GridSpec(1 / 64, 2 * np.pi / 128))
        s1 = np.linalg.svd(X, compute_uv=False)[0]
        floor = np.linalg.norm(X) ** 2 - s1**2
        assert fit.residual**2 >= floor - 1e-10


def test_real_restriction_recovers_real_generator():
    X = rank1_hankel(3.0, -0.7, 3, 2).real
    fit = approx_l2_real(X)
    assert abs(fit.z - (-0.7)) <= 2 * (1 / 512)
    assert fit.z.imag == 0.0
    assert fit.c.imag == 0.0  # real data, real generator


def test_real_restriction_ones():
    fit = approx_l2_real(np.ones((3, 3)))
    assert fit.z == pytest.approx(1.0)
    assert fit.c == pytest.approx(3.0)


def test_real_restriction_matches_filtered_full_grid():
    rng = np.random.default_rng(16)
    X = (rng.standard_normal((4, 4)) + 0j).astype(complex)
    if abs(X[0, 0]) < abs(X[-1, -1]):
        X = flip(X, "both")  # keep the corner ordering so no pre-flip happens
    grid = GridSpec(1 / 64, 2 * np.pi / 128, restrict_real=True)
    fit = approx_l2_real(X, grid)

    def scan_real(M, include_origin):
        # oracle: filter the full lattice down to the real axis
        best, best_z = -1.0, None
        for _, zs in GridSpec(1 / 64, 2 * np.pi / 128).iter_rows():
            for z in zs:
                if abs(z.imag) > 1e-15 or (z == 0 and not include_origin):
                    continue
                v = naive_objective(M, z)
                if v > best:
                    best, best_z = v, z
        return best, best_z

    a, za = scan_real(X, include_origin=True)
    b, zb = scan_real(flip(X, "both"), include_origin=False)
    expected = za if a >= b else 1 / zb
    assert fit.z == pytest.approx(expected, abs=1e-12)


def test_real_grid_requires_flag():
    with pytest.raises(ValueError):
        approx_l2_real(np.ones((2, 2)), GridSpec(1 / 8, np.pi / 8))


def test_refine_improves_objective():
    X = rank1_hankel(1.0, 0.37 + 0.21j, 3, 3)  # off-lattice generator
    coarse = GridSpec(1 / 16, 2 * np.pi / 32)
    plain = approx_l2(X, coarse)
    refined = approx_l2(X, coarse, refine=True)
    assert refined.refined and not plain.refined
    assert refined.residual <= plain.residual + 1e-12
