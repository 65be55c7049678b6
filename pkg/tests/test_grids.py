import numpy as np
import pytest

from hankelfit.grids import GridSpec


def all_points(grid, skip_origin=False):
    return np.concatenate([zs for _, zs in grid.iter_rows(skip_origin=skip_origin)])


def test_step_validation():
    with pytest.raises(ValueError):
        GridSpec(0.0, 0.1)
    with pytest.raises(ValueError):
        GridSpec(1.5, 0.1)
    with pytest.raises(ValueError):
        GridSpec(0.1, 7.0)


def test_lattice_is_nested_under_halving():
    g = GridSpec(1 / 8, 2 * np.pi / 16)
    fine = GridSpec(g.delta_rho / 2, g.delta_phi / 2)
    coarse_pts = set(map(complex, all_points(g)))
    fine_pts = set(map(complex, all_points(fine)))
    assert coarse_pts <= fine_pts


def test_origin_is_a_single_point():
    g = GridSpec(1 / 4, np.pi / 2)
    pts = all_points(g)
    assert np.count_nonzero(pts == 0) == 1
    assert np.count_nonzero(all_points(g, skip_origin=True) == 0) == 0


def test_boundary_toggle():
    with_b = GridSpec(1 / 4, np.pi / 2)
    without = GridSpec(1 / 4, np.pi / 2, include_boundary=False)
    assert np.abs(all_points(with_b)).max() == pytest.approx(1.0)
    assert np.abs(all_points(without)).max() < 1.0


def test_boundary_appended_for_non_divisor_step():
    g = GridSpec(0.3, np.pi)
    rho = g.rho_values()
    assert rho[-1] == 1.0  # ring at the rim even though 0.3 does not divide 1
    assert np.all(np.diff(rho) > 0)


def test_traversal_is_radius_major():
    g = GridSpec(1 / 4, np.pi / 2)
    radii = [np.abs(zs[0]) for _, zs in g.iter_rows()]
    assert radii == sorted(radii)
    # angle order inside one ring is ascending
    _, ring = list(g.iter_rows())[-1]
    angles = np.angle(ring) % (2 * np.pi)
    assert np.all(np.diff(angles) > 0)


def test_real_restriction_points_are_exactly_real():
    g = GridSpec(1 / 8, np.pi / 4, restrict_real=True)
    pts = all_points(g)
    assert np.all(pts.imag == 0.0)
    assert set(np.round(np.abs(pts), 12)) <= {round(k / 8, 12) for k in range(9)}


def test_n_points_matches_iteration():
    for g in (GridSpec(1 / 8, 2 * np.pi / 16), GridSpec(1 / 8, 2 * np.pi / 16, restrict_real=True)):
        assert g.n_points() == all_points(g).size
        assert g.n_points(skip_origin=True) == all_points(g, skip_origin=True).size
