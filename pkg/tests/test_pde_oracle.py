import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from groovekit.errors import DomainError, StabilityError
from groovekit.fitting import load_profile
from groovekit.pde_oracle import (
    GridSpec, RootBoundaryCondition, measure_depth_exponent, solve, suggested_length,
    write_snapshots,
)
from groovekit.solutions import PhysicalParams, amram_solution, groove_depth, mullins_solution

P = PhysicalParams(1.0, 0.2)


def _run(kind, n, length=24.0, t_end=1.0, params=P, **kw):
    dx = length / n
    grid = GridSpec(length, n, dt=dx / 10.0, t_end=t_end, **kw)
    return solve(grid, RootBoundaryCondition.for_params(kind, params), params)


@pytest.mark.parametrize("kind,exact", [("mullins", mullins_solution), ("amram", amram_solution)])
def test_profile_matches_similarity_solution(kind, exact):
    res = _run(kind, 480)
    err = np.max(np.abs(res.profiles[-1] - exact(P, 1.0, res.x)))
    assert err < 1e-4


def test_second_order_convergence():
    errs = []
    for n in (120, 240, 480):
        res = _run("mullins", n)
        errs.append(np.max(np.abs(res.profiles[-1] - mullins_solution(P, 1.0, res.x))))
    orders = [math.log2(errs[k] / errs[k + 1]) for k in range(2)]
    assert min(orders) > 1.8


def test_depth_law_from_the_solver():
    res = _run("mullins", 480, t_end=4.0)
    keep = res.depth_t >= 0.5
    pairs = np.column_stack([res.depth_t[keep], res.depth[keep]])
    assert measure_depth_exponent(pairs) == pytest.approx(0.25, abs=0.005)
    assert res.depth[-1] == pytest.approx(groove_depth(P, 4.0), rel=1e-3)


def test_zero_slope_stays_flat(quiet):
    params = PhysicalParams(1.0, 0.0)
    res = _run("mullins", 96, params=params)
    assert np.all(res.profiles == 0.0)


def test_mass_is_conserved_on_a_long_domain():
    # zero-flux root and a far end where the profile is negligible
    res = _run("mullins", 360, length=36.0)
    assert np.max(np.abs(res.mass_change)) < 1e-12


def test_mass_change_is_the_far_field_flux():
    res = _run("mullins", 240, length=12.0)
    np.testing.assert_allclose(res.mass_change, -res.far_flux, atol=1e-12)


def test_explicit_scheme_stability_guard():
    grid = GridSpec(10.0, 100, dt=1e-3, t_end=0.01, scheme_theta=0.0)
    with pytest.raises(StabilityError):
        solve(grid, RootBoundaryCondition("mullins", slope=0.1), P)


def test_explicit_scheme_below_bound_runs():
    dx = 0.1
    dt = dx ** 4 / 8.5
    grid = GridSpec(6.4, 64, dt=dt, t_end=40 * dt, scheme_theta=0.0)
    res = solve(grid, RootBoundaryCondition("mullins", slope=0.1), P)
    assert np.all(np.isfinite(res.profiles))


def test_general_condition_reproduces_mullins():
    a = solve(GridSpec(24.0, 240, 0.01, 1.0), RootBoundaryCondition("mullins", slope=0.1), P)
    b = solve(GridSpec(24.0, 240, 0.01, 1.0),
              RootBoundaryCondition("general", slope=0.1, third_deriv=0.0), P)
    np.testing.assert_array_equal(a.profiles, b.profiles)


def test_snapshot_times():
    grid = GridSpec(24.0, 240, 0.01, 1.0)
    res = solve(grid, RootBoundaryCondition("amram", slope=0.1), P, output_times=[0.25, 0.5, 1.0])
    np.testing.assert_allclose(res.times, [0.25, 0.5, 1.0])
    assert res.profiles.shape == (3, 241)


@pytest.mark.parametrize("kwargs", [
    dict(domain_length=0.0, n_cells=100, dt=0.1, t_end=1.0),
    dict(domain_length=1.0, n_cells=10, dt=0.1, t_end=1.0),
    dict(domain_length=1.0, n_cells=100, dt=0.0, t_end=1.0),
    dict(domain_length=1.0, n_cells=100, dt=2.0, t_end=1.0),
    dict(domain_length=1.0, n_cells=100, dt=0.1, t_end=1.0, scheme_theta=1.5),
    dict(domain_length=1.0, n_cells=100, dt=0.1, t_end=1.0, startup_steps=3),
])
def test_grid_validation(kwargs):
    with pytest.raises(DomainError):
        GridSpec(**kwargs)


def test_boundary_condition_validation():
    with pytest.raises(DomainError):
        RootBoundaryCondition("mullins")
    with pytest.raises(DomainError):
        RootBoundaryCondition("general", slope=0.1)
    with pytest.raises(DomainError):
        RootBoundaryCondition("neumann", slope=0.1)
    bc = RootBoundaryCondition("amram", slope=0.1)
    assert bc.curvature == 0.0 and bc.third_deriv is None


@given(p=st.floats(0.05, 2.0), c=st.floats(0.1, 10.0))
def test_depth_exponent_of_exact_power_law(p, c):
    t = np.geomspace(0.1, 10.0, 12)
    assert measure_depth_exponent(np.column_stack([t, -c * t ** p])) == pytest.approx(p, abs=1e-12)


def test_depth_exponent_input_checks():
    with pytest.raises(DomainError):
        measure_depth_exponent([(1.0, 1.0)])
    with pytest.raises(DomainError):
        measure_depth_exponent([(0.0, 1.0), (1.0, 2.0)])
    with pytest.raises(DomainError):
        measure_depth_exponent([(1.0, 0.0), (2.0, 2.0)])


def test_suggested_length_scales():
    assert suggested_length(1.0, 1.0) == 24.0
    assert suggested_length(16.0, 1.0) == 48.0


def test_snapshots_round_trip_through_loader(tmp_path):
    grid = GridSpec(24.0, 240, 0.01, 1.0)
    res = solve(grid, RootBoundaryCondition("mullins", slope=0.1), P, output_times=[0.5, 1.0])
    paths = write_snapshots(res, str(tmp_path), B_hint=1.0)
    assert len(paths) == 2
    prof = load_profile(paths[-1])
    assert prof.anneal_time == 1.0 and prof.B_hint == 1.0
    assert prof.x.size == 2 * 240 + 1
    np.testing.assert_array_equal(prof.y[240:], res.profiles[-1])
    cropped = write_snapshots(res, str(tmp_path / "c"), B_hint=1.0, max_u=6.0)
    assert np.max(np.abs(load_profile(cropped[-1]).x)) <= 6.0
    with pytest.raises(DomainError):
        write_snapshots(res, str(tmp_path), max_u=6.0)
