"""Split-step solver, comoving profile evolution, and their guards."""

import numpy as np
import pytest

from cnslab import pde_sim as pde
from cnslab.catalog import dissipative_example, one_way_coupled, zero_system
from cnslab.errors import BoundaryLeak, DomainError, SubstepDivergence


def test_free_system_matches_exact_propagator():
    grid = pde.Grid.of(40.0, 1024)
    f = pde.gaussian(grid, 0.2, 1.5)
    states = pde.run(zero_system(), pde.PdeState(0.0, f, f),
                     pde.SolverConfig(dt0=5e-3, t_end=2.0, snap_start=1.0,
                                      snap_ratio=2.0))
    exact = pde.free_propagate(f, states[-1].t)
    err = np.max(np.abs(states[-1].u1.values - exact.values))
    assert err <= 1e-12


def test_splitting_is_second_order():
    grid = pde.Grid.of(40.0, 1024)
    sigma = one_way_coupled(1 / 3, 2.0)
    u1 = pde.gaussian(grid, 0.2, 1.5)
    u2 = pde.gaussian(grid, 0.15, 1.0, center=0.3)

    def endpoint(dt):
        states = pde.run(sigma, pde.PdeState(0.0, u1, u2),
                         pde.SolverConfig(dt0=dt, t_end=1.0, snap_start=0.5,
                                          snap_ratio=2.0))
        return np.concatenate([states[-1].u1.values, states[-1].u2.values])

    ref = endpoint(0.0025)
    ratio = (np.max(np.abs(endpoint(0.04) - ref))
             / np.max(np.abs(endpoint(0.02) - ref)))
    assert 3.0 <= ratio <= 5.5, f"order-2 halving ratio off: {ratio}"


def test_box_mass_conserved():
    grid = pde.Grid.of(40.0, 1024)
    sigma = dissipative_example()
    u1 = pde.gaussian(grid, 0.2, 1.5)
    u2 = pde.gaussian(grid, 0.15, 1.0)
    states = pde.run(sigma, pde.PdeState(0.0, u1, u2),
                     pde.SolverConfig(dt0=5e-3, t_end=2.0, snap_start=1.0,
                                      snap_ratio=2.0))
    # this system's kernel quadratic is |u1|^2 - |u2|^2
    q0 = u1.l2() ** 2 - u2.l2() ** 2
    qt = states[-1].u1.l2() ** 2 - states[-1].u2.l2() ** 2
    assert abs(qt - q0) <= 1e-10 * max(1.0, abs(q0))


def test_kernel_functional_is_the_grid_integral():
    grid = pde.Grid.of(40.0, 1024)
    u1 = pde.gaussian(grid, 0.2, 1.5)
    u2 = pde.gaussian(grid, 0.15, 1.0)
    state = pde.PdeState(0.0, u1, u2)
    direct = float(np.sum(np.abs(u1.values) ** 2
                          - np.abs(u2.values) ** 2) * grid.dx)
    assert abs(pde.kernel_functional(state, (1.0, 0.0, -1.0)) - direct) == 0.0


def test_profile_run_of_free_system_freezes_spectrum():
    # with no nonlinearity w(t) = FT of the data, for all t: the hop,
    # the comoving stepping, and the lens change of frame all cancel
    grid = pde.Grid.of(60.0, 4096)
    amplitude, width = 0.25, 1.2
    u1 = pde.gaussian(grid, amplitude, width)
    series = pde.run_profile(zero_system(), pde.PdeState(0.0, u1, u1),
                             pde.ProfileConfig(t_end=100.0, snap_start=10.0,
                                               snap_ratio=1.6))
    hat = amplitude * width * np.exp(-0.5 * width ** 2 * series.grid.x ** 2)
    for w in series.w1:
        assert np.max(np.abs(w.values - hat)) <= 1e-9


def test_profile_norms_series_shape():
    grid = pde.Grid.of(60.0, 2048)
    u1 = pde.gaussian(grid, 0.1, 2.0)
    series = pde.run_profile(one_way_coupled(1 / 3, 2.0),
                             pde.PdeState(0.0, u1, u1),
                             pde.ProfileConfig(t_end=40.0, snap_start=10.0,
                                               snap_ratio=1.6))
    norms = series.norms()
    for key in ("t", "w1_linf", "w2_linf", "w1_l2", "w2_l2",
                "sqrt_t_u1_linf", "sqrt_t_u2_linf"):
        assert key in norms
        assert len(norms[key]) == len(series.times)
    sup = np.array(series.psi_sup)
    assert sup.shape == (len(series.times), 2)
    # psi is the sqrt(t)-rescaled solution
    assert np.allclose(sup[:, 0], norms["sqrt_t_u1_linf"])


def test_pointwise_blowup_trips_guard():
    grid = pde.Grid.of(40.0, 1024)
    sigma = dissipative_example()
    f = pde.gaussian(grid, 3.0, 1.5)
    ray = np.exp(0.25j * np.pi)
    amplified = pde.Field.of(grid, f.values * ray)
    with pytest.raises(SubstepDivergence):
        pde.run(sigma, pde.PdeState(0.0, f, amplified),
                pde.SolverConfig(dt0=2e-3, t_end=5.0, snap_start=1.0,
                                 snap_ratio=2.0))


def test_dispersion_past_the_rail_trips_guard():
    grid = pde.Grid.of(15.0, 512)
    f = pde.gaussian(grid, 0.1, 1.0)
    with pytest.raises(BoundaryLeak):
        pde.run(zero_system(), pde.PdeState(0.0, f, f),
                pde.SolverConfig(dt0=5e-3, t_end=30.0, snap_start=1.0,
                                 snap_ratio=1.5))


def test_state_to_frame_requires_unit_time():
    grid = pde.Grid.of(40.0, 1024)
    f = pde.gaussian(grid, 0.1, 1.0)
    with pytest.raises(DomainError):
        pde.state_to_frame(pde.PdeState(2.0, f, f))


def test_dual_grid_geometry():
    grid = pde.Grid.of(60.0, 4096)
    dual = grid.dual()
    assert np.isclose(dual.dx * grid.dx * grid.N, 2 * np.pi)
    assert len(dual.x) == grid.N
    # frequencies come out centered like the spatial nodes
    assert abs(dual.x[0] + dual.x[-1]) <= dual.dx
