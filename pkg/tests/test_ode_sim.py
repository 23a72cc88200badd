"""Flat (x-independent) reduction: integration, conservation, gauge strip."""

import cmath

import numpy as np
import pytest

from cnslab.catalog import dissipative_example, one_way_coupled
from cnslab.conservation import mass_like_kernel
from cnslab.errors import StepFailure
from cnslab.ode_sim import (OdeConfig, check_conservation, cubic_terms,
                            gauge_strip, imag_cross_rate_residual, integrate,
                            scalar_cubic_solution, stripped_system, write_csv)
from cnslab.system_algebra import (CubicSystem, MatrixKernelRep, from_rep,
                                   to_rep)


def test_scalar_cubic_closed_form():
    lam, a0 = 0.7, 0.3 - 0.1j
    sigma = CubicSystem.of((lam,) + (0,) * 11)
    traj = integrate(sigma, (a0, 0.0 + 0j), OdeConfig(0.0, 5.0))
    a1, a2 = traj.final()
    assert abs(a1 - scalar_cubic_solution(lam, a0, 5.0)) <= 1e-10
    assert abs(a2) == 0.0


def test_modulus_frozen_for_real_selfcoupling():
    # i a' = lam |a|^2 a rotates the phase and keeps |a| fixed
    lam, a0 = 0.7, 0.3 - 0.1j
    expected = a0 * cmath.exp(-1j * lam * abs(a0) ** 2 * 5.0)
    assert abs(scalar_cubic_solution(lam, a0, 5.0) - expected) <= 1e-14


def test_kernel_quadratics_conserved():
    sigma = one_way_coupled(1 / 3, 1.0)
    traj = integrate(sigma, (0.1 + 0.05j, 0.08 - 0.02j), OdeConfig(0.0, 10.0))
    for quad in mass_like_kernel(to_rep(sigma)):
        assert check_conservation(traj, quad) <= 1e-10


def test_imag_cross_rate_identity():
    rng = np.random.default_rng(31)
    for _ in range(5):
        sigma = CubicSystem.of(tuple(rng.normal(scale=0.5, size=12)))
        state = 0.1 * (rng.normal(size=4) + 1j * rng.normal(size=4))
        traj = integrate(sigma, (state[0], state[1]), OdeConfig(0.0, 10.0))
        assert imag_cross_rate_residual(sigma, traj) <= 1e-6


def test_gauge_strip_removes_kernel_potential():
    # with C = 0 the whole cubic term is the gauge-removable potential,
    # so the stripped trajectory must be constant
    zero_c = ((0.0,) * 3,) * 3
    sigma = from_rep(MatrixKernelRep.of(zero_c, 0.4, -0.3, 0.2))
    alpha0 = (0.2 + 0.1j, -0.1 + 0.15j)
    traj = integrate(sigma, alpha0, OdeConfig(0.0, 10.0))
    gauged = gauge_strip(sigma, traj)
    for t in np.linspace(0.5, 10.0, 9):
        a1, a2 = gauged.at(float(t))
        assert abs(a1 - alpha0[0]) <= 1e-8
        assert abs(a2 - alpha0[1]) <= 1e-8
    assert all(float(c) == 0.0 for c in stripped_system(sigma).c)


def test_dense_output_matches_samples():
    sigma = dissipative_example()
    traj = integrate(sigma, (0.1, 0.05 + 0.02j), OdeConfig(0.0, 10.0))
    for i in (0, len(traj.times) // 2, -1):
        t = float(traj.times[i])
        a1, a2 = traj.at(t)
        assert abs(a1 - traj.states[i][0]) <= 1e-12
        assert abs(a2 - traj.states[i][1]) <= 1e-12


def test_blowup_raises_step_failure():
    # the amplifying ray of the dissipative pair blows up at t ~ 1/(2|a|^2)
    sigma = dissipative_example()
    ray = cmath.exp(0.25j * cmath.pi)
    with pytest.raises(StepFailure):
        integrate(sigma, (10.0 + 0j, 10.0 * ray), OdeConfig(0.0, 10.0))


def test_cubic_terms_is_the_vector_field():
    sigma = dissipative_example()
    coeffs = tuple(float(c) for c in sigma.c)
    n1, n2 = cubic_terms(coeffs, 0.2 + 0.1j, -0.1 + 0.3j)
    assert np.isfinite([n1.real, n1.imag, n2.real, n2.imag]).all()


def test_csv_bytes_and_resampling(tmp_path):
    sigma = one_way_coupled(1 / 3, 2.0)
    traj = integrate(sigma, (0.1, 0.05j), OdeConfig(0.0, 10.0))
    kernel = mass_like_kernel(to_rep(sigma))
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    times = [0.0, 1.0, 2.5, 10.0]
    write_csv(p1, traj, quads=kernel, times=times)
    write_csv(p2, traj, quads=kernel, times=times)
    assert p1.read_bytes() == p2.read_bytes()
    lines = p1.read_text().splitlines()
    assert lines[0].startswith("t,re_a1,im_a1,re_a2,im_a2")
    assert len(lines) == 1 + len(times)
    assert "np.float" not in lines[1]
