"""Pinned acceptance experiments.

Every numbered experiment the package is accepted against lives here as one
check_N function with frozen parameters: sample counts, seeds, grids, time
windows, and tolerances.  The accept CLI command and the acceptance test
suite both call these functions, so a recipe cannot drift between the two.

All randomness flows through numpy Generators seeded per experiment, making
every run bit-reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import degrees, log, pi, sqrt

import numpy as np

from . import asymptotics as asym
from . import pde_sim as pde
from .catalog import (decoupling_example, dissipative_example, free_forced,
                      one_way_coupled, zero_system)
from .classification import canonicalize, canonicalize_rank0
from .conservation import mass_like_kernel
from .errors import CnslabError
from .ode_sim import (OdeConfig, check_conservation, cubic_terms, gauge_strip,
                      imag_cross_rate_residual, integrate, stripped_system)
from .system_algebra import (CubicSystem, MatrixKernelRep, UnknownChange,
                             discriminant_sign, from_rep, induced_matrix,
                             mat3_maxabs, mat3_mul, mat3_tr, rank_c, to_rep,
                             transform, transform_system)

GRID_L = 60.0
GRID_N = 4096


@dataclass(frozen=True)
class CheckLine:
    """One asserted quantity inside an experiment."""

    label: str
    value: float
    bound: float
    ok: bool
    cmp: str = "<="

    def render(self) -> str:
        return "%s  %s: %.4g (%s %.4g)" % (
            "PASS" if self.ok else "FAIL", self.label, self.value,
            self.cmp, self.bound)


@dataclass(frozen=True)
class ExperimentResult:
    index: int
    title: str
    lines: tuple
    notes: tuple
    elapsed: float

    @property
    def passed(self) -> bool:
        return all(line.ok for line in self.lines)

    def summary(self) -> str:
        return "experiment %d %s (%.1f s): %s" % (
            self.index, "PASS" if self.passed else "FAIL", self.elapsed,
            self.title)

    def render(self) -> list:
        out = [self.summary()]
        out += ["  " + line.render() for line in self.lines]
        out += ["  note: " + n for n in self.notes]
        return out

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "title": self.title,
            "passed": self.passed,
            "elapsed_s": self.elapsed,
            "checks": [{"label": c.label, "value": c.value, "bound": c.bound,
                        "cmp": c.cmp, "ok": c.ok} for c in self.lines],
            "notes": list(self.notes),
        }


def _le(label, value, bound) -> CheckLine:
    value = float(value)
    return CheckLine(label, value, float(bound), value <= float(bound))


def _ge(label, value, bound) -> CheckLine:
    value = float(value)
    return CheckLine(label, value, float(bound), value >= float(bound), ">=")


def _flag(label, ok) -> CheckLine:
    return CheckLine(label, 1.0 if ok else 0.0, 1.0, bool(ok), "==")


def _angle_deg(z, w) -> float:
    """Unsigned angle between two complex numbers, in degrees."""
    if z == 0 or w == 0:
        return 180.0
    return abs(degrees(np.angle(complex(z) / complex(w))))


# ---------------------------------------------------------------------------
# random sample builders


def _rand_fraction(rng, num=9, den=9) -> Fraction:
    return Fraction(int(rng.integers(-num, num + 1)),
                    int(rng.integers(1, den + 1)))


def _rand_rational_system(rng) -> CubicSystem:
    return CubicSystem.of(tuple(_rand_fraction(rng) for _ in range(12)))


def _rand_rational_rep(rng) -> MatrixKernelRep:
    c = [[_rand_fraction(rng) for _ in range(3)] for _ in range(3)]
    return MatrixKernelRep.of(c, _rand_fraction(rng), _rand_fraction(rng),
                              _rand_fraction(rng))


def _rand_rational_change(rng) -> UnknownChange:
    # entries on the 0.1 lattice in [-2, 2]; resample until well-conditioned
    while True:
        a, b, c, d = (Fraction(int(k), 10)
                      for k in rng.integers(-20, 21, size=4))
        if abs(a * d - b * c) >= Fraction(1, 2):
            return UnknownChange.of(((a, b), (c, d)))


def _rand_float_change(rng) -> UnknownChange:
    while True:
        a, b, c, d = rng.uniform(-2.0, 2.0, size=4)
        if abs(a * d - b * c) >= 0.5:
            return UnknownChange.of(((a, b), (c, d)))


def _rand_rank_le1_system(rng, force_rank0=False) -> CubicSystem:
    pqr = tuple(rng.normal(scale=1.0, size=3))
    if force_rank0:
        c = ((0.0,) * 3,) * 3
    else:
        nu = rng.normal(size=3)
        d = rng.normal(size=3)
        c = tuple(tuple(float(nu[i] * d[j]) for j in range(3))
                  for i in range(3))
    return from_rep(MatrixKernelRep.of(c, *pqr))


def _prescribed_kernel_system(rng, dim) -> CubicSystem:
    """Random system whose matrix kills a known dim-dimensional subspace."""
    v = np.linalg.qr(rng.normal(size=(3, dim)))[0]
    proj = np.eye(3) - v @ v.T
    c = rng.normal(size=(3, 3)) @ proj
    c = c / max(1.0, float(np.max(np.abs(c))))
    pqr = tuple(0.5 * rng.normal(size=3))
    return from_rep(MatrixKernelRep.of(tuple(map(tuple, c)), *pqr))


def _gauss_hat(amplitude, width, xi) -> np.ndarray:
    """Closed-form unitary Fourier transform of the gaussian data family."""
    return amplitude * width * np.exp(-0.5 * width ** 2 * xi ** 2) + 0j


# ---------------------------------------------------------------------------
# experiments 1-3, 10: algebra


def check_1(seed=11) -> ExperimentResult:
    """Representation round trip on random rational systems plus fixtures."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    mismatches = 0
    for _ in range(1000):
        sigma = _rand_rational_system(rng)
        back = from_rep(to_rep(sigma))
        if tuple(back.c) != tuple(sigma.c):
            mismatches += 1
    rep2 = to_rep(dissipative_example())
    rep3 = to_rep(decoupling_example())
    lines = (
        _le("coefficient mismatches over 1000 rational systems", mismatches, 0),
        _flag("dissipative example matrix ((0,1,0),(1,0,1),(0,1,0))",
              rep2.c_matrix == ((0, 1, 0), (1, 0, 1), (0, 1, 0))),
        _flag("decoupling example matrix ((3,0,1),(0,2,0),(1,0,3))",
              rep3.c_matrix == ((3, 0, 1), (0, 2, 0), (1, 0, 3))),
        _flag("decoupling example kernel part (0,0,0)",
              tuple(rep3.pqr) == (0, 0, 0)),
        _le("runtime [s]", time.time() - t0, 1.0),
    )
    return ExperimentResult(1, "representation round trip", lines, (),
                            time.time() - t0)


def check_2(seed=12) -> ExperimentResult:
    """Invariants of the induced change-of-unknowns action."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    bad_rank = bad_sign = bad_exact_inv = 0
    worst_tr = worst_inv = 0.0
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    for _ in range(1000):
        rep = _rand_rational_rep(rng)
        m = _rand_rational_change(rng)
        moved = transform(rep, m)
        if rank_c(rep.as_float()) != rank_c(moved.as_float()):
            bad_rank += 1
        if discriminant_sign(rep) != discriminant_sign(moved):
            bad_sign += 1
        tr0 = float(mat3_tr(rep.c_matrix))
        tr1 = float(mat3_tr(moved.c_matrix))
        expect = tr0 / float(m.det)
        worst_tr = max(worst_tr, abs(tr1 - expect) / max(1.0, abs(expect)))
        d, _ = induced_matrix(m)
        d_inv, _ = induced_matrix(m.inverse())
        if mat3_mul(d, d_inv) != eye:
            bad_exact_inv += 1
        prod = np.array(mat3_mul(d, d_inv), dtype=float)
        worst_inv = max(worst_inv, float(np.max(np.abs(prod - np.eye(3)))))
    lines = (
        _le("rank changes over 1000 samples", bad_rank, 0),
        _le("discriminant sign changes (exact)", bad_sign, 0),
        _le("trace scaling tr C' = tr C / det M", worst_tr, 1e-10),
        _le("exact D(M) D(M^-1) != identity count", bad_exact_inv, 0),
        _le("float D(M) D(M^-1) - identity", worst_inv, 1e-12),
        _le("runtime [s]", time.time() - t0, 5.0),
    )
    return ExperimentResult(2, "change-of-unknowns invariants", lines, (),
                            time.time() - t0)


def check_3(seed=13) -> ExperimentResult:
    """Canonicalization: witness soundness, idempotence, orbit invariance."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_witness = worst_idem = worst_orbit = 0.0
    for i in range(1000):
        sigma = _rand_rank_le1_system(rng, force_rank0=(i % 10 == 9))
        cf = canonicalize(sigma)
        rep = to_rep(sigma).as_float()
        scale = max(1.0, float(mat3_maxabs(cf.representative.c_matrix)),
                    max(abs(float(x)) for x in cf.representative.pqr))

        repro = transform(rep, cf.witness)
        dev = max(
            float(np.max(np.abs(
                np.array(repro.c_matrix, dtype=float)
                - np.array(cf.representative.c_matrix, dtype=float)))),
            max(abs(float(a) - float(b))
                for a, b in zip(repro.pqr, cf.representative.pqr)))
        worst_witness = max(worst_witness, dev / scale)

        again = canonicalize(from_rep(cf.representative))
        dev = max(
            float(np.max(np.abs(
                np.array(again.representative.c_matrix, dtype=float)
                - np.array(cf.representative.c_matrix, dtype=float)))),
            max(abs(float(a) - float(b))
                for a, b in zip(again.representative.pqr,
                                cf.representative.pqr)))
        worst_idem = max(worst_idem, dev / scale)

        moved = canonicalize(transform_system(sigma, _rand_float_change(rng)))
        dev = max(
            float(np.max(np.abs(
                np.array(moved.representative.c_matrix, dtype=float)
                - np.array(cf.representative.c_matrix, dtype=float)))),
            max(abs(float(a) - float(b))
                for a, b in zip(moved.representative.pqr,
                                cf.representative.pqr)))
        worst_orbit = max(worst_orbit, dev / scale)

    free_label = canonicalize(free_forced(1))
    log_member = canonicalize(one_way_coupled(Fraction(1, 3), 1))
    lines = (
        _le("witness reproduction error", worst_witness, 1e-8),
        _le("idempotence deviation", worst_idem, 1e-7),
        _le("orbit invariance deviation", worst_orbit, 1e-7),
        _flag("free-driven example lands in Z7 x K7",
              free_label.label.startswith("Z7")
              and free_label.class_id.j == 7),
        _flag("coupled log-case example lands in Z4 x K4",
              log_member.label.startswith("Z4")
              and log_member.class_id.j == 4),
        _le("runtime [s]", time.time() - t0, 30.0),
    )
    notes = ("free-driven example: %s" % free_label.label,
             "coupled log-case example: %s" % log_member.label)
    return ExperimentResult(3, "rank-one canonicalization", lines, notes,
                            time.time() - t0)


def check_10() -> ExperimentResult:
    """Signature table of the kernel-part form against an inertia oracle."""
    t0 = time.time()
    samples = {
        "posdef": (2.0, 0.3, 1.0),
        "negdef": (-2.0, 0.3, -1.0),
        "indef": (1.0, 0.2, -2.0),
        "indef_antidiag": (0.0, 1.5, 0.0),
        "rank1_pos_p": (1.0, 1.0, 1.0),
        "rank1_pos_0": (0.0, 0.0, 2.0),
        "rank1_neg_p": (-1.0, 1.0, -1.0),
        "rank1_neg_0": (0.0, 0.0, -3.0),
        "zero": (0.0, 0.0, 0.0),
    }
    zero_c = ((0.0,) * 3,) * 3
    targets = set()
    bad_oracle = []
    worst_witness = 0.0
    for name, pqr in samples.items():
        target, witness, _ = canonicalize_rank0(pqr)
        targets.add(target)
        # independent oracle: Sylvester inertia of [[p,q],[q,r]] plus the
        # tie-break that a rank-one form keeps the axis a nonzero p sits on
        p, q, r = pqr
        mu = np.linalg.eigvalsh(np.array([[p, q], [q, r]]))
        scale = max(1.0, float(np.max(np.abs(mu))))
        n_pos = int(np.sum(mu > 1e-9 * scale))
        n_neg = int(np.sum(mu < -1e-9 * scale))
        if n_pos == 2:
            expect = (1, 0, 1)
        elif n_neg == 2:
            expect = (-1, 0, -1)
        elif n_pos == 1 and n_neg == 1:
            expect = (1, 0, -1)
        elif n_pos == 1:
            expect = (1, 0, 0) if abs(p) > 1e-9 * scale else (0, 0, 1)
        elif n_neg == 1:
            expect = (-1, 0, 0) if abs(p) > 1e-9 * scale else (0, 0, -1)
        else:
            expect = (0, 0, 0)
        if target != expect:
            bad_oracle.append(name)
        moved = transform(MatrixKernelRep.of(zero_c, *pqr), witness)
        worst_witness = max(worst_witness,
                            max(abs(float(a) - float(b))
                                for a, b in zip(moved.pqr, target)))
    lines = (
        _le("patterns disagreeing with the inertia oracle",
            len(bad_oracle), 0),
        _ge("distinct representatives reached", len(targets), 8),
        _le("distinct representatives reached (upper)", len(targets), 8),
        _le("witness maps sample onto representative", worst_witness, 1e-9),
        _le("runtime [s]", time.time() - t0, 1.0),
    )
    notes = () if not bad_oracle else ("oracle disagrees on: %s"
                                       % ", ".join(bad_oracle),)
    return ExperimentResult(10, "kernel-part signature table", lines, notes,
                            time.time() - t0)


# ---------------------------------------------------------------------------
# experiment 4: ODE conservation


def check_4(seed=14) -> ExperimentResult:
    t0 = time.time()
    rng = np.random.default_rng(seed)
    worst_drift = worst_rate = worst_strip = 0.0
    config = OdeConfig(0.0, 10.0)
    for i in range(100):
        sigma = _prescribed_kernel_system(rng, 1 + (i % 2))
        kernel = mass_like_kernel(to_rep(sigma))
        re, im = rng.normal(size=(2, 2))
        alpha0 = (0.1 * complex(re[0], im[0]), 0.1 * complex(re[1], im[1]))
        traj = integrate(sigma, alpha0, config)
        for quad in kernel:
            worst_drift = max(worst_drift, check_conservation(traj, quad))
        worst_rate = max(worst_rate, imag_cross_rate_residual(sigma, traj))
        gauged = gauge_strip(sigma, traj)
        plain = integrate(stripped_system(sigma), alpha0, config)
        for t in np.linspace(0.5, 10.0, 20):
            a = gauged.at(float(t))
            b = plain.at(float(t))
            worst_strip = max(worst_strip, abs(a[0] - b[0]), abs(a[1] - b[1]))
    lines = (
        _le("kernel quadratic drift over t in [0,10]", worst_drift, 1e-8),
        _le("d/dt Im(conj(u1) u2) vs quarter-form rate", worst_rate, 1e-6),
        _le("gauge-strip vs stripped-system trajectory", worst_strip, 1e-7),
        _le("runtime [s]", time.time() - t0, 60.0),
    )
    return ExperimentResult(4, "ODE conservation identities", lines, (),
                            time.time() - t0)


# ---------------------------------------------------------------------------
# experiment 5: PDE solver baseline


def check_5() -> ExperimentResult:
    t0 = time.time()
    grid = pde.Grid.of(GRID_L, GRID_N)
    sigma = one_way_coupled(1 / 3, 2.0)
    u1 = pde.gaussian(grid, 0.1, 2.0)
    u2 = pde.gaussian(grid, 0.1, 1.5, center=0.5)

    def endpoint(dt):
        states = pde.run(sigma, pde.PdeState(0.0, u1, u2),
                         pde.SolverConfig(dt0=dt, t_end=2.0, snap_start=1.0,
                                          snap_ratio=1.25))
        last = states[-1]
        return np.concatenate([last.u1.values, last.u2.values])

    ref = endpoint(0.0025)
    err_coarse = float(np.max(np.abs(endpoint(0.02) - ref)))
    err_fine = float(np.max(np.abs(endpoint(0.01) - ref)))
    ratio = err_coarse / err_fine

    free0 = pde.gaussian(grid, 0.1, 2.0)
    states = pde.run(zero_system(), pde.PdeState(0.0, free0, free0),
                     pde.SolverConfig(dt0=5e-3, t_end=10.0, snap_start=5.0,
                                      snap_ratio=1.25))
    exact = pde.free_propagate(free0, states[-1].t)
    free_err = float(np.max(np.abs(states[-1].u1.values - exact.values)))

    def kernel_drift(l6):
        sys_k = one_way_coupled(1 / 3, l6)
        # the functional is an integral over the periodic box, so wrap-around
        # cannot bias it; the boundary rail only protects pointwise profile
        # reads, which this run never does.  by t=100 the driven component
        # has picked up enough momentum from the coupling-phase gradient to
        # push ~1e-5 of the mass past 0.9 L, so the rail is left at a pure
        # sanity level here
        wide1 = pde.gaussian(grid, 0.1, 10.0)
        wide2 = pde.gaussian(grid, 0.1, 8.0)
        snaps = pde.run(sys_k, pde.PdeState(0.0, wide1, wide2),
                        pde.SolverConfig(dt0=0.01, t_end=100.0,
                                         snap_start=10.0, snap_ratio=1.25,
                                         boundary_guard=1e-3))
        kernel = mass_like_kernel(to_rep(sys_k))
        vectors = sorted(tuple(float(x) for x in quad.abc)
                         for quad in kernel)
        start = pde.PdeState(0.0, wide1, wide2)
        worst = 0.0
        for quad in kernel:
            q0 = pde.kernel_functional(start, quad.abc)
            for st in snaps:
                qt = pde.kernel_functional(st, quad.abc)
                worst = max(worst, abs(qt - q0) / abs(q0))
        return worst, vectors

    drift_generic, vec_generic = kernel_drift(2.0)
    drift_log, vec_log = kernel_drift(1.0)

    lines = (
        _ge("halving-step error ratio (order 2)", ratio, 3.2),
        _le("halving-step error ratio (order 2)", ratio, 4.8),
        _le("free-system endpoint error at t=10", free_err, 1e-9),
        _flag("generic coupling conserves exactly (1,0,0)",
              vec_generic == [(1.0, 0.0, 0.0)]),
        _flag("log-case coupling conserves (0,1,0) and (1,0,0)",
              vec_log == [(0.0, 1.0, 0.0), (1.0, 0.0, 0.0)]),
        _le("mass-functional relative drift over [0,100], generic",
            drift_generic, 1e-6),
        _le("mass-functional relative drift over [0,100], log case",
            drift_log, 1e-6),
        _le("runtime [s]", time.time() - t0, 300.0),
    )
    notes = ("error ratio %.3f (coarse %.3e / fine %.3e)"
             % (ratio, err_coarse, err_fine),)
    return ExperimentResult(5, "PDE solver baseline", lines, notes,
                            time.time() - t0)


# ---------------------------------------------------------------------------
# experiments 6-8: asymptotic theorems at desk scale


def _profile_run(sigma, u1, u2, t_end):
    grid = u1.grid
    return pde.run_profile(
        sigma, pde.PdeState(0.0, u1, u2),
        pde.ProfileConfig(t_end=t_end, ds=2e-3, snap_start=10.0,
                          snap_ratio=1.25))


def check_6() -> ExperimentResult:
    """Two-mode rotation of the driven component at lambda_c = sqrt(5)."""
    t0 = time.time()
    grid = pde.Grid.of(GRID_L, GRID_N)
    l1 = 1 / 3
    data = pde.gaussian(grid, 0.1, 3.0)
    series = _profile_run(one_way_coupled(l1, 2.0), data, data, 3000.0)
    w1_field, _ = asym.extract_scattering_data(series, l1)
    i0 = asym.pick_xi0(series)
    beta = asym.beta_series(series, w1_field, l1, i0)
    times = np.asarray(series.times)
    window = times >= 100.0
    predicted = asym.lambda_c(l1, 2.0) * abs(w1_field.values[i0]) ** 2
    fit = asym.fit_two_phasor(times[window], beta[window], 4 * predicted,
                              xi0=float(series.grid.x[i0]))
    sup = np.array(series.psi_sup)
    late = times >= 50.0
    var1 = float(sup[late, 0].max() / sup[late, 0].min())
    var2 = float(sup[late, 1].max() / sup[late, 1].min())
    lines = (
        _le("relative rate error |omega - lambda_c |W1|^2| / predicted",
            abs(fit.omega - predicted) / predicted, 0.10),
        _le("sup-norm variation sqrt(t)||u1||_inf over [50,3000]", var1, 2.0),
        _le("sup-norm variation sqrt(t)||u2||_inf over [50,3000]", var2, 2.0),
        _le("runtime [s]", time.time() - t0, 900.0),
    )
    notes = ("omega fit %.5f vs predicted %.5f at xi0=%.3f; |A|=%.3f |B|=%.3f"
             % (fit.omega, predicted, series.grid.x[i0],
                abs(fit.amp_minus), abs(fit.amp_plus)),)
    return ExperimentResult(6, "two-mode rotation rate", lines, notes,
                            time.time() - t0)


def check_7() -> ExperimentResult:
    """Log-amplitude growth of the driven component at the degenerate ratio."""
    t0 = time.time()
    grid = pde.Grid.of(GRID_L, GRID_N)
    l1 = 1 / 3
    data = pde.gaussian(grid, 0.1, 3.0)
    series = _profile_run(one_way_coupled(l1, 1.0), data, data, 3000.0)
    w1_field, _ = asym.extract_scattering_data(series, l1)
    i0 = asym.pick_xi0(series)
    times = np.asarray(series.times)
    window = times >= 50.0

    sup2 = np.array([s[1] for s in series.psi_sup])
    r_sq = asym.affine_r_squared(times[window], sup2[window])

    compensated = asym.beta_series(series, w1_field, l1, i0)
    slope, intercept = asym.fit_log_slope(times[window], compensated[window])
    w1_val = w1_field.values[i0]
    predicted = -6j * l1 * w1_val * np.real(w1_val * np.conj(intercept))
    angle = _angle_deg(slope, predicted)
    lines = (
        _ge("R^2 of sqrt(t)||u2||_inf against affine(log t)", r_sq, 0.95),
        _le("slope direction vs -6i l1 W1 Re[W1 conj(W2)] [deg]", angle, 15.0),
        _le("runtime [s]", time.time() - t0, 900.0),
    )
    notes = ("slope %.3g%+.3gj, predicted direction %.3g%+.3gj, "
             "magnitude ratio %.3f"
             % (slope.real, slope.imag, predicted.real, predicted.imag,
                abs(slope) / abs(predicted)),)
    return ExperimentResult(7, "log-amplitude growth", lines, notes,
                            time.time() - t0)


def check_8() -> ExperimentResult:
    """Explicit slope of the freely-driven component, with quadrature oracle."""
    t0 = time.time()
    grid = pde.Grid.of(GRID_L, GRID_N)
    amplitude, width = 0.3, 1.0
    u1 = pde.gaussian(grid, amplitude, width)
    u2 = pde.Field.of(grid, np.zeros(grid.N, dtype=complex))
    series = _profile_run(free_forced(1), u1, u2, 1000.0)
    times = np.asarray(series.times)

    hat0 = _gauss_hat(amplitude, width, series.grid.x)
    pin = max(float(np.max(np.abs(w.values - hat0))) for w in series.w1)

    i0 = asym.pick_xi0(series)
    w1_val = series.w1[-1].values[i0]
    display_slope = -1j * abs(w1_val) ** 2 * w1_val
    sim_beta = np.array([w.values[i0] for w in series.w2])
    slope_sim, _ = asym.fit_log_slope(times[1:], sim_beta[1:])

    oracle = asym.forced_profile_quadrature(
        series.w1[0], times[1:], w2_init=series.w2[0],
        t_start=float(times[0]), ds=2e-3)
    orc_beta = np.array([f.values[i0] for f in oracle])
    slope_orc, _ = asym.fit_log_slope(times[1:], orc_beta)

    angle = _angle_deg(slope_sim, display_slope)
    mag_err = abs(abs(slope_sim) / abs(slope_orc) - 1.0)
    ratio = abs(slope_sim) / abs(display_slope)
    lines = (
        _le("free component pinned to its initial spectrum", pin, 1e-9),
        _le("slope direction vs -i|W1|^2 W1 [deg]", angle, 5.0),
        _le("slope magnitude vs quadrature oracle, relative", mag_err, 0.05),
        _le("runtime [s]", time.time() - t0, 600.0),
    )
    notes = ("measured slope / displayed -i|W1|^2 W1 magnitude ratio: %.3f "
             "(the asymptotic display and the profile-equation quadrature "
             "differ by this factor; both are reported, neither adjusted)"
             % ratio,)
    return ExperimentResult(8, "free-driven explicit slope", lines, notes,
                            time.time() - t0)


# ---------------------------------------------------------------------------
# experiment 9: dissipation, amplification, decoupling


def _scalar_cubic_box_run(grid, v0, sign, t_grid, dt0):
    """Strang evolution of i v_t + v_xx/2 = sign * i |v|^2 v on the box.

    The cubic kick integrates exactly: the modulus obeys a scalar Riccati
    equation and the phase is frozen, so each half-kick is closed-form.
    """
    out = []
    v = np.array(v0, dtype=complex)
    t_prev = 0.0
    for t in t_grid:
        span = t - t_prev
        steps = max(1, int(np.ceil(span / dt0)))
        h = span / steps
        for _ in range(steps):
            v = v / np.sqrt(1.0 - sign * np.abs(v) ** 2 * h)
            v = pde.free_propagate(pde.Field.of(grid, v), h).values
            v = v / np.sqrt(1.0 - sign * np.abs(v) ** 2 * h)
        t_prev = t
        out.append(v.copy())
    return out


def check_9() -> ExperimentResult:
    t0 = time.time()
    grid = pde.Grid.of(GRID_L, GRID_N)
    sigma = dissipative_example()
    f = pde.gaussian(grid, 0.3, 2.0)
    ray = np.exp(-0.25j * pi)

    series = _profile_run(sigma, f, pde.Field.of(grid, f.values * ray), 1000.0)
    mass = np.array([w1.l2() ** 2 + w2.l2() ** 2
                     for w1, w2 in zip(series.w1, series.w2)])
    times = np.asarray(series.times)
    product = mass * np.log(times)
    decreasing = bool(np.all(np.diff(mass) < 0))
    factor = float(product.max() / product.min())

    # conjugated data amplifies; its pointwise growth scale 1/(2 amp^2) ~ 5.6
    # bounds the horizon, so the monotone increase is checked on the box
    states = pde.run(sigma,
                     pde.PdeState(0.0, f, pde.Field.of(grid, f.values / ray)),
                     pde.SolverConfig(dt0=5e-3, t_end=4.0, snap_start=1.0,
                                      snap_ratio=1.25))
    mass_up = np.array([st.u1.l2() ** 2 + st.u2.l2() ** 2 for st in states])
    increasing = bool(np.all(np.diff(mass_up) > 0))

    # decoupling: v1 = u1 - i u2 and v2 = -u1 - i u2 evolve independently
    sigma3 = decoupling_example()
    coeffs = tuple(float(c) for c in sigma3.c)
    rng = np.random.default_rng(19)
    ident_err = 0.0
    for row in rng.normal(size=(5, 4)):
        a1 = complex(row[0], row[1])
        a2 = complex(row[2], row[3])
        n1, n2 = cubic_terms(coeffs, a1, a2)
        v1 = a1 - 1j * a2
        v2 = -a1 - 1j * a2
        ident_err = max(
            ident_err,
            abs((n1 - 1j * n2) - 1j * abs(v1) ** 2 * v1),
            abs((-n1 - 1j * n2) + 1j * abs(v2) ** 2 * v2))

    u1 = pde.gaussian(grid, 0.3, 1.5)
    u2 = pde.gaussian(grid, 0.2, 1.0, center=0.5)
    snaps = pde.run(sigma3, pde.PdeState(0.0, u1, u2),
                    pde.SolverConfig(dt0=5e-3, t_end=5.0, snap_start=1.0,
                                     snap_ratio=1.25))
    t_grid = [st.t for st in snaps]
    v1_ref = _scalar_cubic_box_run(grid, u1.values - 1j * u2.values, +1.0,
                                   t_grid, 5e-3)
    v2_ref = _scalar_cubic_box_run(grid, -u1.values - 1j * u2.values, -1.0,
                                   t_grid, 5e-3)
    res1 = max(float(np.max(np.abs((st.u1.values - 1j * st.u2.values) - v)))
               for st, v in zip(snaps, v1_ref))
    res2 = max(float(np.max(np.abs((-st.u1.values - 1j * st.u2.values) - v)))
               for st, v in zip(snaps, v2_ref))

    lines = (
        _flag("ray data: total mass strictly decreasing on [10,1000]",
              decreasing),
        _le("mass * log t spread factor over [10,1000]", factor, 2.0),
        _flag("conjugated ray data: total mass strictly increasing",
              increasing),
        _le("cubic decoupling identity at random points", ident_err, 1e-12),
        _le("decoupled evolution residual, first combination", res1, 1e-6),
        _le("decoupled evolution residual, second combination", res2, 1e-6),
        _le("runtime [s]", time.time() - t0, 600.0),
    )
    notes = ("mass %.4f -> %.4f over [10,1000]; mass*log t in [%.3f, %.3f]"
             % (mass[0], mass[-1], product.min(), product.max()),)
    return ExperimentResult(9, "dissipation, amplification, decoupling",
                            lines, notes, time.time() - t0)


# ---------------------------------------------------------------------------
# registry


CHECKS = {
    1: check_1,
    2: check_2,
    3: check_3,
    4: check_4,
    5: check_5,
    6: check_6,
    7: check_7,
    8: check_8,
    9: check_9,
    10: check_10,
}

SUITES = {
    "algebra": (1, 2, 3, 10),
    "ode": (4,),
    "pde-quick": (5, 9),
    "full": tuple(range(1, 11)),
}


def run_suite(name, jobs=1):
    """Run a named suite; returns the list of ExperimentResult."""
    if name not in SUITES:
        raise CnslabError("unknown suite %r (choose from %s)"
                          % (name, ", ".join(sorted(SUITES))))
    indices = SUITES[name]
    if jobs > 1 and len(indices) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=min(jobs, len(indices))) as pool:
            return list(pool.map(_run_one, indices))
    return [CHECKS[i]() for i in indices]


def _run_one(index):
    return CHECKS[index]()
