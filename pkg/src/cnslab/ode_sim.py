"""Pointwise cubic ODE dynamics: the spatially homogeneous system

    i a1' = c1 |a1|^2 a1 + c2 |a1|^2 a2 + c3 a1^2 conj(a2)
          + c4 a1 |a2|^2 + c5 conj(a1) a2^2 + c6 |a2|^2 a2
    i a2' = (same monomials against c7..c12)

integrated with an adaptive Runge-Kutta pair, plus the gauge transform that
removes the potential part of the nonlinearity and drift checks for
conserved quadratics.

In log_time mode the same autonomous right-hand side is integrated in
s = log t, which solves the t^{-1}-scaled system i a' = N(a)/t governing
asymptotic profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import StepFailure
from .system_algebra import CubicSystem

REL_TOL = 1e-10
ABS_TOL = 1e-12
PHASE_QUAD_TOL = 1e-10  # adaptive Simpson target for the gauge phase


def cubic_terms(c, a1, a2):
    """The two cubic polynomials (N1, N2); works on scalars or arrays."""
    c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12 = c
    m11 = np.abs(a1) ** 2
    m22 = np.abs(a2) ** 2
    a1sq_conj2 = a1 * a1 * np.conj(a2)
    conj1_a2sq = np.conj(a1) * a2 * a2
    n1 = (c1 * m11 * a1 + c2 * m11 * a2 + c3 * a1sq_conj2
          + c4 * a1 * m22 + c5 * conj1_a2sq + c6 * m22 * a2)
    n2 = (c7 * m11 * a1 + c8 * m11 * a2 + c9 * a1sq_conj2
          + c10 * a1 * m22 + c11 * conj1_a2sq + c12 * m22 * a2)
    return n1, n2


def rhs(sigma: CubicSystem, alpha):
    """Time derivative (-i times the nonlinearity) at a state (a1, a2)."""
    c = tuple(float(v) for v in sigma.c)
    n1, n2 = cubic_terms(c, alpha[0], alpha[1])
    return (-1j * n1, -1j * n2)


@dataclass(frozen=True)
class OdeConfig:
    t0: float = 0.0
    t1: float = 10.0
    rel_tol: float = REL_TOL
    abs_tol: float = ABS_TOL
    log_time: bool = False
    max_steps: int = 1_000_000

    def __post_init__(self):
        if self.log_time and not (self.t1 > self.t0 > 0):
            raise ValueError("log_time integration needs t1 > t0 > 0")


@dataclass(frozen=True)
class Trajectory:
    """Adaptive-step samples plus dense output; times are physical t."""

    times: np.ndarray
    states: np.ndarray  # shape (n, 2), complex
    log_time: bool = False
    dense: object = field(default=None, repr=False, compare=False)

    def at(self, t):
        """Dense-output state at time t (interpolated)."""
        x = np.log(t) if self.log_time else t
        y = self.dense(x)
        return (complex(y[0]), complex(y[1]))

    def final(self):
        return (complex(self.states[-1, 0]), complex(self.states[-1, 1]))


def integrate(sigma: CubicSystem, alpha0, config: OdeConfig) -> Trajectory:
    """Integrate the cubic system; deterministic for a fixed config."""
    c = tuple(float(v) for v in sigma.c)
    budget = {"nfev": 0}
    # DOP853 evaluates 12 stages per step; cap nfev to honor max_steps
    max_nfev = 16 * config.max_steps

    def f(t, y):
        budget["nfev"] += 1
        if budget["nfev"] > max_nfev:
            raise StepFailure("step budget exceeded (max_steps=%d)" % config.max_steps)
        n1, n2 = cubic_terms(c, y[0], y[1])
        return (-1j * n1, -1j * n2)

    if config.log_time:
        span = (np.log(config.t0), np.log(config.t1))
    else:
        span = (config.t0, config.t1)
    y0 = np.array([complex(alpha0[0]), complex(alpha0[1])], dtype=complex)
    res = solve_ivp(f, span, y0, method="DOP853",
                    rtol=config.rel_tol, atol=config.abs_tol,
                    dense_output=True)
    if not res.success:
        raise StepFailure(res.message)
    times = np.exp(res.t) if config.log_time else res.t
    return Trajectory(times, res.y.T.copy(), config.log_time, res.sol)


def _adaptive_simpson(f, a, b, tol, depth=24):
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    return _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth)


def _simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth):
    m = (a + b) / 2
    lm, rm = (a + m) / 2, (m + b) / 2
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6 * (fa + 4 * flm + fm)
    right = (b - m) / 6 * (fm + 4 * frm + fb)
    if depth <= 0 or abs(left + right - whole) <= 15 * tol:
        return left + right + (left + right - whole) / 15
    half = tol / 2
    return (_simpson_rec(f, a, m, fa, flm, fm, left, half, depth - 1)
            + _simpson_rec(f, m, b, fm, frm, fb, right, half, depth - 1))


@dataclass(frozen=True)
class GaugedTrajectory:
    """Trajectory of the gauged unknowns, same sample times as the source."""

    times: np.ndarray
    states: np.ndarray
    base: Trajectory
    pqr: tuple
    node_phases: np.ndarray = field(repr=False)

    def at(self, t):
        a1, a2 = self.base.at(t)
        phase = np.exp(1j * self._phi(t))
        return (a1 * phase, a2 * phase)

    def _phi(self, t):
        # accumulate from the nearest stored node to keep quadrature local
        idx = int(np.searchsorted(self.times, t))
        idx = max(0, min(idx, len(self.times) - 1))
        t_node = float(self.times[idx])
        phi = self.node_phases[idx]
        if t != t_node:
            phi += _adaptive_simpson(self._potential, t_node, t, PHASE_QUAD_TOL)
        return phi

    def _potential(self, t):
        a1, a2 = self.base.at(t)
        p, q, r = self.pqr
        return (p * abs(a1) ** 2 + 2 * q * (np.conj(a1) * a2).real
                + r * abs(a2) ** 2)


def gauge_strip(sigma: CubicSystem, traj: Trajectory) -> GaugedTrajectory:
    """Multiply by e^{i Int_0^t V}: the result solves the system whose
    potential part (p, q, r) is zero, with unchanged moduli."""
    from .system_algebra import to_rep

    rep = to_rep(sigma)
    pqr = tuple(float(x) for x in rep.pqr)

    def potential(t):
        a1, a2 = traj.at(t)
        return (pqr[0] * abs(a1) ** 2 + 2 * pqr[1] * (np.conj(a1) * a2).real
                + pqr[2] * abs(a2) ** 2)

    node_phases = [0.0]
    for i in range(1, len(traj.times)):
        step = _adaptive_simpson(potential,
                                 float(traj.times[i - 1]), float(traj.times[i]),
                                 PHASE_QUAD_TOL)
        node_phases.append(node_phases[-1] + step)
    phases = np.array(node_phases)
    states = traj.states * np.exp(1j * phases)[:, None]
    return GaugedTrajectory(traj.times, states, traj, pqr, phases)


def stripped_system(sigma: CubicSystem) -> CubicSystem:
    """The same matrix part with (p, q, r) = (0, 0, 0)."""
    from .system_algebra import MatrixKernelRep, from_rep, to_rep

    rep = to_rep(sigma)
    zero = 0 if rep.exact else 0.0
    return from_rep(MatrixKernelRep(rep.c_matrix, zero, zero, zero, rep.exact))


def check_conservation(traj, quad) -> float:
    """Max |Q(t) - Q(0)| of a quadratic along the samples."""
    a1 = traj.states[:, 0]
    a2 = traj.states[:, 1]
    qv = (float(quad.a) * np.abs(a1) ** 2
          + 2 * float(quad.b) * (np.conj(a1) * a2).real
          + float(quad.c) * np.abs(a2) ** 2)
    return float(np.max(np.abs(qv - qv[0])))


def imag_cross_rate_residual(sigma: CubicSystem, traj: Trajectory) -> float:
    """Max relative error of d/dt Im(conj(a1) a2) against B[x]/4.

    Central differences on the dense output; x = (|a1|^2, 2 Re(conj(a1)a2),
    |a2|^2).  Scale-normalized by the max observed rate.
    """
    from .system_algebra import b_matrix, mat3_vec

    B = tuple(tuple(float(x) for x in row) for row in b_matrix(sigma))
    t0, t1 = float(traj.times[0]), float(traj.times[-1])
    h = (t1 - t0) * 1e-6
    ts = np.linspace(t0 + 2 * h, t1 - 2 * h, 64)
    worst = 0.0
    scale = 0.0
    for t in ts:
        am = traj.at(t - h)
        ap = traj.at(t + h)
        num = ((np.conj(ap[0]) * ap[1]).imag - (np.conj(am[0]) * am[1]).imag) / (2 * h)
        a1, a2 = traj.at(t)
        x = (abs(a1) ** 2, 2 * (np.conj(a1) * a2).real, abs(a2) ** 2)
        bx = sum(x[i] * mat3_vec(B, x)[i] for i in range(3)) / 4
        worst = max(worst, abs(num - bx))
        scale = max(scale, abs(bx), abs(num))
    return worst / max(scale, 1e-3)


def scalar_cubic_solution(lam, alpha0, t):
    """Closed form for i a' = lam |a|^2 a with complex lam.

    |a|^2 follows |a0|^2 / (1 - 2 Im(lam) |a0|^2 t); blows up in finite time
    when Im(lam) > 0, decays when Im(lam) < 0, constant when real.
    """
    lam = complex(lam)
    m0 = abs(alpha0) ** 2
    li, lr = lam.imag, lam.real
    denom = 1 - 2 * li * m0 * t
    if denom <= 0:
        raise ValueError("blowup reached at or before t=%g" % t)
    msq = m0 / denom
    if li == 0:
        phase = -lr * m0 * t
    else:
        phase = lr / (2 * li) * np.log(denom)
    return np.sqrt(msq / m0) * alpha0 * np.exp(1j * phase) if m0 > 0 else 0j


def write_csv(path, traj, quads=(), times=None):
    """Trajectory CSV: t, Re/Im of both components, monitored quadratics.

    With explicit times the dense interpolant is sampled there; otherwise
    the integrator's own steps are written.  Floats are rendered with repr
    of the Python float, so equal trajectories give equal bytes.
    """
    import csv

    if times is None:
        samples = [(float(t), traj.states[i][0], traj.states[i][1])
                   for i, t in enumerate(traj.times)]
    else:
        samples = []
        for t in times:
            a1, a2 = traj.at(float(t))
            samples.append((float(t), a1, a2))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        header = ["t", "re_a1", "im_a1", "re_a2", "im_a2"]
        header += ["quad_%d" % i for i in range(len(quads))]
        w.writerow(header)
        for t, a1, a2 in samples:
            row = [repr(t), repr(float(a1.real)), repr(float(a1.imag)),
                   repr(float(a2.real)), repr(float(a2.imag))]
            for q in quads:
                row.append(repr(float(q.a) * abs(a1) ** 2
                                + 2 * float(q.b) * float((np.conj(a1)
                                                          * a2).real)
                                + float(q.c) * abs(a2) ** 2))
            w.writerow(row)
