"""Predicted long-time profiles and the fits that test them.

The three prediction families share the frame
u_j ~ t^{-1/2} (profile)(x/t) e^{ix^2/2t - i pi/4}:

  * two-mode: the second component splits into counter-rotating parts with
    angular rates (-3 lambda_1 -+ lambda_c)|W_1|^2 per unit log t,
    lambda_c = sqrt(3(l6 - l1)(l6 - 3 l1));
  * logarithmic: at the resonance l6 = 3 l1 (or the self-coupled point
    l6 = l1) the rotation degenerates and a secular term W log t appears;
  * free-driven: component 1 evolves freely and pumps component 2, whose
    profile grows like |W1|^2 W1 log t.

All fits run on profile-frame (w-space) series: the x-space statements are
the Dollard images of w-space ones, and w-space is where the simulated
series are cleanest.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log, pi, sqrt

import numpy as np

from .errors import (DomainError, IllConditionedFit, InsufficientSnapshots,
                     InsufficientSpan, NegativeDiscriminant)
from .pde_sim import Field, ProfileSeries, spectral_interpolate

BOUNDARY_TOL = 1e-12  # discriminant values this close to zero count as 0
W1_INDICATOR = 1e-3   # 1_{W1 != 0} threshold, relative to max|W1|
PHASOR_AMP_FACTOR = 10.0   # phasor amplitudes above this multiple of max|y| are unphysical


def lambda_c(l1, l6) -> float:
    """sqrt(3 (l6 - l1)(l6 - 3 l1)); the two-mode splitting rate."""
    prod = 3.0 * (l6 - l1) * (l6 - 3.0 * l1)
    if prod < 0:
        if abs(prod) <= BOUNDARY_TOL * max(1.0, l1 * l1, l6 * l6):
            return 0.0
        raise NegativeDiscriminant(
            "(l6-l1)(l6-3*l1) < 0 for l1=%g, l6=%g: one mode grows, no "
            "validated asymptotics" % (l1, l6))
    return sqrt(prod)


def lambda_tilde(l1, l6):
    """(-3 l1 + 2 l6 +- lambda_c) / l6, the mode weights."""
    lc = lambda_c(l1, l6)
    if l6 == 0:
        raise DomainError("mode weights undefined at l6=0")
    return (-3 * l1 + 2 * l6 + lc) / l6, (-3 * l1 + 2 * l6 - lc) / l6


def _at_comoving(W: Field, grid, t):
    # profile sampled at y = x/t; beyond W's own box it reads as zero
    if t < 1:
        raise DomainError("predictions are for t >= 1, got t=%r" % t)
    if grid is W.grid and t == 1:
        return W.values.copy()
    return spectral_interpolate(W, grid.x / t, clip=True)


def _carrier(grid, t):
    return np.exp(0.5j * grid.x ** 2 / t - 0.25j * pi) / sqrt(t)


def predict_u1(W1: Field, l1, t, out_grid=None) -> Field:
    """t^{-1/2} W1(x/t) e^{ix^2/2t - 3i l1 |W1(x/t)|^2 log t - i pi/4}."""
    g = out_grid if out_grid is not None else W1.grid
    w = _at_comoving(W1, g, t)
    phase = np.exp(-3j * l1 * np.abs(w) ** 2 * log(t))
    return Field(g, w * phase * _carrier(g, t))


def predict_u2_twomode(W1: Field, W2: Field, l1, l6, t, out_grid=None) -> Field:
    """Two counter-rotating parts, supported where W1 is away from zero."""
    lc = lambda_c(l1, l6)
    g = out_grid if out_grid is not None else W1.grid
    w1 = _at_comoving(W1, g, t)
    w2 = _at_comoving(W2, g, t)
    mag2 = np.abs(w1) ** 2
    live = np.abs(w1) > W1_INDICATOR * np.max(np.abs(w1))
    unit_sq = np.where(live, w1 * w1 / np.where(live, mag2, 1.0), 0.0)
    slow = np.exp(1j * (-3 * l1 - lc) * mag2 * log(t))
    fast = np.exp(1j * (-3 * l1 + lc) * mag2 * log(t))
    part = (l6 * unit_sq * w2 * slow
            + (3 * l1 - 2 * l6 + lc) * np.conj(w2) * fast)
    return Field(g, np.where(live, part, 0.0) * _carrier(g, t))


LOG_CASES = ("3lambda1", "lambda1")


def log_mode_rate(w1, w2, l1, case):
    """The secular coefficient W: growth of the second profile per log t."""
    if case == "3lambda1":
        return -6j * l1 * w1 * (w1 * np.conj(w2)).real
    if case == "lambda1":
        return 2 * l1 * w1 * (w1 * np.conj(w2)).imag
    raise DomainError("unknown resonance case %r (want one of %s)"
                      % (case, (LOG_CASES,)))


def predict_u2_log(W1: Field, W2: Field, l1, case, t, out_grid=None) -> Field:
    """{W log t + W2} under the same phase modification as component 1."""
    g = out_grid if out_grid is not None else W1.grid
    w1 = _at_comoving(W1, g, t)
    w2 = _at_comoving(W2, g, t)
    sec = log_mode_rate(w1, w2, l1, case)
    phase = np.exp(-3j * l1 * np.abs(w1) ** 2 * log(t))
    return Field(g, (sec * log(t) + w2) * phase * _carrier(g, t))


def predict_u2_free(W1: Field, W2: Field, t, out_grid=None) -> Field:
    """-i {|W1|^2 W1 log t + W2} with a plain (unmodified) carrier."""
    g = out_grid if out_grid is not None else W1.grid
    w1 = _at_comoving(W1, g, t)
    w2 = _at_comoving(W2, g, t)
    return Field(g, -1j * (np.abs(w1) ** 2 * w1 * log(t) + w2) * _carrier(g, t))


VARIANTS = ("twomode", "log3", "log1", "free")


@dataclass(frozen=True, eq=False)
class AsymptoticPrediction:
    """A prediction family bound to its scattering data."""

    variant: str
    W1: Field
    W2: Field
    l1: float = 0.0
    l6: float = 0.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError("unknown variant %r" % (self.variant,))
        if self.variant == "twomode":
            lambda_c(self.l1, self.l6)  # raises when invalid

    def u1(self, t, out_grid=None) -> Field:
        l1 = 0.0 if self.variant == "free" else self.l1
        return predict_u1(self.W1, l1, t, out_grid)

    def u2(self, t, out_grid=None) -> Field:
        if self.variant == "twomode":
            return predict_u2_twomode(self.W1, self.W2, self.l1, self.l6,
                                      t, out_grid)
        if self.variant == "log3":
            return predict_u2_log(self.W1, self.W2, self.l1, "3lambda1",
                                  t, out_grid)
        if self.variant == "log1":
            return predict_u2_log(self.W1, self.W2, self.l1, "lambda1",
                                  t, out_grid)
        return predict_u2_free(self.W1, self.W2, t, out_grid)


# ---------------------------------------------------------------------------
# extraction and fits


def extract_scattering_data(series: ProfileSeries, l1):
    """W1 from a profile series: latest modulus, dechirped phase.

    |w_1| settles first; the phase still rotates like
    e^{-3i l1 |W1|^2 log t}, so it is compensated before averaging over the
    last three snapshots.  The convergence curve reports
    sup|w_1(t_k) - W1 e^{-3i l1 |W1|^2 log t_k}| per snapshot.
    """
    if len(series.times) < 4:
        raise InsufficientSnapshots("need >= 4 snapshots, have %d"
                                    % len(series.times))
    mag = np.abs(series.w1[-1].values)
    acc = np.zeros(series.grid.N, dtype=complex)
    for t, w in zip(series.times[-3:], series.w1[-3:]):
        v = w.values
        acc += v * np.exp(3j * l1 * np.abs(v) ** 2 * log(t))
    # boolean indexing, not where(): tail entries underflow to denormals and
    # dividing those warns/overflows even on the unselected branch
    norm = np.abs(acc)
    unit = np.ones(series.grid.N, dtype=complex)
    live = norm > 1e-12 * max(float(norm.max()), 1e-300)
    unit[live] = acc[live] / norm[live]
    W1 = Field(series.grid, mag * unit)
    curve = []
    for t, w in zip(series.times, series.w1):
        model = W1.values * np.exp(-3j * l1 * mag ** 2 * log(t))
        curve.append(float(np.max(np.abs(w.values - model))))
    return W1, np.array(curve)


def pick_xi0(series: ProfileSeries) -> int:
    """Index of the spectral peak of |w_1| at the latest snapshot."""
    return int(np.argmax(np.abs(series.w1[-1].values)))


def beta_series(series: ProfileSeries, W1: Field, l1, index) -> np.ndarray:
    """w_2(t, xi_0) with component-1's phase modification removed."""
    a2 = abs(W1.values[index]) ** 2
    return np.array([w.values[index] * np.exp(3j * l1 * a2 * log(t))
                     for t, w in zip(series.times, series.w2)])


@dataclass(frozen=True)
class FitResult:
    omega: float
    amp_minus: complex  # coefficient of e^{-i omega s}
    amp_plus: complex   # coefficient of e^{+i omega s}
    residual: float
    window: tuple
    xi0: float = None
    degenerate: bool = False

    @property
    def frequencies(self):
        return (-self.omega, self.omega)

    def to_json_dict(self):
        return {
            "omega": self.omega,
            "frequencies": list(self.frequencies),
            "amp_minus": [self.amp_minus.real, self.amp_minus.imag],
            "amp_plus": [self.amp_plus.real, self.amp_plus.imag],
            "residual": self.residual,
            "window": list(self.window),
            "xi0": self.xi0,
            "degenerate": self.degenerate,
        }


def _phasor_lstsq(s, y, omega):
    basis = np.column_stack([np.exp(-1j * omega * s), np.exp(1j * omega * s)])
    coef, _, _, _ = np.linalg.lstsq(basis, y, rcond=None)
    resid = float(np.linalg.norm(y - basis @ coef))
    # near omega=0 the columns are almost collinear and a slow drift in y is
    # "explained" by huge cancelling amplitudes; physical amplitudes are
    # O(max|y|), so such fits are rejected rather than allowed to win
    if float(np.max(np.abs(coef))) > PHASOR_AMP_FACTOR * float(np.max(np.abs(y))):
        return float(np.linalg.norm(y)), coef
    return resid, coef


def fit_two_phasor(times, values, omega_max, xi0=None, scan_points=257) -> FitResult:
    """Least squares for beta(s) ~ A e^{-i omega s} + B e^{i omega s}.

    omega is found by scanning [0, omega_max] and refining the best bracket
    by golden section; omega_max should generously bracket the expected
    rate (the callers use 4x the predicted one).
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=complex)
    if t.size < 12:
        raise InsufficientSpan("need >= 12 samples, have %d" % t.size)
    s = np.log(t)
    if s[-1] - s[0] < 2.0:
        raise InsufficientSpan("need >= 2 units of log t, have %.3f"
                               % (s[-1] - s[0]))
    if omega_max <= 0:
        raise DomainError("omega_max must be positive")

    grid = np.linspace(0.0, omega_max, scan_points)
    res = np.array([_phasor_lstsq(s, y, w)[0] for w in grid])
    best = int(np.argmin(res))

    # ambiguity guard: a second, separated scan valley of equal depth means
    # the model cannot decide the rate
    interior = [i for i in range(1, scan_points - 1)
                if res[i] < res[i - 1] and res[i] < res[i + 1]]
    rivals = [i for i in interior
              if abs(grid[i] - grid[best]) > omega_max / 16
              and res[i] <= res[best] * 1.02 + 1e-15]
    if rivals:
        raise IllConditionedFit(
            "competing rates %.4g and %.4g fit equally well"
            % (grid[best], grid[rivals[0]]))

    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, scan_points - 1)]
    phi = (sqrt(5.0) - 1) / 2
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc = _phasor_lstsq(s, y, c)[0]
    fd = _phasor_lstsq(s, y, d)[0]
    for _ in range(60):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = _phasor_lstsq(s, y, c)[0]
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = _phasor_lstsq(s, y, d)[0]
    omega = (a + b) / 2
    resid, coef = _phasor_lstsq(s, y, omega)
    amp_a, amp_b = complex(coef[0]), complex(coef[1])
    # a winner whose amplitudes dwarf the data can only arise from near
    # cancellation of the two columns, i.e. the window never resolved the
    # rate; a wrong omega must not be returned as if it were measured
    scale = float(np.max(np.abs(y)))
    if max(abs(amp_a), abs(amp_b)) > 3 * scale:
        raise IllConditionedFit(
            "fitted amplitudes %.3g exceed 3x the data scale %.3g; "
            "the window does not resolve the rate"
            % (max(abs(amp_a), abs(amp_b)), scale))
    degenerate = min(abs(amp_a), abs(amp_b)) <= 1e-3 * max(abs(amp_a),
                                                           abs(amp_b), 1e-300)
    return FitResult(float(omega), amp_a, amp_b, resid,
                     (float(t[0]), float(t[-1])), xi0, degenerate)


def fit_log_slope(times, values):
    """Least squares of a series against a + b log t; returns (b, a)."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=complex)
    if t.size < 6:
        raise InsufficientSpan("need >= 6 samples, have %d" % t.size)
    basis = np.column_stack([np.ones(t.size), np.log(t)])
    coef, _, _, _ = np.linalg.lstsq(basis, y, rcond=None)
    return complex(coef[1]), complex(coef[0])


def affine_r_squared(times, values):
    """R^2 of the affine-in-log-t model; 1.0 for exact affine data."""
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=complex)
    slope, intercept = fit_log_slope(t, y)
    fitted = intercept + slope * np.log(t)
    ss_res = float(np.sum(np.abs(y - fitted) ** 2))
    ss_tot = float(np.sum(np.abs(y - np.mean(y)) ** 2))
    if ss_tot == 0:
        return 1.0
    return 1.0 - ss_res / ss_tot


def residual_norm(prediction: Field, simulation: Field, window=0.8):
    """sup and L2 of the difference over the interior |x| <= window*L."""
    gp, gs = prediction.grid, simulation.grid
    if gp.N != gs.N or abs(gp.L - gs.L) > 1e-9 * max(gp.L, 1.0):
        raise DomainError("fields live on different grids")
    keep = np.abs(gp.x) <= window * gp.L
    diff = prediction.values[keep] - simulation.values[keep]
    return {
        "sup": float(np.max(np.abs(diff))),
        "l2": float(np.sqrt(np.sum(np.abs(diff) ** 2) * gp.dx)),
    }


# ---------------------------------------------------------------------------
# independent oracle for the free-driven slope


def forced_profile_quadrature(w1: Field, times, w2_init=None, t_start=1.0,
                              ds=2e-3):
    """Integrate i d/dt w_2 = 3 t^{-1} U(1/t)[|U(-1/t)w_1|^2 U(-1/t)w_1].

    This is the exact profile-frame equation for a second component forced
    by 3|u_1|^2 u_1 when the first is free (w_1 constant).  The right side
    never reads w_2, so this is pure quadrature: composite Simpson in
    s = log t starting from w_2(t_start) = w2_init; returns the w_2 fields
    at the requested times.
    """
    g = w1.grid
    eta2 = 0.5 * g.xi ** 2
    w1hat = np.fft.fft(w1.values)

    def rate(s):
        # d w2 / ds = -3i U(e^{-s}) [ |psi|^2 psi ],  psi = U(-e^{-s}) w1
        tau = np.exp(-s)
        psi = np.fft.ifft(np.exp(1j * tau * eta2) * w1hat)
        forced = np.abs(psi) ** 2 * psi
        return -3j * np.fft.ifft(np.exp(-1j * tau * eta2) * np.fft.fft(forced))

    if t_start < 1.0:
        raise DomainError("quadrature runs on t >= 1")
    w2 = (np.zeros(g.N, dtype=complex) if w2_init is None
          else np.asarray(w2_init.values, dtype=complex).copy())
    out = []
    s = log(t_start)
    for t_next in times:
        if t_next < t_start:
            raise DomainError("requested time %g precedes t_start=%g"
                              % (t_next, t_start))
        s_next = log(t_next)
        n = max(1, ceil((s_next - s) / ds))
        h = (s_next - s) / n
        for k in range(n):
            s0 = s + k * h
            left = rate(s0)
            mid = rate(s0 + h / 2)
            right = rate(s0 + h)
            w2 = w2 + (h / 6) * (left + 4 * mid + right)
        s = s_next
        out.append(Field(g, w2.copy()))
    return out
