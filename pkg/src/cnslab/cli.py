"""Command-line front door.

Subcommands: classify, conserved, ode, pde, asym, accept.  Every command
resolves its configuration to a plain dict, hashes it, and writes a
manifest next to its numeric outputs, so a run can be reproduced from the
manifest alone.  Numeric CSV output is byte-deterministic for a given
configuration: floats are rendered with repr, which round-trips exactly.

Exit codes: 2 for unreadable input, 3 for numeric failure during a run,
4 for an asymptotic fit whose preconditions are not met, 1 for acceptance
suite failures.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import platform
import sys
import time
from dataclasses import dataclass
from math import degrees, pi

import numpy as np
import scipy

from . import __version__
from . import asymptotics as asym
from . import pde_sim as pde
from .classification import canonicalize
from .conservation import conservation_report, mass_like_kernel
from .errors import (CnslabError, IllConditionedFit, InsufficientSnapshots,
                     InsufficientSpan, NegativeDiscriminant)
from .experiments import SUITES, run_suite
from .ode_sim import (OdeConfig, check_conservation, imag_cross_rate_residual,
                      integrate, write_csv)
from .system_algebra import parse_system, to_rep

EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_FIT = 4

FIT_ERRORS = (IllConditionedFit, InsufficientSnapshots, InsufficientSpan,
              NegativeDiscriminant)


class TagPrecondition(CnslabError):
    """The stored run does not satisfy the requested theorem tag."""


class InputError(CnslabError):
    """Unreadable or malformed command input."""


# ---------------------------------------------------------------------------
# manifest plumbing


def _versions() -> dict:
    return {"python": platform.python_version(),
            "numpy": np.__version__,
            "scipy": scipy.__version__,
            "cnslab": __version__}


def _config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class RunManifest:
    command: list
    config: dict
    config_hash: str
    versions: dict
    seeds: dict
    outputs: dict
    wall_time_s: float

    @classmethod
    def of(cls, command, config, seeds, outputs, t0) -> "RunManifest":
        return cls(list(command), config, _config_hash(config), _versions(),
                   seeds, outputs, time.time() - t0)

    def write(self, out_dir: str, name: str = "manifest.json") -> str:
        path = os.path.join(out_dir, name)
        with open(path, "w") as fh:
            json.dump(self.__dict__, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path


def _write_rows(path, header, columns) -> None:
    """CSV with repr-rendered floats; identical input gives identical bytes."""
    columns = [np.asarray(c) for c in columns]
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(len(columns[0])):
            fh.write(",".join(repr(float(c[i])) for c in columns) + "\n")


def _load_system_arg(path, force_exact=False):
    try:
        with open(path) as fh:
            obj = json.load(fh)
        if force_exact:
            obj = dict(obj)
            obj["exact"] = True
        return parse_system(obj)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError,
            ZeroDivisionError) as exc:
        raise InputError("cannot read system file %s: %s" % (path, exc))


def _parse_floats(text, flag, count=None):
    try:
        vals = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise InputError("%s expects comma-separated numbers, got %r"
                         % (flag, text))
    if count is not None and len(vals) != count:
        raise InputError("%s expects %d values, got %d"
                         % (flag, count, len(vals)))
    return vals


def _parse_grid(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise InputError("--grid expects N,L")
    try:
        n, length = int(parts[0]), float(parts[1])
    except ValueError:
        raise InputError("--grid expects N,L with integer N")
    return pde.Grid.of(length, n)


def _ensure_out(path) -> str:
    os.makedirs(path, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# classify / conserved


def cmd_classify(args) -> int:
    t0 = time.time()
    sigma = _load_system_arg(args.system, args.exact)
    cf = canonicalize(sigma, tol=args.tol)
    report = cf.to_json_dict()
    print(cf.label)
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    if args.out:
        out = _ensure_out(args.out)
        with open(os.path.join(out, "classification.json"), "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
        config = {"system": args.system, "exact": bool(args.exact),
                  "tol": args.tol}
        RunManifest.of(args.argv, config, {"seed": args.seed},
                       {"report": "classification.json"}, t0).write(out)
    return 0


def cmd_conserved(args) -> int:
    t0 = time.time()
    sigma = _load_system_arg(args.system, args.exact)
    report = conservation_report(sigma)
    print(json.dumps(report, indent=2, sort_keys=True, default=str))
    if args.out:
        out = _ensure_out(args.out)
        with open(os.path.join(out, "conserved.json"), "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
        config = {"system": args.system, "exact": bool(args.exact)}
        RunManifest.of(args.argv, config, {"seed": args.seed},
                       {"report": "conserved.json"}, t0).write(out)
    return 0


# ---------------------------------------------------------------------------
# ode


def cmd_ode(args) -> int:
    t0 = time.time()
    sigma = _load_system_arg(args.system, args.exact)
    re1, im1, re2, im2 = _parse_floats(args.state, "--state", 4)
    t_first, ratio, t_end = _parse_floats(args.schedule, "--schedule", 3)
    if not 0 < t_first <= t_end or ratio <= 1:
        raise InputError("--schedule expects 0 < ta <= tb and ratio > 1")
    alpha0 = (complex(re1, im1), complex(re2, im2))
    config = OdeConfig(0.0, t_end)

    traj = integrate(sigma, alpha0, config)
    kernel = mass_like_kernel(to_rep(sigma))
    sample_times = [0.0]
    while t_first < t_end:
        sample_times.append(t_first)
        t_first *= ratio
    sample_times.append(t_end)
    out = _ensure_out(args.out)
    write_csv(os.path.join(out, "trajectory.csv"), traj, quads=kernel,
              times=sample_times)
    drift = {
        "kernel_basis": [[str(x) for x in q.abc] for q in kernel],
        "kernel_drift": [check_conservation(traj, q) for q in kernel],
        "imag_cross_rate_residual": imag_cross_rate_residual(sigma, traj),
        "samples": len(sample_times),
    }
    with open(os.path.join(out, "drift.json"), "w") as fh:
        json.dump(drift, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print("integrated to t=%g with %d samples"
          % (t_end, len(sample_times)))
    for vec, d in zip(drift["kernel_basis"], drift["kernel_drift"]):
        print("kernel (%s): drift %.3e" % (", ".join(vec), d))
    print("imag-cross rate residual: %.3e"
          % drift["imag_cross_rate_residual"])

    cfg = {"system": args.system,
           "state": [re1, im1, re2, im2], "t_end": t_end,
           "exact": bool(args.exact)}
    RunManifest.of(args.argv, cfg, {"seed": args.seed},
                   {"trajectory": "trajectory.csv", "drift": "drift.json"},
                   t0).write(out)
    return 0


# ---------------------------------------------------------------------------
# pde


def _gauss_pair(grid, data, phase2_deg):
    a1, w1, a2, w2 = data[:4]
    c1, c2 = (data[4], data[5]) if len(data) == 6 else (0.0, 0.0)
    u1 = pde.gaussian(grid, a1, w1, center=c1)
    ray = np.exp(1j * phase2_deg * pi / 180.0)
    u2 = pde.Field.of(grid, pde.gaussian(grid, a2, w2, center=c2).values * ray)
    return u1, u2


def cmd_pde(args) -> int:
    t0 = time.time()
    sigma = _load_system_arg(args.system, args.exact)
    grid = _parse_grid(args.grid)
    snap_start, ratio, t_end = _parse_floats(args.schedule, "--schedule", 3)
    data = _parse_floats(args.data, "--data")
    if len(data) not in (4, 6):
        raise InputError("--data expects a1,w1,a2,w2 or a1,w1,a2,w2,c1,c2")
    u1, u2 = _gauss_pair(grid, data, args.phase2)
    initial = pde.PdeState(0.0, u1, u2)
    out = _ensure_out(args.out)
    snap_paths = []

    if args.profile:
        config = pde.ProfileConfig(t_end=t_end, ds=args.ds,
                                   snap_start=snap_start, snap_ratio=ratio)
        series = pde.run_profile(sigma, initial, config)
        for k in range(len(series.times)):
            name = "snap-%04d.csv" % k
            _write_rows(os.path.join(out, name),
                        ("xi", "re_w1", "im_w1", "re_w2", "im_w2"),
                        (grid.x, series.w1[k].values.real,
                         series.w1[k].values.imag,
                         series.w2[k].values.real,
                         series.w2[k].values.imag))
            snap_paths.append(name)
        norms = series.norms()
        times = list(series.times)
    else:
        config = pde.SolverConfig(dt0=args.dt, t_end=t_end,
                                  snap_start=snap_start, snap_ratio=ratio)
        states = [initial] + list(pde.run(sigma, initial, config))
        for k, st in enumerate(states):
            name = "snap-%04d.csv" % k
            _write_rows(os.path.join(out, name),
                        ("x", "re_u1", "im_u1", "re_u2", "im_u2"),
                        (grid.x, st.u1.values.real, st.u1.values.imag,
                         st.u2.values.real, st.u2.values.imag))
            snap_paths.append(name)
        norms = {"t": [st.t for st in states],
                 "u1_linf": [st.u1.linf() for st in states],
                 "u2_linf": [st.u2.linf() for st in states],
                 "u1_l2": [st.u1.l2() for st in states],
                 "u2_l2": [st.u2.l2() for st in states]}
        times = [st.t for st in states]

    header = tuple(norms.keys())
    _write_rows(os.path.join(out, "norms.csv"), header,
                [norms[k] for k in header])
    last = {k: norms[k][-1] for k in header}
    print("wrote %d snapshots to %s" % (len(snap_paths), out))
    print("final norms: " + ", ".join("%s=%.6g" % kv for kv in last.items()))

    cfg = {"mode": "profile" if args.profile else "box",
           "system": {"coefficients": [float(c) for c in sigma.c]},
           "grid": {"N": grid.N, "L": float(grid.L)},
           "schedule": [snap_start, ratio, t_end],
           "step": args.ds if args.profile else args.dt,
           "data": list(data), "phase2_deg": args.phase2}
    RunManifest.of(args.argv, cfg, {"seed": args.seed},
                   {"snapshots": snap_paths, "norms": "norms.csv",
                    "times": times}, t0).write(out)
    return 0


# ---------------------------------------------------------------------------
# asym


def _load_profile_run(run_dir):
    try:
        with open(os.path.join(run_dir, "manifest.json")) as fh:
            man = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError("cannot read manifest in %s: %s" % (run_dir, exc))
    cfg = man.get("config", {})
    if cfg.get("mode") != "profile":
        raise TagPrecondition("asym needs a profile-mode run directory")
    grid = pde.Grid.of(cfg["grid"]["L"], cfg["grid"]["N"])
    times = [float(t) for t in man["outputs"]["times"]]
    w1, w2 = [], []
    for name in man["outputs"]["snapshots"]:
        cols = np.loadtxt(os.path.join(run_dir, name), delimiter=",",
                          skiprows=1, unpack=True)
        w1.append(pde.Field.of(grid, cols[1] + 1j * cols[2]))
        w2.append(pde.Field.of(grid, cols[3] + 1j * cols[4]))
    ncols = np.loadtxt(os.path.join(run_dir, "norms.csv"), delimiter=",",
                       skiprows=1, unpack=True)
    with open(os.path.join(run_dir, "norms.csv")) as fh:
        names = fh.readline().strip().split(",")
    idx1 = names.index("sqrt_t_u1_linf")
    idx2 = names.index("sqrt_t_u2_linf")
    psi_sup = tuple((float(a), float(b))
                    for a, b in zip(ncols[idx1], ncols[idx2]))
    series = pde.ProfileSeries(grid, tuple(times), tuple(w1), tuple(w2),
                               psi_sup)
    coeffs = tuple(cfg["system"]["coefficients"])
    return man, series, coeffs


def _coupling_rates(coeffs):
    """Read (l1, l6) off a one-way coupled system; refuse anything else."""
    l1, l6 = coeffs[0] / 3.0, coeffs[8]
    expect = (3 * l1, 0, 0, 0, 0, 0, 0, 2 * l6, l6, 0, 0, 0)
    if max(abs(a - b) for a, b in zip(coeffs, expect)) > 1e-12:
        raise TagPrecondition(
            "this tag expects a one-way coupled system "
            "(single self-interaction driving one linear coupling)")
    return l1, l6


def _xi_probes(series, w1_field):
    """Peak index plus the half-maximum indices on either side."""
    mag = np.abs(w1_field.values)
    i0 = asym.pick_xi0(series)
    half = mag[i0] / 2.0
    lo = i0
    while lo > 0 and mag[lo] > half:
        lo -= 1
    hi = i0
    while hi < len(mag) - 1 and mag[hi] > half:
        hi += 1
    return [i for i in dict.fromkeys((lo, i0, hi))]


def _angle_deg(z, w) -> float:
    if z == 0 or w == 0:
        return 180.0
    return abs(degrees(np.angle(complex(z) / complex(w))))


def _print_table(header, rows) -> None:
    widths = [max(len(header[j]), max((len(r[j]) for r in rows), default=0))
              for j in range(len(header))]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("-" * len(line))
    for r in rows:
        print("  ".join(c.ljust(w) for c, w in zip(r, widths)))


def cmd_asym(args) -> int:
    t0 = time.time()
    man, series, coeffs = _load_profile_run(args.run_dir)
    times = np.asarray(series.times)
    report = {"tag": args.tag, "run": args.run_dir, "fits": []}
    rows = []

    if args.tag == "twomode":
        l1, l6 = _coupling_rates(coeffs)
        rate = asym.lambda_c(l1, l6)
        if rate <= 0:
            raise TagPrecondition(
                "twomode needs a positive two-mode rate; "
                "this coupling ratio gives lambda_c = %g" % rate)
        w1_field, _ = asym.extract_scattering_data(series, l1)
        window = times >= max(100.0, float(times[0]))
        header = ("xi", "predicted", "measured", "rel_err", "|A|", "|B|",
                  "residual")
        for i in _xi_probes(series, w1_field):
            predicted = rate * abs(w1_field.values[i]) ** 2
            beta = asym.beta_series(series, w1_field, l1, i)
            fit = asym.fit_two_phasor(times[window], beta[window],
                                      4 * rate * float(
                                          np.max(np.abs(w1_field.values))) ** 2,
                                      xi0=float(series.grid.x[i]))
            rel = abs(fit.omega - predicted) / predicted
            rows.append(("%+.4f" % series.grid.x[i], "%.6f" % predicted,
                         "%.6f" % fit.omega, "%.2e" % rel,
                         "%.4f" % abs(fit.amp_minus),
                         "%.4f" % abs(fit.amp_plus),
                         "%.2e" % fit.residual))
            report["fits"].append(dict(fit.to_json_dict(),
                                       predicted=predicted, rel_err=rel))

    elif args.tag in ("log3", "log1"):
        l1, l6 = _coupling_rates(coeffs)
        target = 3 * l1 if args.tag == "log3" else l1
        if abs(l6 - target) > 1e-9 * max(1.0, abs(l1)):
            raise TagPrecondition(
                "%s needs the coupling rate at %g times the self rate"
                % (args.tag, 3.0 if args.tag == "log3" else 1.0))
        w1_field, _ = asym.extract_scattering_data(series, l1)
        window = times >= max(50.0, float(times[0]))
        sup2 = np.array([s[1] for s in series.psi_sup])
        r_sq = asym.affine_r_squared(times[window], sup2[window])
        report["amplitude_r_squared"] = r_sq
        print("sqrt(t)||u2||_inf vs affine(log t): R^2 = %.4f" % r_sq)
        header = ("xi", "slope", "predicted", "angle_deg", "mag_ratio")
        for i in _xi_probes(series, w1_field):
            beta = asym.beta_series(series, w1_field, l1, i)
            slope, intercept = asym.fit_log_slope(times[window],
                                                  beta[window])
            w1_val = w1_field.values[i]
            if args.tag == "log3":
                predicted = (-6j * l1 * w1_val
                             * np.real(w1_val * np.conj(intercept)))
            else:
                predicted = (2 * l1 * w1_val
                             * np.imag(w1_val * np.conj(intercept)))
            angle = _angle_deg(slope, predicted)
            ratio = abs(slope) / abs(predicted) if predicted != 0 else np.inf
            rows.append(("%+.4f" % series.grid.x[i],
                         "%.3e%+.3ej" % (slope.real, slope.imag),
                         "%.3e%+.3ej" % (predicted.real, predicted.imag),
                         "%.2f" % angle, "%.3f" % ratio))
            report["fits"].append({
                "xi0": float(series.grid.x[i]),
                "slope": [slope.real, slope.imag],
                "predicted": [predicted.real, predicted.imag],
                "angle_deg": angle, "mag_ratio": ratio})

    elif args.tag == "free":
        row1 = coeffs[:6]
        drive = coeffs[6]
        rest = coeffs[7:]
        if max(abs(c) for c in row1 + rest) > 1e-12 or drive == 0:
            raise TagPrecondition(
                "free needs a free first component driving the second "
                "through the cubic power alone")
        strength = drive / 3.0
        window = times > float(times[0])
        oracle = asym.forced_profile_quadrature(
            series.w1[0], times[window], w2_init=series.w2[0],
            t_start=float(times[0]))
        w2_init = series.w2[0].values
        header = ("xi", "slope", "angle_vs_display", "vs_oracle",
                  "slope/display")
        for i in _xi_probes(series, series.w1[-1]):
            w1_val = series.w1[-1].values[i]
            display = -1j * abs(w1_val) ** 2 * w1_val
            sim_beta = np.array([w.values[i] for w in series.w2])
            slope, _ = asym.fit_log_slope(times[window], sim_beta[window])
            orc_beta = np.array(
                [w2_init[i] + strength * (f.values[i] - w2_init[i])
                 for f in oracle])
            slope_orc, _ = asym.fit_log_slope(times[window], orc_beta)
            angle = _angle_deg(slope, display)
            vs_orc = abs(slope) / abs(slope_orc)
            vs_disp = abs(slope) / abs(display)
            rows.append(("%+.4f" % series.grid.x[i],
                         "%.3e%+.3ej" % (slope.real, slope.imag),
                         "%.2f" % angle, "%.4f" % vs_orc, "%.3f" % vs_disp))
            report["fits"].append({
                "xi0": float(series.grid.x[i]),
                "slope": [slope.real, slope.imag],
                "angle_vs_display_deg": angle,
                "magnitude_vs_oracle": vs_orc,
                "slope_over_display": vs_disp})
        header_note = ("slope/display reports the measured coefficient "
                       "against the displayed -i|W1|^2 W1")
        report["note"] = header_note

    else:  # pragma: no cover - argparse restricts choices
        raise InputError("unknown tag %r" % args.tag)

    _print_table(header, rows)
    if args.tag == "free":
        print(report["note"])
    report["window"] = [float(times[0]), float(times[-1])]
    path = os.path.join(args.run_dir, "fit-%s.json" % args.tag)
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    cfg = {"run": args.run_dir, "tag": args.tag}
    # the run's own manifest.json stays untouched; the fit gets its own
    RunManifest.of(args.argv, cfg, {"seed": args.seed},
                   {"fit": os.path.basename(path)}, t0).write(
                       args.run_dir, "fit-%s-manifest.json" % args.tag)
    return 0


# ---------------------------------------------------------------------------
# accept


def cmd_accept(args) -> int:
    t0 = time.time()
    results = run_suite(args.suite, jobs=args.jobs)
    for res in results:
        for line in res.render():
            print(line)
    failing = [res.index for res in results if not res.passed]
    if args.out:
        out = _ensure_out(args.out)
        payload = {"suite": args.suite,
                   "results": [r.to_json_dict() for r in results],
                   "failing": failing}
        with open(os.path.join(out, "accept.json"), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        RunManifest.of(args.argv, {"suite": args.suite,
                                      "jobs": args.jobs},
                       {"seed": args.seed}, {"report": "accept.json"},
                       t0).write(out)
    if failing:
        print("failing: " + ", ".join(str(i) for i in failing))
        return EXIT_FAIL
    print("all %d experiments passed" % len(results))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnslab",
        description="classify coupled cubic Schrodinger systems and verify "
                    "their long-time behavior")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=0,
                       help="recorded in the manifest; experiments with "
                            "randomness derive their streams from it")
        p.add_argument("--exact", action="store_true",
                       help="keep rational arithmetic when the input allows")

    p = sub.add_parser("classify", help="canonical form of a system")
    p.add_argument("system", help="JSON system file")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default=None, help="directory for report files")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("conserved", help="conserved quadratics of a system")
    p.add_argument("system")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_conserved)

    p = sub.add_parser("ode", help="integrate the spatially flat reduction")
    p.add_argument("system")
    p.add_argument("--state", default="0.1,0.0,0.05,0.02",
                   help="re1,im1,re2,im2 initial amplitudes")
    p.add_argument("--schedule", default="1,1.25,10",
                   help="ta,ratio,tb; tb is the end time")
    p.add_argument("--out", default="ode-run")
    common(p)
    p.set_defaults(func=cmd_ode)

    p = sub.add_parser("pde", help="split-step simulation with snapshots")
    p.add_argument("system")
    p.add_argument("--grid", default="4096,60", help="N,L")
    p.add_argument("--schedule", default="1,1.25,10",
                   help="snap_start,ratio,t_end")
    p.add_argument("--data", default="0.1,3.0,0.1,3.0",
                   help="a1,w1,a2,w2[,c1,c2] gaussian data")
    p.add_argument("--phase2", type=float, default=0.0,
                   help="phase of the second component in degrees")
    p.add_argument("--profile", action="store_true",
                   help="evolve the rescaled profile to large times and "
                        "store w-space snapshots")
    p.add_argument("--dt", type=float, default=5e-3, help="box step")
    p.add_argument("--ds", type=float, default=2e-3,
                   help="profile step in log time")
    p.add_argument("--out", default="pde-run")
    common(p)
    p.set_defaults(func=cmd_pde)

    p = sub.add_parser("asym", help="fit theorem predictions on a stored run")
    p.add_argument("run_dir", help="directory written by pde --profile")
    p.add_argument("--tag", required=True, choices=asym.VARIANTS,
                   help="which asymptotic statement to fit")
    common(p)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("accept", help="run pinned acceptance experiments")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--jobs", type=int,
                   default=int(os.environ.get("CNSLAB_JOBS", "1")))
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(func=cmd_accept)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.argv = list(argv) if argv is not None else sys.argv[1:]
    try:
        return args.func(args)
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_PARSE
    except (TagPrecondition,) + FIT_ERRORS as exc:
        print("fit preconditions not met: %s" % exc, file=sys.stderr)
        return EXIT_FIT
    except (CnslabError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print("numeric failure: %s" % exc, file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
