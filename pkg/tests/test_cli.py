"""Command line surface: labels, exit codes, determinism, manifests."""

import json
import os
import subprocess

import pytest

from cnslab.cli import main

FREE_DRIVEN = {"coefficients": [0, 0, 0, 0, 0, 0, 3, 0, 0, 0, 0, 0]}
ZERO = {"coefficients": [0] * 12}
RANK2 = {"coefficients": [-2, 0, 0, 2, 1, 0, 0, -2, -1, 0, 0, 2]}


def write_system(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    return tmp_path_factory.mktemp("cli")


@pytest.fixture(scope="module")
def profile_run(workdir):
    """One shared free-driven profile run; several tests fit against it."""
    system = write_system(workdir, "free.json", FREE_DRIVEN)
    out = str(workdir / "profile-run")
    rc = main(["pde", system, "--profile", "--data", "0.3,1.0,0,1",
               "--schedule", "10,1.25,100", "--ds", "0.004", "--out", out])
    assert rc == 0
    return out


def test_classify_prints_canonical_labels(workdir, capsys):
    assert main(["classify",
                 write_system(workdir, "c1.json", FREE_DRIVEN)]) == 0
    assert "Z7 x K7" in capsys.readouterr().out
    assert main(["classify", write_system(workdir, "c2.json", ZERO)]) == 0
    assert "rank0: (0,0,0)" in capsys.readouterr().out
    assert main(["classify", write_system(workdir, "c3.json", RANK2)]) == 0
    assert "no canonical representative" in capsys.readouterr().out


def test_classify_report_is_json_after_label(workdir, capsys):
    assert main(["classify",
                 write_system(workdir, "c4.json", FREE_DRIVEN)]) == 0
    out = capsys.readouterr().out
    label, _, rest = out.partition("\n")
    report = json.loads(rest)
    assert report["label"] == label
    assert report["invariants"]["rank"] == 1


def test_unreadable_system_exits_2(workdir, capsys):
    path = workdir / "broken.json"
    path.write_text("{not json")
    assert main(["classify", str(path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_wrong_shape_exits_2(workdir, capsys):
    path = write_system(workdir, "short.json", {"coefficients": [1, 2, 3]})
    assert main(["classify", path]) == 2


def test_ode_blowup_exits_3(workdir, capsys):
    system = write_system(workdir, "rank2.json", RANK2)
    rc = main(["ode", system, "--state", "10,0,7.07,7.07",
               "--schedule", "1,1.25,10", "--out", str(workdir / "blow")])
    assert rc == 3
    assert "numeric failure" in capsys.readouterr().err


def test_conserved_exact_reports_integer_kernel(workdir, capsys):
    system = write_system(workdir, "rank2b.json", RANK2)
    assert main(["conserved", system, "--exact"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["kernel_basis"] == [["1", "0", "-1"]] or \
        report["kernel_basis"] == [[1, 0, -1]]
    assert report["kernel_dimension"] == 1


def test_ode_runs_are_byte_identical(workdir, capsys):
    system = write_system(workdir, "ow.json",
                          {"coefficients": [1, 0, 0, 0, 0, 0, 0, 2, 1,
                                            0, 0, 0]})
    outs = []
    for name in ("ode-a", "ode-b"):
        out = str(workdir / name)
        assert main(["ode", system, "--out", out]) == 0
        outs.append(out)
    capsys.readouterr()
    a = open(os.path.join(outs[0], "trajectory.csv"), "rb").read()
    b = open(os.path.join(outs[1], "trajectory.csv"), "rb").read()
    assert a == b
    assert b"np.float" not in a
    ha = json.load(open(os.path.join(outs[0], "manifest.json")))
    hb = json.load(open(os.path.join(outs[1], "manifest.json")))
    assert ha["config_hash"] == hb["config_hash"]


def test_pde_box_snapshots_are_byte_identical(workdir, capsys):
    system = write_system(workdir, "free2.json", FREE_DRIVEN)
    snaps = []
    for name in ("box-a", "box-b"):
        out = str(workdir / name)
        rc = main(["pde", system, "--grid", "256,20", "--dt", "0.01",
                   "--schedule", "0.5,2,2", "--data", "0.1,2.0,0.1,2.0",
                   "--out", out])
        assert rc == 0
        listing = sorted(f for f in os.listdir(out) if f.startswith("snap-"))
        assert len(listing) >= 3
        snaps.append([open(os.path.join(out, f), "rb").read()
                      for f in listing])
    capsys.readouterr()
    assert snaps[0] == snaps[1]


def test_manifest_records_the_run(workdir):
    man = json.load(open(os.path.join(str(workdir / "ode-a"),
                                      "manifest.json")))
    for key in ("command", "config", "config_hash", "versions", "seeds",
                "outputs", "wall_time_s"):
        assert key in man, key
    assert man["command"][0] == "ode"
    assert "cnslab" in man["versions"]
    assert man["outputs"]["trajectory"] == "trajectory.csv"


def test_free_fit_matches_display_and_oracle(profile_run, capsys):
    assert main(["asym", profile_run, "--tag", "free"]) == 0
    out = capsys.readouterr().out
    assert "slope/display" in out
    report = json.load(open(os.path.join(profile_run, "fit-free.json")))
    # rows cover the peak and both half-maximum probes; pin the peak
    peak = max(report["fits"],
               key=lambda f: abs(complex(f["slope"][0], f["slope"][1])))
    assert abs(peak["angle_vs_display_deg"]) <= 5.0
    assert abs(peak["magnitude_vs_oracle"] - 1.0) <= 0.05
    # the measured coefficient is reported against the display, not hidden
    assert abs(peak["slope_over_display"] - 3.0) <= 0.2
    # the half-maximum probes agree with the quadrature oracle too
    for row in report["fits"]:
        assert abs(row["magnitude_vs_oracle"] - 1.0) <= 0.05
    assert os.path.exists(os.path.join(profile_run,
                                       "fit-free-manifest.json"))


def test_fit_leaves_run_manifest_intact(profile_run):
    man = json.load(open(os.path.join(profile_run, "manifest.json")))
    assert man["config"]["mode"] == "profile"


def test_wrong_tag_for_the_family_exits_4(profile_run, capsys):
    assert main(["asym", profile_run, "--tag", "twomode"]) == 4
    assert "fit preconditions" in capsys.readouterr().err


def test_too_short_run_exits_4(workdir, capsys):
    # two snapshots cannot pin the scattering profile, whatever the tag
    system = write_system(workdir, "tm.json",
                          {"coefficients": [1, 0, 0, 0, 0, 0, 0, 4, 2,
                                            0, 0, 0]})
    out = str(workdir / "short-run")
    rc = main(["pde", system, "--profile", "--grid", "1024,30",
               "--data", "0.1,2.0,0.1,2.0", "--schedule", "10,2,20",
               "--ds", "0.004", "--out", out])
    assert rc == 0
    capsys.readouterr()
    assert main(["asym", out, "--tag", "twomode"]) == 4
    err = capsys.readouterr().err
    assert "fit preconditions" in err


def test_accept_algebra_suite_passes(capsys):
    assert main(["accept", "algebra"]) == 0
    out = capsys.readouterr().out
    assert "all 4 experiments passed" in out
    assert "[FAIL]" not in out


def test_console_script_entry_point(workdir):
    system = write_system(workdir, "entry.json", FREE_DRIVEN)
    proc = subprocess.run(["cnslab", "classify", system],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0, proc.stderr
    assert "Z7 x K7" in proc.stdout
