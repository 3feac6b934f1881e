"""Command-line interface tests, run through real subprocesses.

Covers the documented exit codes (0 success, 1 failed check, 2 usage
error), the CSV schema, manifest content, determinism across reruns,
config-file precedence, and the rate unit conversion.
"""

import math
import os
import subprocess
import sys

import numpy as np
import pytest

CLI = [sys.executable, "-m", "vblastopt.cli"]


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        CLI + args, capture_output=True, text=True, env=env, timeout=600
    )


def test_version_flag():
    out = run_cli(["--version"])
    assert out.returncode == 0
    assert "vblastopt" in out.stdout


def test_sweep_outputs_and_determinism(tmp_path):
    args = [
        "sweep", "--n", "2", "--m", "2", "--rate-nats", "1.0",
        "--snr-db", "5:15:5", "--trials", "4096", "--seed", "42",
        "--strategies", "uniform,ora",
    ]
    out1 = run_cli(args + ["--outdir", str(tmp_path / "a")])
    assert out1.returncode == 0, out1.stderr
    a = tmp_path / "a"
    assert (a / "sweep_uniform.csv").exists()
    assert (a / "sweep_ora.csv").exists()
    assert (a / "sweep_curves.png").exists()
    assert (a / "manifest.txt").exists()

    text = (a / "sweep_uniform.csv").read_text()
    lines = text.strip().splitlines()
    assert lines[0] == "gamma0_db,p_out,ci_low,ci_high,trials,reliable"
    assert len(lines) == 4  # 5, 10, 15 dB
    first = lines[1].split(",")
    assert float(first[0]) == 5.0 and int(first[4]) == 4096

    manifest = (a / "manifest.txt").read_text()
    for needle in ("n=2", "m=2", "rate_nats=1.0", "trials=4096", "seed=42",
                   "strategies=uniform,ora", "sweep_uniform.csv"):
        assert needle in manifest

    out2 = run_cli(args + ["--outdir", str(tmp_path / "b")])
    assert out2.returncode == 0
    for name in ("sweep_uniform.csv", "sweep_ora.csv"):
        assert (a / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_sweep_no_plot(tmp_path):
    out = run_cli([
        "sweep", "--snr-db", "10", "--trials", "2048",
        "--strategies", "uniform", "--no-plot", "--outdir", str(tmp_path),
    ])
    assert out.returncode == 0
    assert not (tmp_path / "sweep_curves.png").exists()
    assert (tmp_path / "sweep_uniform.csv").exists()


def test_unknown_strategy_exits_2(tmp_path):
    out = run_cli([
        "sweep", "--strategies", "bogus", "--outdir", str(tmp_path),
    ])
    assert out.returncode == 2
    assert "bogus" in out.stderr and "opra" in out.stderr


def test_malformed_range_exits_2(tmp_path):
    out = run_cli([
        "fit", "ergodic", "--snr-db", "40:20", "--outdir", str(tmp_path),
    ])
    assert out.returncode == 2
    for bad in ("5:25:-2", "abc", "5,,7"):
        out = run_cli(["sweep", "--snr-db", bad, "--outdir", str(tmp_path)])
        assert out.returncode == 2, bad


def test_config_file_and_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\n"
        "n=2\nm=2\nrate_bits=1.0\nsnr_db=5,10\ntrials=2048\nseed=3\n"
        "strategies=uniform\nno_plot=true\n"
    )
    out = run_cli([
        "sweep", "--config", str(cfg), "--trials", "4096",
        "--outdir", str(tmp_path / "out"),
    ])
    assert out.returncode == 0, out.stderr
    manifest = (tmp_path / "out" / "manifest.txt").read_text()
    # flag beats file; one bit becomes ln 2 nats
    assert "trials=4096" in manifest
    assert f"rate_nats={math.log(2.0)!r}" in manifest
    assert not (tmp_path / "out" / "sweep_curves.png").exists()


def test_bad_config_exits_2(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("zzz=1\n")
    out = run_cli(["sweep", "--config", str(bad), "--outdir", str(tmp_path)])
    assert out.returncode == 2
    assert "zzz" in out.stderr

    both = tmp_path / "both.cfg"
    both.write_text("rate_nats=1.0\nrate_bits=1.0\n")
    out = run_cli(["sweep", "--config", str(both), "--outdir", str(tmp_path)])
    assert out.returncode == 2


def test_outdir_from_environment(tmp_path):
    out = run_cli(
        ["sweep", "--snr-db", "10", "--trials", "2048",
         "--strategies", "uniform", "--no-plot"],
        env_extra={"VBLASTOPT_OUTDIR": str(tmp_path / "envdir")},
    )
    assert out.returncode == 0, out.stderr
    assert (tmp_path / "envdir" / "sweep_uniform.csv").exists()


def test_fit_ergodic_values(tmp_path):
    out = run_cli([
        "fit", "ergodic", "--n", "2", "--m", "2", "--snr-db", "20",
        "--no-plot", "--outdir", str(tmp_path),
    ])
    assert out.returncode == 0, out.stderr
    lines = (tmp_path / "fit_ergodic.csv").read_text().strip().splitlines()
    assert lines[0] == "gamma0_db,A_1,A_2,alpha_1,alpha_2"
    row = [float(v) for v in lines[1].split(",")]
    assert row[0] == 20.0
    assert np.isclose(row[1], np.log(100.0) - 0.5772, atol=1e-3)
    assert row[2] == 1.0
    assert np.isclose(row[3] + row[4], 2.0, rtol=1e-12)


def test_fit_theorem3_outputs(tmp_path):
    out = run_cli([
        "fit", "theorem3", "--n", "2", "--m", "2", "--snr-db", "20:40:2",
        "--outdir", str(tmp_path),
    ])
    assert out.returncode == 0, out.stderr
    lines = (tmp_path / "fit_theorem3.csv").read_text().strip().splitlines()
    assert lines[0] == "stream,b,exponent,r_squared"
    stream, b, expo, r2 = lines[1].split(",")
    assert stream == "2" and float(b) > 0
    assert np.isclose(float(expo), 1.0 / 3.0, rtol=1e-12)
    assert float(r2) >= 0.99
    assert (tmp_path / "fit_theorem3.png").exists()


def test_fit_theorem3_needs_enough_points(tmp_path):
    out = run_cli([
        "fit", "theorem3", "--snr-db", "20,30", "--outdir", str(tmp_path),
    ])
    assert out.returncode == 2


def test_verify_suite_runs_and_reports(tmp_path):
    out = run_cli(["verify", "gaindist", "--outdir", str(tmp_path)])
    assert out.returncode == 0, out.stderr
    assert "[PASS]" in out.stdout
    assert (tmp_path / "verify_gaindist.txt").exists()
    report = (tmp_path / "verify_gaindist.csv").read_text()
    assert report.splitlines()[0] == "check,passed,detail"
    assert "manifest.txt" in {p.name for p in tmp_path.iterdir()}


def test_verify_rejects_unknown_suite(tmp_path):
    out = run_cli(["verify", "nonsense", "--outdir", str(tmp_path)])
    assert out.returncode == 2
