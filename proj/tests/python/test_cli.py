import json
import os
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest

CLI = os.environ.get("ENTROMIN_CLI", "entromin")
DATA = Path(os.environ.get("ENTROMIN_TEST_DATA", Path(__file__).resolve().parents[1] / "data"))


def run(*args, cwd=None, env=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, cwd=cwd, env=env)


def manifest(out):
    return json.loads((Path(out) / "manifest.json").read_text())


def test_selftest_passes():
    r = run("selftest")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "FAIL" not in r.stdout


def test_selftest_fault_injection_names_the_shrinkage_oracle():
    r = run("selftest", "--quick", "--inject-fault", "threshold-sign")
    assert r.returncode == 1
    failed = [line for line in r.stdout.splitlines() if "FAIL" in line]
    assert failed and all("shrinkage oracle" in line for line in failed)


def test_selftest_quick_is_fast():
    start = time.monotonic()
    r = run("selftest", "--quick")
    assert r.returncode == 0
    assert time.monotonic() - start < 10.0


def test_missing_config_is_a_config_error(tmp_path):
    missing = tmp_path / "nope.json"
    r = run("solve", "--config", missing, "--out", tmp_path / "out")
    assert r.returncode == 2
    assert str(missing) in r.stderr


def test_bad_flag_is_a_config_error(tmp_path):
    assert run("solve", "--method", "l2", "--out", tmp_path).returncode == 2
    assert run("ptc", "--scale", "huge", "--out", tmp_path).returncode == 2


def test_solve_generated_instance(tmp_path):
    out = tmp_path / "solve"
    r = run("solve", "--seed", 7, "--method", "sef", "--p", 1.1, "--out", out)
    assert r.returncode == 0, r.stderr
    m = manifest(out)
    assert m["summary"]["rel_err"] < 1e-3
    assert m["master_seed"] == 7
    header = json.loads((out / "x_hat.json").read_text())
    x = np.fromfile(out / "x_hat.f64", dtype="<f8")
    assert x.size == header["length"]
    assert (out / "trace.csv").read_text().startswith("phase,outer_iter,lambda,objective")

    # the manifest reproduces the run
    again = tmp_path / "again"
    r2 = run("solve", "--config", out / "manifest.json", "--out", again)
    assert r2.returncode == 0, r2.stderr
    assert (again / "x_hat.f64").read_bytes() == (out / "x_hat.f64").read_bytes()


def test_l1_without_penalty_inverts_square_orthonormal_operator(tmp_path):
    out = tmp_path / "inv"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"solver": {"outer_tol": 1e-12}}))
    r = run("solve", "--config", cfg, "--method", "l1", "--lambda", 0, "--operator", "srm",
            "--n", 128, "--m", 128, "--sparsity", 10, "--out", out)
    assert r.returncode == 0, r.stderr
    assert manifest(out)["summary"]["rel_err"] < 1e-10


def test_solve_from_operator_manifest(tmp_path):
    gen = tmp_path / "gen"
    assert run("solve", "--seed", 3, "--method", "l1", "--n", 64, "--m", 32, "--sparsity", 4,
               "--out", gen).returncode == 0
    op = manifest(gen)["config"]["instance"]
    desc = {"generator": "gaussian", "rows": op["m"], "cols": op["n"], "seed": {"master": 3, "stream": 0}}
    (tmp_path / "op.json").write_text(json.dumps(desc))
    np.zeros(31).astype("<f8").tofile(tmp_path / "y.f64")
    r = run("solve", "--input", tmp_path / "y.f64", "--operator-manifest", tmp_path / "op.json",
            "--out", tmp_path / "o")
    assert r.returncode == 2
    assert "expected length 32" in r.stderr


def test_small_ptc_is_byte_identical(tmp_path):
    cfg = tmp_path / "ptc.json"
    cfg.write_text(json.dumps({"grid": {"n": 50, "sigmas": [0.3, 0.7], "rhos": [0.1, 0.5], "trials": 3}}))
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        r = run("ptc", "--config", cfg, "--seed", 1, "--threads", 1, "--out", out)
        assert r.returncode == 0, r.stderr
    for name in ("results.csv", "ptc.csv", "ptc.dat"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()
    header = (outs[0] / "results.csv").read_text().splitlines()[0]
    assert header == "experiment_id,method,sigma,rho_or_M,trial,seed,success,rel_err,snr_db,psnr_db,wall_ms"
    assert (outs[0] / "ptc.csv").read_text().startswith("method,sigma,rho_half")


def test_output_directory_from_environment(tmp_path):
    env = dict(os.environ, ENTROMIN_OUT=str(tmp_path / "envout"))
    r = run("solve", "--method", "l1", "--n", 40, "--m", 20, "--sparsity", 3, env=env, cwd=tmp_path)
    assert r.returncode == 0, r.stderr
    assert (tmp_path / "envout" / "manifest.json").exists()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["envout"]


def test_noisy_manifest_records_measurement_snr(tmp_path):
    cfg = tmp_path / "noisy.json"
    cfg.write_text(json.dumps({"sweep": {"measurements": [125], "trials": 3}}))
    r = run("noisy", "--config", cfg, "--method", "l1,sef", "--lambda", 0.01, "--out", tmp_path / "n")
    assert r.returncode == 0, r.stderr
    m = manifest(tmp_path / "n")
    assert abs(m["summary"]["measurement_snr_db"][0] - 25.0) < 2.0
    assert set(m["summary"]["mean_snr_db"]) == {"l1", "sef"}

    # an explicit nu is echoed and its SNR recorded as measured
    r = run("noisy", "--config", cfg, "--method", "l1", "--lambda", 0.01, "--nu", 0.05, "--out", tmp_path / "n2")
    assert r.returncode == 0, r.stderr
    m2 = manifest(tmp_path / "n2")
    assert m2["config"]["sweep"]["nu"] == 0.05
    assert m2["summary"]["measurement_snr_db"][0] < m["summary"]["measurement_snr_db"][0]


def test_image_psnr_row_per_method(tmp_path):
    out = tmp_path / "img"
    r = run("image", "--input", DATA / "camera64.pgm", "--sigma", 0.3, "--nu", 0, "--out", out)
    assert r.returncode == 0, r.stderr
    rows = (out / "results.csv").read_text().splitlines()[1:]
    methods = [row.split(",")[1] for row in rows]
    assert sorted(methods) == ["l1", "lp", "ref", "sef"]
    psnr = {row.split(",")[1]: float(row.split(",")[9]) for row in rows}
    assert all(15.0 < v < 60.0 for v in psnr.values())
    assert len(list(out.glob("recovered_*.pgm"))) == 4


def test_image_rejects_bad_input(tmp_path):
    bad = tmp_path / "bad.pgm"
    bad.write_text("P2\n2 2\n255\n1 2 3 4\n")
    r = run("image", "--input", bad, "--out", tmp_path / "o")
    assert r.returncode == 2
