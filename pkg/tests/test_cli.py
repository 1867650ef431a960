"""End-to-end command line checks: formats, determinism, exit codes."""

import json

import numpy as np
import pytest

from spinsphere import cli, geometry, oracle


def run(argv):
    return cli.main(argv)


def write_config(path, **kw):
    payload = dict(
        n_trials=2000,
        seed=17,
        lambda_mode="balanced_exact",
        alignment_mode="unit",
        direction_pairs={"start_deg": 0.0, "stop_deg": 180.0, "step_deg": 45.0},
    )
    payload.update(kw)
    path.write_text(json.dumps(payload))
    return path


def test_distances_default_grid(tmp_path):
    out = tmp_path / "d.csv"
    assert run(["distances", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "eta,su2,so3"
    assert len(lines) == 362  # header + 0..360 inclusive
    for line in (lines[1], lines[46], lines[91], lines[181]):
        deg, su2, so3 = (float(x) for x in line.split(","))
        eta = np.radians(deg)
        assert su2 == geometry.su2_distance(eta)
        assert so3 == geometry.so3_distance(eta)


def test_distances_rerun_byte_identical(tmp_path):
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    run(["distances", "--output", str(first)])
    run(["distances", "--output", str(second)])
    assert first.read_bytes() == second.read_bytes()


def test_distances_json_format(tmp_path):
    out = tmp_path / "d.json"
    assert run(["distances", "--format", "json", "--output", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 361
    assert rows[90]["eta"] == 90.0
    assert abs(rows[90]["su2"]) < 1e-15


def test_distances_grid_flags_validated(tmp_path):
    out = tmp_path / "d.csv"
    assert run(["distances", "--step", "0", "--output", str(out)]) == 1
    assert run(["distances", "--start", "10", "--stop", "0", "--output", str(out)]) == 1


def test_oracle_default_grid(tmp_path):
    out = tmp_path / "o.csv"
    assert run(["oracle", "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "theta_deg,oracle"
    assert len(lines) == 38
    deg, value = (float(x) for x in lines[13].split(","))
    assert value == oracle.sign_model_correlation(np.radians(deg))


def test_simulate_csv(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    out = tmp_path / "s.csv"
    assert run(["simulate", str(cfg), "--output", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert (
        lines[0]
        == "eta_deg,raw_mc,raw_stderr,std_score,residual,scalar_form,su2_ref,so3_ref"
    )
    assert len(lines) == 6  # header + 0,45,90,135,180
    first = [float(x) for x in lines[1].split(",")]
    assert first[0] == 0.0
    assert first[1] == -1.0  # raw at equal settings
    assert first[5] == -1.0  # scalar form
    last = [float(x) for x in lines[-1].split(",")]
    assert last[6] == 1.0 and last[7] == 1.0


def test_simulate_threads_byte_identical(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    one = tmp_path / "one.csv"
    eight = tmp_path / "eight.csv"
    assert run(["simulate", str(cfg), "--threads", "1", "--output", str(one)]) == 0
    assert run(["simulate", str(cfg), "--threads", "8", "--output", str(eight)]) == 0
    assert one.read_bytes() == eight.read_bytes()


def test_simulate_seed_override_changes_output(tmp_path):
    cfg = write_config(tmp_path / "cfg.json")
    base = tmp_path / "base.csv"
    other = tmp_path / "other.csv"
    run(["simulate", str(cfg), "--output", str(base)])
    run(["simulate", str(cfg), "--seed", "99", "--output", str(other)])
    assert base.read_bytes() != other.read_bytes()
    rerun = tmp_path / "rerun.csv"
    run(["simulate", str(cfg), "--seed", "99", "--output", str(rerun)])
    assert other.read_bytes() == rerun.read_bytes()


def test_simulate_config_errors(tmp_path):
    missing = tmp_path / "nope.json"
    assert run(["simulate", str(missing), "--output", str(tmp_path / "x.csv")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["simulate", str(bad), "--output", str(tmp_path / "x.csv")]) == 1
    unknown = write_config(tmp_path / "unknown.json")
    unknown.write_text(json.dumps({"n_trials": 10, "seed": 1, "extra": True}))
    assert run(["simulate", str(unknown), "--output", str(tmp_path / "x.csv")]) == 1
    odd = write_config(tmp_path / "odd.json", n_trials=11)
    assert run(["simulate", str(odd), "--output", str(tmp_path / "x.csv")]) == 1


def test_output_io_error(tmp_path):
    target = tmp_path / "no" / "such" / "dir" / "out.csv"
    assert run(["distances", "--output", str(target)]) == 2


def test_torsion_check_default_suite(tmp_path):
    out = tmp_path / "t.json"
    assert run(["torsion-check", "--n-points", "5", "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert report["h"] == 1e-4
    assert len(report["points"]) == 5
    for record in report["points"]:
        assert record["max_abs_curvature"] < 1e-5
        assert record["max_abs_torsion"] > 1e-3
    assert report["summary"]["max_abs_curvature"] == max(
        r["max_abs_curvature"] for r in report["points"]
    )
    rerun = tmp_path / "t2.json"
    run(["torsion-check", "--n-points", "5", "--output", str(rerun)])
    assert out.read_bytes() == rerun.read_bytes()


def test_torsion_check_points_file(tmp_path):
    points = tmp_path / "pts.json"
    points.write_text(json.dumps([[1.0, 1.2, 0.8], [0.7, 1.9, 2.5]]))
    out = tmp_path / "t.json"
    assert run(["torsion-check", str(points), "--output", str(out)]) == 0
    report = json.loads(out.read_text())
    assert [r["point"] for r in report["points"]] == [[1.0, 1.2, 0.8], [0.7, 1.9, 2.5]]


def test_torsion_check_empty_points_file(tmp_path):
    points = tmp_path / "pts.json"
    points.write_text("[]")
    assert run(["torsion-check", str(points), "--output", str(tmp_path / "t.json")]) == 1


def test_torsion_check_domain_error(tmp_path):
    points = tmp_path / "pts.json"
    points.write_text(json.dumps([[0.05, 1.2, 0.8]]))
    assert run(["torsion-check", str(points), "--output", str(tmp_path / "t.json")]) == 3


def test_torsion_check_step_flag_domain(tmp_path):
    assert run(["torsion-check", "--h", "0.5", "--n-points", "1",
                "--output", str(tmp_path / "t.json")]) == 3


def test_chsh_report(tmp_path):
    out = tmp_path / "c.json"
    assert run(["chsh", "--kind", "su2_cosine", "--output", str(out)]) == 0
    text = out.read_text()
    assert "2.8284271247461903" in text
    report = json.loads(text)
    assert report["kind"] == "su2_cosine"
    assert report["bound"] == 2.8284271247461903
    assert abs(report["max_abs_chsh"] - 2.8284271247461903) < 1e-3
    assert len(report["argmax_degrees"]) == 4


def test_chsh_budget_flag(tmp_path):
    out = tmp_path / "c.json"
    assert run(["chsh", "--budget", "10", "--output", str(out)]) == 1


def test_flags_accepted_before_subcommand(tmp_path):
    before = tmp_path / "before.csv"
    after = tmp_path / "after.csv"
    assert run(["--output", str(before), "distances"]) == 0
    assert run(["distances", "--output", str(after)]) == 0
    assert before.read_bytes() == after.read_bytes()


def test_stdout_default(capsys):
    assert run(["oracle", "--step", "45"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "theta_deg,oracle"
    assert len(lines) == 6


def test_unknown_command_exits_one(capsys):
    assert run(["no-such-command"]) == 1
    capsys.readouterr()
