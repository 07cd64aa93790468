"""End-to-end CLI behavior: headers, exit codes, overrides, determinism."""

import csv
import io
import json
import subprocess
import sys

import pytest

from dirtymac.cli import main

RUNNER = "import sys; from dirtymac.cli import main; sys.exit(main(sys.argv[1:]))"


def run_cli(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def run_proc(*argv):
    return subprocess.run([sys.executable, "-c", RUNNER, *argv],
                          capture_output=True, timeout=600)


def parse_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


def test_region_header_and_vertex_counts(capsys):
    code, out, err = run_cli(
        capsys, "region", "--config", "fig2",
        "--set", "region.m_list=0,8",
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"]
    by_m = {}
    for r in rows:
        by_m.setdefault(int(r[0]), []).append(r)
    # doubly regions are triangles at nonzero SNR
    assert set(by_m) == {0, 8} and all(len(v) == 3 for v in by_m.values())
    assert all(r[4] == "mean-snr" for r in rows)
    # m-major row blocks, vertex index runs within each block
    ms = [int(r[0]) for r in rows]
    assert ms == sorted(ms)


def test_region_single_model_quadrilateral(capsys):
    code, out, _ = run_cli(
        capsys, "region", "--config", "fig2",
        "--set", "query.model=single", "--set", "query.rho=0.5",
        "--set", "scenario.p1_dbm=63",
        "--set", "region.m_list=16",
    )
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 4


def test_outage_single_point_csv(capsys):
    code, out, _ = run_cli(
        capsys, "outage", "--config", "fig3",
        "--set", "mc.n_trials=65536",
        "--set", "sweep.points=2",
        "--set", "sweep.start=-30", "--set", "sweep.stop=-25",
        "--set", "sweep.m_list=32",
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["gamma_tilde_db", "op_closed", "op_mc", "mc_halfwidth", "abs_diff"]
    assert len(rows) == 2
    for r in rows:
        assert abs(float(r[1]) - float(r[2])) == pytest.approx(float(r[4]), rel=1e-12)


def test_outage_without_sweep_section(capsys):
    # defaults carry no [sweep]; one row at the configured operating point
    code, out, _ = run_cli(capsys, "outage", "--set", "mc.n_trials=65536")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["gamma_tilde_db", "op_closed", "op_mc", "mc_halfwidth", "abs_diff"]
    assert len(rows) == 1


def test_sweep_requires_sweep_section(capsys):
    code, _, err = run_cli(capsys, "sweep")
    assert code == 1
    assert "sweep" in err


def test_unknown_key_rejected(capsys):
    code, _, err = run_cli(capsys, "region", "--set", "scenario.bogus=1")
    assert code == 1
    assert "scenario.bogus" in err


def test_unreadable_config_is_io_error(capsys):
    code, _, err = run_cli(capsys, "region", "--config", "/nonexistent/x.cfg")
    assert code == 2


def test_bad_value_named_in_message(capsys):
    code, _, err = run_cli(capsys, "region", "--set", "scenario.m1=-3")
    assert code == 1
    assert "m1" in err or "ris" in err


def test_single_model_without_rho_rejected(capsys):
    code, _, err = run_cli(capsys, "outage", "--set", "query.model=single",
                           "--set", "mc.n_trials=1024")
    assert code == 1
    assert "rho" in err


def test_json_format_round_trip(capsys):
    code, out, _ = run_cli(
        capsys, "region", "--config", "fig2", "--format", "json",
        "--set", "region.m_list=4",
    )
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 3
    assert set(rows[0]) == {"m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"}


def test_dist_check_grid(capsys):
    code, out, _ = run_cli(
        capsys, "dist-check", "--config", "fig3",
        "--set", "scenario.m1=4",
    )
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["g", "cdf_closed", "cdf_quadrature", "abs_diff"]
    assert len(rows) == 100
    assert max(float(r[3]) for r in rows) < 1e-6


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "reg.csv"
    code, out, _ = run_cli(capsys, "region", "--config", "fig2",
                           "--set", "region.m_list=2", "--out", str(target))
    assert code == 0
    header, rows = parse_csv(target.read_text())
    assert header == ["m", "vertex_index", "r1_bps_hz", "r2_bps_hz", "mode"]
    assert len(rows) == 3


def test_seed_flag_changes_mc(capsys):
    args = ("outage", "--set", "mc.n_trials=65536", "--set", "scenario.m1=2",
            "--set", "scenario.m2=2", "--set", "scenario.p1_dbm=50",
            "--set", "scenario.p2_dbm=50", "--set", "scenario.noise_dbm=10")
    _, out_a, _ = run_cli(capsys, *args, "--seed", "1")
    _, out_b, _ = run_cli(capsys, *args, "--seed", "2")
    assert out_a != out_b


def test_validate_reports_all_pass(capsys):
    code, out, _ = run_cli(capsys, "validate")
    assert code == 0
    assert "FAIL" not in out
    assert "PASS" in out


def test_rerun_bytes_identical_across_workers():
    args = ("outage", "--config", "fig3",
            "--set", "mc.n_trials=131072",
            "--set", "sweep.points=3",
            "--set", "sweep.start=-28", "--set", "sweep.stop=-24",
            "--set", "sweep.m_list=0,16")
    runs = [run_proc(*args, "--set", f"mc.workers={w}") for w in (1, 4, 1)]
    assert all(r.returncode == 0 for r in runs)
    assert runs[0].stdout == runs[1].stdout == runs[2].stdout
    assert len(runs[0].stdout) > 0
