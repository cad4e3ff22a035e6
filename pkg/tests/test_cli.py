"""The command-line surface: formats, exit codes, determinism, cache admin."""

import json
import math
import subprocess

import pytest

from cmzv.cli import RunConfig, main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---- single-value subcommands ----


def test_sym_weight_one_is_minus_pi_i(capsys):
    code, out, err = run_cli(["sym", "--N", "1", "--index", "k=1;e=0"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {
        "index", "alpha", "N", "value_re", "value_im", "tol",
        "t_poly_coeffs", "t_independence_ok",
    }
    assert doc["value_re"] == 0.0
    assert doc["value_im"] == -math.pi
    assert doc["t_independence_ok"] is True
    manifest = json.loads(err)
    assert manifest["tool"] == "cmzv"
    assert "version" in manifest and "wall_time_s" in manifest
    assert manifest["config"]["seed"] == 0
    assert manifest["invocation"]["index"] == "k=1;e=0"


def test_sym_level_two(capsys):
    code, out, _ = run_cli(
        ["sym", "--N", "2", "--index", "k=1;e=1", "--cutoff", "100000"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["value_re"] == pytest.approx(-2 * math.log(2), abs=1e-4)


def test_mtdim_table(capsys):
    code, out, _ = run_cli(["mtdim", "--N", "5", "--wmax", "4"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "weight,mt_dim"
    assert [line.split(",")[1] for line in lines[1:]] == ["2", "6", "18", "54"]


def test_mtdim_json_format(capsys):
    code, out, _ = run_cli(
        ["mtdim", "--N", "2", "--wmax", "3", "--format", "json"], capsys
    )
    assert code == 0
    doc = json.loads(out)
    assert [row["mt_dim"] for row in doc] == [1, 1, 2]


# ---- tables ----


def test_qsum_csv_columns(capsys):
    code, out, _ = run_cli(
        ["qsum", "--N", "1", "--index", "k=2;e=0", "--m", "101,1001"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,re,im,predicted_re,predicted_im,residual_abs"
    first = lines[1].split(",")
    second = lines[2].split(",")
    assert float(second[5]) < float(first[5])  # residual shrinks along the grid


def test_finite_rows(capsys):
    code, out, _ = run_cli(
        ["finite", "--N", "3", "--index", "k=1,1;e=1,2", "--primes", "3"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p,residue,field_degree"
    assert lines[1] == "7,6,1"


def test_finite_congruence_syntax(capsys):
    code, out, _ = run_cli(
        ["finite", "--N", "2", "--index", "k=1;f=1", "--primes", "2"], capsys
    )
    assert code == 0
    assert out.strip().splitlines()[1] == "5,3,1"  # 1 + 1/3 = 3 mod 5


def test_dim_csv(tmp_path, capsys):
    code, out, _ = run_cli(
        ["dim", "--N", "1", "--wmax", "3", "--primes", "8", "--verify-primes", "4",
         "--cache-dir", str(tmp_path)],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("weight,generators,exact_relation_rank")
    dims = [line.split(",")[4] for line in lines[1:]]
    assert dims == ["0", "0", "1"]


def test_dim_json_ledger(tmp_path, capsys):
    code, out, _ = run_cli(
        ["dim", "--N", "1", "--wmax", "2", "--primes", "8", "--verify-primes", "4",
         "--cache-dir", str(tmp_path), "--format", "json"],
        capsys,
    )
    assert code == 0
    doc = json.loads(out)
    assert [row["dim"] for row in doc] == [0, 0]
    rels = doc[1]["relations"]
    assert len(rels) == 2
    for rel in rels:
        assert rel["verified_primes"] == 12
        assert rel["coefficients"]  # every relation lists its coefficients


# ---- check suite ----


def test_check_passes_and_is_seeded(tmp_path, capsys):
    argv = ["check", "--count", "4", "--primes", "3", "--seed", "11", "--wmax", "4"]
    code1, out1, _ = run_cli(argv, capsys)
    code2, out2, _ = run_cli(argv, capsys)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["passed"] is True
    assert doc["instances"] == 8
    assert doc["failures"] == []


# ---- exit codes ----


def test_unknown_flag_is_usage_error(capsys):
    assert run_cli(["dim", "--N", "1", "--wmax", "2", "--bogus"], capsys)[0] == 2


def test_missing_subcommand_is_usage_error(capsys):
    assert run_cli([], capsys)[0] == 2


def test_bad_index_is_computation_error(capsys):
    code, _, err = run_cli(["sym", "--N", "1", "--index", "k=x;e=0"], capsys)
    assert code == 1
    assert "error:" in err


def test_divergent_index_is_computation_error(capsys):
    # (1, e=0) at the leading slot is admissible only for the symmetric value;
    # a plain divergent request must fail loudly, not silently regularize
    code, _, _ = run_cli(["qsum", "--N", "1", "--index", "k=0;e=0"], capsys)
    assert code in (1, 2)


# ---- output files, manifests, determinism ----


def test_out_file_and_manifest(tmp_path, capsys):
    target = tmp_path / "sym.json"
    code, out, err = run_cli(
        ["sym", "--N", "1", "--index", "k=2;e=0", "--out", str(target)], capsys
    )
    assert code == 0
    assert out == ""
    doc = json.loads(target.read_text())
    assert doc["value_re"] == pytest.approx(math.pi**2 / 3, rel=1e-4)
    manifest = json.loads((tmp_path / "sym.json.manifest.json").read_text())
    assert manifest["invocation"]["N"] == 1
    assert manifest["config"]["command"] == "sym"


def test_identical_config_reproduces_bytes(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["dim", "--N", "2", "--wmax", "2", "--primes", "8", "--verify-primes", "4",
            "--cache-dir", str(tmp_path / "cache")]
    assert run_cli(base + ["--out", str(a)], capsys)[0] == 0
    assert run_cli(base + ["--out", str(b)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


# ---- cache admin ----


def test_cache_admin_round_trip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CMZV_CACHE_DIR", str(tmp_path))
    code, out, _ = run_cli(["cache", "stat"], capsys)
    assert code == 0
    assert out.strip() == "N,alpha,p,entries"  # empty cache, header only

    run_cli(["dim", "--N", "1", "--wmax", "2", "--primes", "4", "--verify-primes", "2"],
            capsys)
    code, stat_before, _ = run_cli(["cache", "stat"], capsys)
    rows = stat_before.strip().splitlines()[1:]
    assert len(rows) == 6  # one per prime
    assert all(row.split(",")[3] == "3" for row in rows)  # generators at w<=2

    bundle = tmp_path / "bundle.jsonl"
    assert run_cli(["cache", "export", "--out", str(bundle)], capsys)[0] == 0
    assert run_cli(["cache", "clear"], capsys)[0] == 0
    _, stat_empty, _ = run_cli(["cache", "stat"], capsys)
    assert stat_empty.strip() == "N,alpha,p,entries"
    assert run_cli(["cache", "import", "--file", str(bundle)], capsys)[0] == 0
    _, stat_after, _ = run_cli(["cache", "stat"], capsys)
    assert stat_after == stat_before


def test_cache_stat_json(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CMZV_CACHE_DIR", str(tmp_path))
    code, out, _ = run_cli(["cache", "stat", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out) == {"total": 0, "classes": []}


# ---- config validation and console entry ----


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(command="dim", N=0)
    with pytest.raises(ValueError):
        RunConfig(command="dim", cutoff=0)
    with pytest.raises(ValueError):
        RunConfig(command="dim", train_primes=0)


def test_console_script_help():
    proc = subprocess.run(["cmzv", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for sub in ("qsum", "finite", "sym", "dim", "check", "mtdim", "cache"):
        assert sub in proc.stdout
    help_dim = subprocess.run(["cmzv", "dim", "--help"], capture_output=True, text=True)
    assert help_dim.returncode == 0
    for flag in ("--format", "--primes", "--verify-primes", "--cutoff", "--prec",
                 "--seed", "--jobs"):
        assert flag in help_dim.stdout
