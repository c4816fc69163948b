"""Command-line front end: files in, files out, exit codes."""

import json

import numpy as np
import pytest

from womkit.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, main, read_bitvector, write_bitvector


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write_bits(path, bits):
    write_bitvector(path, np.asarray(bits, dtype=np.uint8))


def test_gen_code_eg_ldpc_descriptor(workdir, capsys):
    code, out, _ = run(capsys, "gen-code", "eg-ldpc", "3", "1", "3", "2", "--out", "eg")
    assert code == EXIT_OK
    assert "n=511" in out and "k=139" in out
    desc = json.loads((workdir / "eg.json").read_text())
    assert desc["family"] == "eg-ldpc"
    assert (desc["n"], desc["k"]) == (511, 139)
    assert (workdir / "eg.alist").exists()


def test_gen_code_deterministic(workdir, capsys):
    for prefix in ("a", "b"):
        code, _, _ = run(capsys, "gen-code", "mackay", "--n", "96", "--r", "60",
                         "--seed", "7", "--out", prefix)
        assert code == EXIT_OK
    assert (workdir / "a.alist").read_bytes() == (workdir / "b.alist").read_bytes()
    da = json.loads((workdir / "a.json").read_text())
    db = json.loads((workdir / "b.json").read_text())
    assert da == db


def test_gen_code_bad_family(workdir, capsys):
    code, _, _ = run(capsys, "gen-code", "turbo", "--n", "64")
    assert code == EXIT_USAGE


@pytest.fixture()
def small_code(workdir, capsys):
    run(capsys, "gen-code", "mackay", "--n", "64", "--r", "40", "--seed", "3", "--out", "ld")
    k = json.loads((workdir / "ld.json").read_text())["k"]
    rng = np.random.default_rng(5)
    _write_bits(workdir / "m.txt", rng.integers(0, 2, k))
    _write_bits(workdir / "s.txt", np.ones(64, dtype=np.uint8))
    return workdir


def test_encode_decode_roundtrip(small_code, capsys):
    code, out, _ = run(capsys, "encode", "--code", "ld.json",
                       "--message", "m.txt", "--state", "s.txt", "--out", "x.txt")
    assert code == EXIT_OK and "wrote x.txt" in out
    x = read_bitvector(small_code / "x.txt", 64)
    assert set(np.unique(x)) <= {0, 1}
    code, _, _ = run(capsys, "decode", "--code", "ld.json",
                     "--state", "x.txt", "--out", "m2.txt")
    assert code == EXIT_OK
    assert (small_code / "m2.txt").read_text() == (small_code / "m.txt").read_text()


def test_encode_failure_marker_and_exit(small_code, capsys):
    # A fully frozen page admits only the all-zero write.
    _write_bits(small_code / "frozen.txt", np.zeros(64, dtype=np.uint8))
    code, _, err = run(capsys, "encode", "--code", "ld.json",
                       "--message", "m.txt", "--state", "frozen.txt", "--out", "x.txt")
    assert code == EXIT_DOMAIN
    assert "FAILURE" in err
    assert (small_code / "x.txt").read_text() == "FAILURE\n"


def test_encode_rejects_bad_vector(small_code, capsys):
    (small_code / "bad.txt").write_text("1\n0\n2\n")
    code, _, err = run(capsys, "encode", "--code", "ld.json",
                       "--message", "bad.txt", "--state", "s.txt")
    assert code == EXIT_USAGE
    assert "line 3" in err


def test_encode_rejects_truncated_alist(small_code, capsys):
    lines = (small_code / "ld.alist").read_text().splitlines(keepends=True)
    (small_code / "cut.alist").write_text("".join(lines[:4]))
    (small_code / "cut.json").write_text((small_code / "ld.json").read_text())
    code, _, err = run(capsys, "encode", "--code", "cut.json",
                       "--message", "m.txt", "--state", "s.txt")
    assert code == EXIT_USAGE
    assert "line" in err and "truncated" in err


def test_encode_rejects_bch_descriptor(workdir, capsys):
    run(capsys, "gen-code", "bch", "15", "5", "--out", "ecc")
    _write_bits(workdir / "m.txt", [1, 0, 1])
    _write_bits(workdir / "s.txt", np.ones(15, dtype=np.uint8))
    code, _, err = run(capsys, "encode", "--code", "ecc.json",
                       "--message", "m.txt", "--state", "s.txt")
    assert code == EXIT_USAGE
    assert "rewriting" in err


def test_sim_sweep_csv(workdir, capsys):
    cfg = {
        "code": {"family": "mackay", "n": 96, "r": 60, "seed": 2},
        "trials": 10,
        "master_seed": 4,
        "betas": [0.4, 0.7],
    }
    (workdir / "cfg.json").write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "sim", "--config", "cfg.json", "--out", "res.csv")
    assert code == EXIT_OK
    assert "wrote res.csv" in out
    lines = (workdir / "res.csv").read_text().splitlines()
    assert lines[0] == "axis,beta,rate,n,trials,failures,failure_rate,ci_low,ci_high,master_seed"
    assert len(lines) == 3


def test_sim_unknown_field_named(workdir, capsys):
    (workdir / "cfg.json").write_text(json.dumps({
        "code": {"family": "mackay", "n": 96, "r": 60},
        "trials": 5,
        "master_seed": 1,
        "bettas": [0.5],
    }))
    code, _, err = run(capsys, "sim", "--config", "cfg.json")
    assert code == EXIT_USAGE
    assert "bettas" in err


def test_sim_seed_and_threads_overrides(workdir, capsys):
    cfg = {
        "code": {"family": "mackay", "n": 96, "r": 60, "seed": 2},
        "trials": 20,
        "master_seed": 4,
        "betas": [0.5],
    }
    (workdir / "cfg.json").write_text(json.dumps(cfg))
    run(capsys, "sim", "--config", "cfg.json", "--out", "a.csv", "--seed", "11")
    run(capsys, "sim", "--config", "cfg.json", "--out", "b.csv", "--seed", "11", "--threads", "3")
    a = (workdir / "a.csv").read_text()
    assert a == (workdir / "b.csv").read_text()
    assert a.splitlines()[1].endswith(",11")


def test_sim_threads_env_fallback(workdir, capsys, monkeypatch):
    cfg = {
        "code": {"family": "mackay", "n": 96, "r": 60, "seed": 2},
        "trials": 10,
        "master_seed": 4,
        "betas": [0.5],
    }
    (workdir / "cfg.json").write_text(json.dumps(cfg))
    monkeypatch.setenv("WOMKIT_THREADS", "2")
    code, _, _ = run(capsys, "sim", "--config", "cfg.json", "--out", "env.csv")
    assert code == EXIT_OK
    monkeypatch.setenv("WOMKIT_THREADS", "many")
    code, _, err = run(capsys, "sim", "--config", "cfg.json")
    assert code == EXIT_USAGE
    assert "WOMKIT_THREADS" in err


def test_sim_scheme_campaign(workdir, capsys):
    cfg = {
        "scheme": {"kind": "conjugated", "m": 3, "mu": 1, "s": 2},
        "trials": 10,
        "master_seed": 6,
        "betas": [0.6],
        "p_raw": 1e-3,
    }
    (workdir / "cfg.json").write_text(json.dumps(cfg))
    code, out, _ = run(capsys, "sim", "--config", "cfg.json", "--out", "rep.json")
    assert code == EXIT_OK
    assert "scheme=conjugated" in out
    payload = json.loads((workdir / "rep.json").read_text())
    assert payload["counts"]["trials"] == 10
    assert payload["report"]["scheme"] == "conjugated"


def test_pd_prints_value(capsys):
    code, out, _ = run(capsys, "pd", "--n", "511", "--t", "3", "--p", "1.3e-3")
    assert code == EXIT_OK
    assert out.strip() == "1.0659e-05"
    code, out, _ = run(capsys, "pd", "--n", "511", "--t", "3", "--p", "1.3e-3",
                       "--weight", "block")
    assert float(out) == pytest.approx(4.7603e-3, rel=1e-3)


def test_verify_command_all_green(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == EXIT_OK
    assert "12/12 checks passed" in out
    assert "FAIL" not in out


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "gen-code", "mackay")[0] == EXIT_USAGE  # missing --n/--r
    assert run(capsys, "no-such-command")[0] == EXIT_USAGE
    assert run(capsys, "encode", "--code", "missing.json",
               "--message", "x", "--state", "y")[0] == EXIT_USAGE


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == EXIT_OK
