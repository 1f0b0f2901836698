import csv
import io
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

import frozen
from catnet.cat_algebra import channel_state, fidelity, load_state
from catnet.cli import main
from catnet.teleportation import single_mode_success

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestSweep:
    def test_header_golden(self, capsys):
        for line in (GOLDEN / "sweep_headers.txt").read_text().splitlines():
            quantity, header = line.split(": ", 1)
            code, out, _ = run(capsys, "sweep", "--quantity", quantity, "--start", "0", "--stop", "0")
            assert code == 0
            assert out.splitlines()[0] == header

    def test_values_golden(self, capsys):
        code, out, _ = run(capsys, "sweep", "--quantity", "concurrence", "--M", "6,7", "--start", "0", "--stop", "0.2", "--step", "0.1")
        golden = (GOLDEN / "concurrence_M67.csv").read_text()
        assert out.splitlines()[0] == golden.splitlines()[0]
        for got, want in zip(rows(out), rows(golden)):
            for k in want:
                assert float(got[k]) == pytest.approx(float(want[k]), abs=1e-11)

    def test_gen_prob_families(self, capsys):
        code, out, _ = run(capsys, "sweep", "--quantity", "gen_prob", "--Q", "3", "--M", "5,6,7")
        table = rows(out)
        assert len(table[0]) == 1 + 4 * 3
        assert float(table[0]["Pmm_Q3_M6"]) == pytest.approx(0.75)
        assert len(table) == 51

    def test_teleport_two_party_constant(self, capsys):
        code, out, _ = run(capsys, "sweep", "--quantity", "teleport_prob", "--N", "2", "--sign", "minus", "--start", "0.1", "--stop", "4")
        assert {r["Pi_sym_minus_N2_L1"] for r in rows(out)} == {"0.5"}

    def test_mean_photon_row(self, capsys):
        code, out, _ = run(capsys, "sweep", "--quantity", "mean_photon", "--M", "3", "--start", "1", "--stop", "1")
        (row,) = rows(out)
        assert float(row["nbar_minus_M3"]) == pytest.approx(frozen.NBAR_MINUS_M3_X1, abs=1e-11)
        assert float(row["nbar_plus_M3"]) == pytest.approx(frozen.NBAR_PLUS_M3_X1, abs=1e-11)

    def test_file_output_deterministic(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert run(capsys, "sweep", "--quantity", "gen_prob", "-o", str(p))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    @pytest.mark.parametrize(
        "argv",
        [
            ("--step", "0"),
            ("--start", "-1"),
            ("--M", "9"),
            ("--quantity", "bogus"),
        ],
    )
    def test_usage_errors(self, argv, capsys):
        base = ["sweep", "--quantity", "gen_prob"]
        if argv[0] == "--quantity":
            base = ["sweep"]
        assert run(capsys, *base, *argv)[0] == 2


class TestTeleport:
    def test_two_party(self, capsys):
        code, out, _ = run(capsys, "teleport", "--N", "2", "--L", "1", "--sign", "minus", "--alpha2", "1", "--trials", "100000", "--seed", "7")
        rep = json.loads(out)
        assert code == 0 and rep["agree"]
        assert rep["analytic"] == 0.5
        assert abs(rep["estimate"] - 0.5) <= 4 * rep["std_error"]
        assert sum(rep["case_counts"].values()) == 100000

    def test_three_party_analytic(self, capsys):
        code, out, _ = run(capsys, "teleport", "--N", "3", "--alpha2", "1", "--trials", "2000", "--seed", "1")
        assert json.loads(out)["analytic"] == pytest.approx(frozen.PI3_MINUS_X1, abs=1e-15)

    def test_asymmetric_analytic(self, capsys):
        code, out, _ = run(capsys, "teleport", "--N", "2", "--asymmetric", "--L", "2", "--alpha2", "1", "--trials", "2000")
        assert json.loads(out)["analytic"] == single_mode_success(3, 1.0)

    def test_deterministic_and_env_seed(self, capsys, monkeypatch):
        argv = ("teleport", "--N", "3", "--trials", "3000", "--samples", "2")
        monkeypatch.setenv("CATSIM_SEED", "41")
        _, a, _ = run(capsys, *argv)
        _, b, _ = run(capsys, *argv)
        assert a == b and json.loads(a)["seed"] == 41
        _, c, _ = run(capsys, *argv, "--seed", "41")
        assert c == a
        monkeypatch.setenv("CATSIM_SEED", "nope")
        assert run(capsys, *argv)[0] == 2

    def test_disagreement_exit(self, capsys, monkeypatch):
        # a closed form shifted far from the simulation must be reported as a disagreement
        import catnet.cli as cli

        monkeypatch.setattr(cli, "success_probability_analytic", lambda cfg: 0.9)
        code, out, _ = run(capsys, "teleport", "--trials", "2000")
        assert code == 1 and not json.loads(out)["agree"]

    def test_complex_alpha(self, capsys):
        code, out, _ = run(capsys, "teleport", "--alpha-re", "0.6", "--alpha-im", "0.8", "--trials", "1000")
        assert json.loads(out)["config"]["alpha"] == [0.6, 0.8]

    @pytest.mark.parametrize("argv", [("--sender", "2", "--receiver", "2"), ("--alpha2", "0"), ("--trials", "0"), ("--x-re", "0", "--y-re", "0"), ("--bogus",)])
    def test_usage_errors(self, argv, capsys):
        assert run(capsys, "teleport", *argv)[0] == 2

    def test_config_file(self, tmp_path, capsys):
        cfg = tmp_path / "c.json"
        cfg.write_text(json.dumps({"N": 3, "alpha2": 1.0, "trials": 1000, "samples": 0, "seed": 5}))
        code, out, _ = run(capsys, "--config", str(cfg), "teleport")
        rep = json.loads(out)
        assert rep["config"]["N"] == 3 and rep["trials"] == 1000 and rep["seed"] == 5
        # explicit flags win over the file
        code, out, _ = run(capsys, "--config", str(cfg), "teleport", "--trials", "500")
        assert json.loads(out)["trials"] == 500

    def test_bad_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"nope": 1}))
        assert run(capsys, "--config", str(bad), "teleport")[0] == 2
        assert run(capsys, "--config", str(tmp_path / "missing.json"), "teleport")[0] == 2


class TestGenerate:
    def test_tree_power_of_two(self, capsys):
        code, out, _ = run(capsys, "generate", "--M", "8", "--scheme", "tree")
        rep = json.loads(out)
        assert code == 0 and rep["measurements"] == 0 and rep["fidelity"] == pytest.approx(1.0, abs=1e-12)

    def test_ladder(self, capsys):
        code, out, _ = run(capsys, "generate", "--M", "5", "--scheme", "ladder", "--sign", "plus")
        assert json.loads(out)["fidelity"] == pytest.approx(1.0, abs=1e-12)

    def test_reduction_frequency(self, capsys, tmp_path):
        dump = tmp_path / "s.json"
        code, out, _ = run(capsys, "generate", "--M", "6", "--source", "minus", "--trials", "100000", "--seed", "3", "--dump-state", str(dump))
        rep = json.loads(out)
        assert code == 0 and rep["agree"]
        assert rep["analytic"] == pytest.approx(frozen.PMM_Q3_M6_X1, abs=1e-14)
        assert abs(rep["target_frequency"] - rep["analytic"]) <= 4 * rep["std_error"]
        assert rep["measured_modes"] == [7, 8]
        assert fidelity(load_state(dump), channel_state(6, "minus", 1.0)) == pytest.approx(1.0, abs=1e-10)

    def test_small_alpha_frequency(self, capsys):
        code, out, _ = run(capsys, "generate", "--M", "6", "--alpha2", "1e-6", "--source", "minus", "--trials", "20000")
        rep = json.loads(out)
        assert rep["analytic"] == pytest.approx(0.75, abs=1e-3)
        assert abs(rep["target_frequency"] - 0.75) <= 4 * rep["std_error"] + 1e-3

    def test_numeric_guard(self, capsys):
        code, _, err = run(capsys, "generate", "--M", "6", "--scheme", "ladder", "--alpha-re", "1e-13")
        assert code == 3 and "ZeroNormError" in err

    def test_usage(self, capsys):
        assert run(capsys, "generate", "--M", "1")[0] == 2
        assert run(capsys, "generate", "--M", "5", "--scheme", "ladder", "--source", "plus", "--sign", "minus")[0] == 2


class TestValidate:
    @pytest.mark.parametrize("suite", ["oracle", "identities", "limits"])
    def test_suites_pass(self, suite, capsys):
        code, out, _ = run(capsys, "validate", "--suite", suite)
        rep = json.loads(out)
        assert code == 0 and rep["passed"] and rep["checks"]

    def test_identity_residual(self, capsys):
        _, out, _ = run(capsys, "validate", "--suite", "identities")
        checks = {c["name"]: c for c in json.loads(out)["checks"]}
        assert checks["identity.Pcc_ratio"]["discrepancy"] < 1e-12

    def test_failure_exit(self, capsys):
        code, out, _ = run(capsys, "validate", "--suite", "limits", "--tolerance", "0")
        assert code == 1 and not json.loads(out)["passed"]


class TestDumpState:
    @pytest.mark.parametrize("kind,M", [("channel", 3), ("ladder", 3), ("tree", 4)])
    def test_kinds(self, kind, M, tmp_path, capsys):
        p = tmp_path / "s.json"
        assert run(capsys, "dump-state", "--kind", kind, "--M", str(M), "--alpha2", "0.5", "-o", str(p))[0] == 0
        assert fidelity(load_state(p), channel_state(M, "minus", math.sqrt(0.5))) == pytest.approx(1.0, abs=1e-10)

    def test_input(self, capsys):
        code, out, _ = run(capsys, "dump-state", "--kind", "input", "--L", "2")
        assert json.loads(out)["modes"] == 2

    def test_tree_needs_power_of_two(self, capsys):
        assert run(capsys, "dump-state", "--kind", "tree", "--M", "3")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "catnet", "sweep", "--quantity", "teleport_prob", "--N", "3", "--start", "1", "--stop", "1"],
        capture_output=True, text=True, check=True,
    )
    (row,) = rows(proc.stdout)
    assert float(row["Pi_sym_minus_N3_L1"]) == pytest.approx(frozen.PI3_MINUS_X1, abs=1e-11)
