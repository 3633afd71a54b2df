import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from logicalnoise import experiments as E
from logicalnoise.cli import main, parse_grid

XROT = '{"type":"rotation","axis":"X","angle":0.2}'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestParseGrid:
    def test_forms(self):
        assert parse_grid("0.1,0.2") == [0.1, 0.2]
        assert parse_grid("linspace:0:1:3") == [0.0, 0.5, 1.0]
        g = parse_grid("logspace:0.01:0.2:10")
        assert len(g) == 10 and g[0] == pytest.approx(0.01) and g[-1] == pytest.approx(0.2)
        assert parse_grid("") == []


class TestLogical:
    def test_rotation_report(self, capsys):
        code, out, _ = run(capsys, "logical", "--code", "repetition:3", "--noise", XROT)
        assert code == 0
        report = json.loads(out)
        assert len(report["syndromes"]) == 4
        assert report["probability_sum"] == pytest.approx(1.0, abs=1e-12)
        assert sum(s["probability"] for s in report["syndromes"]) == pytest.approx(1.0, abs=1e-12)

    def test_identity(self, capsys):
        code, out, _ = run(capsys, "logical", "--code", "steane", "--noise", "identity")
        report = json.loads(out)
        assert code == 0
        assert report["syndromes"][0]["probability"] == 1.0
        assert report["average"]["metrics"]["logical_infidelity"] == 0

    def test_verify_five_qubit(self, capsys):
        noise = '{"type":"compose","channels":[{"type":"rotation","axis":[0.6,0,0.8],"angle":0.3},' \
                '{"type":"amplitude_damping","gamma":0.05}]}'
        code, out, err = run(capsys, "logical", "--code", "five_qubit", "--noise", noise, "--verify")
        assert code == 0
        assert "max deviation" in err and "< 1e-10" in err
        assert json.loads(out)["verification"]["max"] < 1e-10

    def test_recovery_table_file(self, capsys, tmp_path):
        table = tmp_path / "rec.json"
        table.write_text(json.dumps({"10": "XII", "01": "IIX", "11": "IXI"}))
        code, out, _ = run(capsys, "logical", "--code", "repetition:3", "--noise", XROT, "--recovery", f"@{table}")
        assert code == 0
        assert json.loads(out)["recovery"] == "table"

    def test_code_file_and_out(self, capsys, tmp_path):
        spec = {"name": "rep3", "d": 1, "generators": ["ZZI", "IZZ"], "logical_x": ["XXX"], "logical_z": ["ZII"]}
        path = tmp_path / "code.json"
        path.write_text(json.dumps(spec))
        out_path = tmp_path / "report.json"
        code, out, _ = run(capsys, "logical", "--code", f"@{path}", "--noise", XROT, "--out", str(out_path))
        assert code == 0 and out == ""
        assert json.loads(out_path.read_text())["code"]["name"] == "rep3"

    @pytest.mark.parametrize(
        "noise",
        ['{"type":"depolarizing","p":2.0}', '{"type":"nonsense"}', "{not json", '[{"type":"identity"}]'],
    )
    def test_bad_noise(self, capsys, noise):
        code, _, err = run(capsys, "logical", "--code", "repetition:3", "--noise", noise)
        assert code == 2
        assert err.startswith("error:")

    def test_bad_code(self, capsys):
        code, _, err = run(capsys, "logical", "--code", "surface:3", "--noise", "identity")
        assert code == 2


class TestSweep:
    def test_empty_grid(self, capsys):
        code, _, err = run(capsys, "sweep", "--codes", "repetition:3", "--noise", '{"type":"rotation","axis":"X"}',
                           "--grid", "")
        assert code == 2
        assert "empty" in err

    def test_pauli_sweep_is_diagonal(self, capsys):
        code, out, _ = run(capsys, "sweep", "--codes", "repetition:3,repetition:5", "--noise", '{"type":"bit_flip"}',
                           "--param", "p", "--grid", "logspace:0.001:0.1:5")
        assert code == 0
        rows = [r for r in read_csv(out) if r["kind"] == "point"]
        assert len(rows) == 10
        assert all(float(r["max_offdiag"]) < 1e-12 for r in rows)

    def test_columns_and_fit_rows(self, capsys):
        code, out, _ = run(capsys, "sweep", "--codes", "repetition:3", "--noise", '{"type":"rotation","axis":"X"}',
                           "--grid", "logspace:0.02:0.2:6", "--verify")
        assert code == 0
        assert out.splitlines()[0] == ",".join(E.SWEEP_COLUMNS)
        rows = read_csv(out)
        fit = [r for r in rows if r["kind"] == "fit"]
        assert len(fit) == 1
        assert float(fit[0]["max_offdiag"]) == pytest.approx(1.5, rel=0.1)
        assert all(float(r["oracle_dev"]) < 1e-10 for r in rows if r["kind"] == "point")

    def test_config_file(self, capsys, tmp_path):
        cfg = {"codes": ["repetition:3"], "noise": {"type": "rotation", "axis": "X"}, "param": "angle",
               "grid": [0.05, 0.1], "recovery": "none"}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        code, out, _ = run(capsys, "sweep", "--config", f"@{path}")
        assert code == 0
        assert len([r for r in read_csv(out) if r["kind"] == "point"]) == 2

    def test_deterministic_and_parallel(self, capsys):
        args = ["sweep", "--codes", "repetition:3,five_qubit", "--noise", '{"type":"rotation","axis":"X"}',
                "--grid", "0.05,0.1,0.15"]
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        _, c, _ = run(capsys, *args, "--jobs", "2")
        assert a == b == c


class TestRounds:
    def test_pauli_noise_has_no_coherent_columns(self, capsys):
        code, out, err = run(capsys, "rounds", "--code", "repetition:3", "--noise", '{"type":"bit_flip","p":0.01}',
                             "--hs", "1,10,100")
        assert code == 0
        rows = read_csv(out)
        assert all(float(r["coherent_coherent"]) == 0 for r in rows)
        assert all(abs(float(r["exact_coherent"])) < 1e-15 for r in rows)
        assert json.loads(err)["h_crit"] is None

    def test_first_round_exact(self, capsys):
        code, out, _ = run(capsys, "rounds", "--code", "repetition:3", "--noise", XROT, "--hs", "1")
        for r in read_csv(out):
            assert float(r["exact_diag"]) == pytest.approx(1 - float(r["first_order"]), abs=1e-15)

    def test_h_crit_order_of_magnitude(self, capsys, tmp_path):
        r = 1e-3
        noise = json.dumps({"type": "rotation", "axis": "X", "angle": float(np.arccos(1 - 3 * r))})
        summary = tmp_path / "summary.json"
        code, _, _ = run(capsys, "rounds", "--code", "repetition:3", "--noise", noise, "--hs", "1,1000",
                         "--summary", str(summary))
        assert code == 0
        h = json.loads(summary.read_text())["h_crit"]
        assert 1 / (5 * r) <= h <= 5 / r

    def test_bad_hs(self, capsys):
        code, _, _ = run(capsys, "rounds", "--code", "repetition:3", "--noise", XROT, "--hs", "0,5")
        assert code == 2


class TestFuzz:
    def test_deterministic(self, capsys):
        _, a, _ = run(capsys, "fuzz-lemma1", "--count", "1", "--seed", "3")
        _, b, _ = run(capsys, "fuzz-lemma1", "--count", "1", "--seed", "3")
        assert a == b

    def test_passes(self, capsys):
        code, out, _ = run(capsys, "fuzz-lemma1", "--count", "2000", "--seed", "1")
        report = json.loads(out)
        assert code == 0 and report["passed"]
        assert sum(report["violations"].values()) == 0

    def test_identity_list(self):
        report = E.fuzz_lemma1(0, ptms=np.eye(4)[None])
        assert report.passed
        assert all(v == 0 for v in report.min_slack.values())

    def test_bad_count(self, capsys):
        code, _, _ = run(capsys, "fuzz-lemma1", "--count", "0")
        assert code == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "logicalnoise.cli", "logical", "--code", "repetition:3", "--noise", "identity"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert len(json.loads(proc.stdout)["syndromes"]) == 4
