import json

import pytest

from abelcert.cli import main
from abelcert.morphism import UniformCyclicMorphism, fixed_point_prefix
from abelcert.words import Word


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_gen_and_scan(tmp_path, capsys):
    word = tmp_path / "w.txt"
    assert run(capsys, "gen", "--t", "3", "--out", str(word))[0] == 0
    assert Word.parse(word.read_text()) == fixed_point_prefix(UniformCyclicMorphism.default(), 3)
    report = tmp_path / "r.json"
    code, out = run(capsys, "scan", "--in", str(word), "--cap", "1000", "--report", str(report))
    assert code == 0 and "max exponent" in out
    data = json.loads(report.read_text())
    assert data["max_witness"]["exponent"].count("/") == 1


def test_gen_with_seed(tmp_path, capsys):
    word = tmp_path / "w.txt"
    assert run(capsys, "gen", "--t", "1", "--seed", "07", "--out", str(word))[0] == 0
    assert word.read_text() == "0740103050260" "7637072747157\n"


def test_scan_violations_mode(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out = run(capsys, "--workers", "2", "scan", "--t", "3", "--cap", "1000", "--threshold", "7/5",
                    "--mode", "violations", "--report", str(report))
    assert code == 1
    assert json.loads(report.read_text())["violations"]
    code, _ = run(capsys, "scan", "--t", "3", "--cap", "1000", "--threshold", "1.713",
                  "--mode", "violations", "--period-limit", "500", "--report", str(report))
    assert code == 0


def test_bound(capsys):
    code, out = run(capsys, "bound", "--n", "999/24", "--c", "841/491")
    assert code == 0 and "bound = 876775/489527 ~ 1.791066" in out


def test_depth_and_cap(capsys):
    code, out = run(capsys, "depth", "--length", "2403")
    assert code == 0 and "2403 -> 186 -> 16 -> 3 -> 2" in out and "t_min = 4" in out
    code, out = run(capsys, "cap", "--threshold", "1713/1000", "--max-x1", "1000")
    assert code == 0 and "< 2403" in out


def test_descend(capsys):
    code, out = run(capsys, "descend", "--t", "5", "--start", "21295", "--m", "350", "--p", "491",
                    "--n", "2")
    assert code == 0
    step = json.loads(out.splitlines()[0])
    assert step["child"] == {"start": 1638, "m": 27, "p": 38, "exponent": "65/38"}


def test_descend_bad_witness(capsys):
    code, _ = run(capsys, "descend", "--t", "5", "--start", "0", "--m", "350", "--p", "491", "--n", "2")
    assert code == 2


def test_props(capsys):
    code, out = run(capsys, "props", "--samples", "50", "--t", "3")
    assert code == 0 and "pairs checked: 50" in out


def test_verify_paper_and_replay(tmp_path, capsys):
    cert = tmp_path / "c.json"
    code, out = run(capsys, "verify-paper", "--t", "3", "--out", str(cert))
    assert code == 0 and "status: verified" in out
    assert run(capsys, "replay", "--cert", str(cert), "--t", "3")[0] == 0
    assert run(capsys, "replay", "--cert", str(cert), "--t", "2")[0] == 2


def test_verify_paper_failure_exit(tmp_path, capsys):
    cert = tmp_path / "c.json"
    code, _ = run(capsys, "verify-paper", "--t", "3", "--threshold", "7/5", "--out", str(cert))
    assert code == 1 and cert.exists()


def test_operational_errors(tmp_path, capsys):
    assert run(capsys, "verify-paper", "--cap", "0", "--out", str(tmp_path / "c.json"))[0] == 2
    assert run(capsys, "scan", "--in", str(tmp_path / "missing"), "--cap", "5",
               "--report", str(tmp_path / "r"))[0] == 2
    with pytest.raises(SystemExit):
        main(["bound", "--n", "abc", "--c", "1"])
