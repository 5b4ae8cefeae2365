import json
import subprocess
import sys

import pytest

from horidgca.cli import main


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "horidgca.cli", *map(str, args)],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def universal(corpus):
    return corpus / "valid" / "universal.dgca"


def test_check_universal_json_is_deterministic(universal):
    code1, out1, _ = run(universal, "check", "--json")
    code2, out2, _ = run(universal, "check", "--json")
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["schema"] == 1
    assert report["passed"] is True
    assert len(report["algebras"]) == 9
    assert all(r["status"] == "pass" for r in report["reports"])


def test_hori_on_unit(corpus, capsys):
    assert main([str(corpus / "valid" / "run_block.dgca"), "hori", "--dir", "LR", "--element", "unit"]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_compose_check_seed_42(universal, capsys):
    assert main([str(universal), "compose-check", "--seed", "42"]) == 0
    out = capsys.readouterr().out
    assert "PASS T_RL∘T_LR = d/dxi2L" in out
    assert "PASS T_LR∘T_RL = d/dxi2R" in out


def test_compose_check_named_element(corpus, capsys):
    assert main([str(corpus / "valid" / "elements.dgca"), "compose-check", "--element", "v", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [i["status"] for i in report["identities"]] == ["pass"]
    assert main([str(corpus / "valid" / "elements.dgca"), "compose-check", "--element", "p",
                 "--dir", "RL"]) == 0
    assert "PASS T_LR∘T_RL = d/dxi2R (1 cases)" in capsys.readouterr().out


def test_q_hori_pair_file(universal, corpus, capsys):
    assert main([str(universal), "q-hori", "--pair", str(corpus / "pair.json"), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["transported"] == {"LR": "pass", "RL": "pass"}
    assert report["output"]["second"]["coeffs"]["1"] == "-196884"
    assert report["output"]["first"]["coeffs"]["0"] == "x2L"


def test_q_hori_truncation(universal, corpus, capsys):
    assert main([str(universal), "q-hori", "--pair", str(corpus / "pair.json"),
                 "--truncation", "1", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["output"]["second"]["N"] == 1
    assert "2" not in report["output"]["second"]["coeffs"]


def test_run_block(corpus, capsys):
    assert main([str(corpus / "valid" / "run_block.dgca"), "run", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [r["command"] for r in report["results"]] == ["check", "hori", "compose-check"]
    assert report["results"][1]["output"] == "1"


def test_tower_text(universal, capsys):
    assert main([str(universal), "tower"]) == 0
    out = capsys.readouterr().out
    assert "nu: " in out and "xi2L -> e1L*e1R + xi2R" in out


def test_parse_error_exit_code(corpus):
    code, out, err = run(corpus / "invalid" / "dangling_operator.dgca", "check")
    assert code == 2
    assert "1:57: error: unexpected token '}'" in err


def test_parse_error_json(corpus):
    code, out, _ = run(corpus / "invalid" / "reserved_name.dgca", "check", "--json")
    assert code == 2
    diag = json.loads(out)["diagnostics"][0]
    assert diag["span"][:2] == [1, 13]


def test_unknown_element_and_command(universal):
    code, _, err = run(universal, "hori", "--element", "nope")
    assert code == 2 and "unknown element" in err
    code, _, _ = run(universal, "frobnicate")
    assert code == 2


def test_missing_file():
    code, _, err = run("/nonexistent/file.dgca", "check")
    assert code == 2


def test_failing_check_exits_one(tmp_path):
    # d^2 != 0 in the target algebra
    src = ("algebra A { gen a1:1; gen p2:2; gen c3:3; gen y3:3; d a1 = p2; d p2 = c3; }\n"
           "config F on A { xL = 0; xR = 0; y = y3; }\n")
    path = tmp_path / "bad.dgca"
    path.write_text(src)
    code, out, _ = run(path, "check")
    assert code == 1
    assert "FAIL d_squared" in out


def test_verify_all_is_deterministic(universal):
    # small but complete run through the entry point
    code1, out1, _ = run(universal, "verify-all", "--seed", "5", "--truncation", "6", "--json")
    code2, out2, _ = run(universal, "verify-all", "--seed", "5", "--truncation", "6", "--json")
    assert code1 == 0 and out1 == out2
    checks = [r["check"] for r in json.loads(out1)["reports"]]
    assert len(checks) == 10
