import json
import subprocess
import sys

import pytest

from heartforge.cli import main


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def json_payload(out):
    start = out.index("{")
    return json.loads(out[start:])


def test_tau_paper_value(capsys):
    code, out = run_cli(["--fixture", "lambda", "tau", "0->S1"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["result"] == "S1->0"


def test_tau_backward(capsys):
    code, out = run_cli(["--fixture", "lambda", "tau", "S1[1]", "--back"], capsys)
    assert code == 0
    assert json_payload(out)["result"] == "0->S1"


def test_tau_paper_style_literal(capsys):
    code, out = run_cli(["--fixture", "lambda", "tau", "I1->P1"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["result"] not in ("0",)


def test_indec_counts(capsys):
    code, out = run_cli(["--fixture", "lambda", "indec"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["count"] == 14 and data["complete"] is True


def test_indec_deterministic(capsys):
    _, out1 = run_cli(["--fixture", "a3", "indec"], capsys)
    _, out2 = run_cli(["--fixture", "a3", "indec"], capsys)
    assert out1 == out2


def test_ar_quiver_dot(tmp_path, capsys):
    dot = tmp_path / "q.dot"
    code, out = run_cli(["--fixture", "a3", "ar-quiver", "--dot", str(dot)], capsys)
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph") and "->" in text
    data = json_payload(out)
    assert len(data["vertices"]) == 12


def test_fac_membership(capsys):
    code, out = run_cli(
        ["--fixture", "lambda", "fac", "I1->P1", "--check", "S1[1]"], capsys
    )
    assert code == 0
    assert json_payload(out)["verdict"] == "yes"
    code, out = run_cli(
        ["--fixture", "lambda", "fac", "I1->P1", "--check", "0->S2"], capsys
    )
    assert json_payload(out)["verdict"] == "no"


def test_torsion_trivial_silting(capsys):
    code, out = run_cli(["--fixture", "lambda", "torsion", "--silting", "A"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["presilting"] and data["silting"]
    assert len(data["T"]) == 14 and len(data["F"]) == 0
    assert data["flags"]["is_s_torsion"] is True


def test_torsion_json_literal(capsys):
    lit = json.dumps({
        "terms": {"-2": [2], "-1": [2], "0": [1]},
        "entries": {
            "-2": [[[[1, ["b", "a"]]]]],
            "-1": [[[[1, ["a"]]]]],
        },
    })
    code, out = run_cli(["--fixture", "lambda", "torsion", "--silting", lit], capsys)
    assert code == 0
    data = json_payload(out)
    # a single 3-term summand is presilting but not silting (1 < |A|)
    assert data["presilting"] is True and data["silting"] is False


def test_silting_enumerate(capsys):
    code, out = run_cli(["--fixture", "lambda", "silting", "enumerate"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["census_report"]["census_size"] == 17
    assert len(data["census"]) == 17


def test_spec_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "field": 2, "m": 2, "vertices": [1, 2],
        "arrows": [{"name": "a", "from": 1, "to": 2}],
        "relations": [[{"coeff": 1, "path": ["a", "a"]}]],
    }))
    code = main(["--spec", str(bad), "indec"])
    assert code == 1


def test_membership_error_exit(capsys):
    code = main(["--fixture", "lambda", "tau", "S1[2]"])  # H^{-2} nonzero
    assert code == 1


def test_usage_error(capsys):
    assert main(["--fixture", "lambda"]) == 1


def test_verify_single_criterion(capsys):
    code, out = run_cli(["verify", "--suite", "paper", "--only", "1"], capsys)
    assert code == 0
    assert "[PASS] 1." in out


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "heartforge.cli", "--fixture", "a3", "tau", "P3[1]"],
        capture_output=True, text=True, timeout=300,
    )
    assert proc.returncode == 0
    data = json.loads(proc.stdout[proc.stdout.index("{"):])
    # tau(P3[1]) over 2-mod(kA3): mesh predecessor of P3[1] is P1
    assert data["result"] == "0->P1"


def test_hrs_on_m1_spec(tmp_path, capsys):
    doc = {
        "field": 2, "m": 1, "vertices": [1, 2],
        "arrows": [{"name": "a", "from": 1, "to": 2}, {"name": "b", "from": 2, "to": 1}],
        "relations": [[{"coeff": 1, "path": ["a", "b"]}]],
    }
    spec = tmp_path / "lam1.json"
    spec.write_text(json.dumps(doc))
    code, out = run_cli(["--spec", str(spec), "silting", "enumerate"], capsys)
    assert code == 0
    n_census = json_payload(out)["census_report"]["census_size"]
    assert n_census >= 2
    code, out = run_cli(["--spec", str(spec), "hrs", "--pair", "0"], capsys)
    assert code == 0
    data = json_payload(out)
    assert data["tilted_flags"]["is_s_torsion"] is True
