import json

import pytest

from conncalc.cli import main
from conncalc.connection import max_entry_difference
from conncalc.io import bundled, load_connection


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_check_bundled_tables(capsys):
    code, rep = run_json(capsys, "check", bundled("sqrt13", "alpha"))
    assert code == 0 and rep["pass"]
    assert float(rep["unitarity_residual"]) < 1e-40


def test_check_double_precision(capsys):
    code, rep = run_json(capsys, "check", "--precision", "16", bundled("sqrt17", "alpha"))
    assert code == 0
    assert float(rep["unitarity_residual"]) < 1e-9 and float(rep["renormalization_residual"]) < 1e-9


def test_check_not_biunitary_exits_1(tmp_path, capsys):
    d = json.loads(bundled("sqrt13", "alpha").read_text())
    base = bundled("sqrt13", "alpha").parent
    for k in ("upper", "lower", "left", "right"):
        d["square"][k] = str(base / d["square"][k])
    d["entries"][0]["value"] = "0.9"
    p = tmp_path / "bent.json"
    p.write_text(json.dumps(d))
    code, rep = run_json(capsys, "check", p)
    assert code == 1 and not rep["pass"]


def test_partial_fixture_exits_2(capsys):
    code, rep = run_json(capsys, "check", bundled("sqrt13", "x_printed"))
    assert code == 2 and rep["error"] == "InputError"


def test_missing_cell_exits_2(tmp_path, capsys):
    d = json.loads(bundled("sqrt13", "alpha").read_text())
    d["dense"] = True
    d["entries"] = d["entries"][:-1]
    base = bundled("sqrt13", "alpha").parent
    for k in ("upper", "lower", "left", "right"):
        d["square"][k] = str(base / d["square"][k])
    p = tmp_path / "a.json"
    p.write_text(json.dumps(d))
    code, rep = run_json(capsys, "check", p)
    assert code == 2 and "missing" in rep["message"]


@pytest.mark.parametrize("argv", [
    ["check", "/nonexistent/file.json"],
    ["frobnicate"],
    ["check"],
    ["verify", "sqrt5"],
    ["--precision", "20", "pf", str(bundled("sqrt13", "G0"))],
])
def test_input_errors_exit_2(capsys, argv):
    assert main(argv) == 2
    capsys.readouterr()


def test_dual_matches_printed_table(tmp_path, capsys, ctx13):
    out = tmp_path / "dual.json"
    code, _ = run_json(capsys, "dual", bundled("sqrt13", "alpha"), "-o", out)
    assert code == 0
    printed = load_connection(bundled("sqrt13", "alpha_dual"), ctx13)
    assert max_entry_difference(load_connection(out, ctx13), printed) < 1e-40


def test_compose_then_decompose(tmp_path, capsys):
    prod = tmp_path / "aa.json"
    code, _ = run_json(capsys, "compose", "--product", bundled("sqrt13", "alpha"),
                       bundled("sqrt13", "alpha_dual"), "-o", prod)
    assert code == 0
    code, rep = run_json(capsys, "decompose", prod, "-o", tmp_path / "parts")
    assert code == 0 and rep["classes"] == 2
    dims = sorted(float(s["dimension"]) for s in rep["summands"])
    assert dims[0] == pytest.approx(1.0) and dims[1] == pytest.approx(3.3027756377, rel=1e-9)
    assert all(s["multiplicity"] == 1 for s in rep["summands"])


def test_equiv_exit_codes(tmp_path, capsys):
    a = bundled("sqrt13", "alpha")
    code, rep = run_json(capsys, "equiv", a, a, "-o", tmp_path / "u.json")
    assert code == 0 and rep["equivalent"] and rep["nontrivial_blocks"] == 0
    code, rep = run_json(capsys, "equiv", a, bundled("sqrt13", "alpha_dual"))
    assert code == 1 and not rep["equivalent"]


def test_graph_commands(capsys):
    g = bundled("sqrt13", "G0")
    code, rep = run_json(capsys, "pf", g, "--basepoint", "*")
    assert code == 0 and float(rep["norm"]) == pytest.approx(((5 + 13 ** 0.5) / 2) ** 0.5, rel=1e-12)
    code, rep = run_json(capsys, "lemma1", g)
    assert code == 0 and rep["pass"]
    code, rep = run_json(capsys, "string-dim", g, "--length", "3", "--basepoint", "*")
    assert code == 0 and rep["total_dim"] == 5


def test_indecomposable(capsys):
    code, rep = run_json(capsys, "indecomposable", bundled("sqrt13", "alpha"))
    assert code == 0 and rep["indecomposable"]


def test_flags_before_and_after_subcommand(capsys):
    a = bundled("sqrt13", "alpha")
    _, before = run(capsys, "--format", "text", "--precision", "16", "check", a)
    _, after = run(capsys, "check", a, "--format", "text", "--precision", "16")
    assert before == after and "pass: True" in before


def test_text_format(capsys):
    code, out = run(capsys, "--format", "text", "check", bundled("sqrt13", "alpha"))
    assert code == 0 and "pass: True" in out


def test_fusion_graph_command(tmp_path, capsys):
    code, rep = run_json(capsys, "fusion-graph", bundled("sqrt13", "alpha"), "-o", tmp_path / "fg.json")
    assert code == 0 and len(rep["even"]) == 6 and len(rep["odd"]) == 4


def test_verify_seed_independent_verdicts(capsys):
    verdicts = []
    for seed in (7, 8):
        code, rep = run_json(capsys, "verify", "sqrt17", "--seed", str(seed))
        verdicts.append((code, [(s["title"], s["passed"]) for s in rep["sections"]]))
    assert verdicts[0] == verdicts[1] and verdicts[0][0] == 0
