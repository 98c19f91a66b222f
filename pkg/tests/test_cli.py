import json
import subprocess
import sys

import pytest

from algebroid_verify.catalog import catalog_names, catalog_text
from algebroid_verify.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_valid_entry_exits_zero(capsys):
    code, out, _ = run(capsys, "check", "poisson_graph")
    assert code == 0
    assert out.splitlines()[0].startswith("document: poisson_graph")
    assert out.splitlines()[-1].endswith("0 failed, 0 oracle discrepancies")


def test_failing_entry_exits_one_with_witness(capsys):
    code, out, _ = run(capsys, "check", "tangent_line_bad_dual")
    assert code == 1
    assert "FAIL  genbialgebroid" in out and "witness:" in out
    assert "SKIP  courant_axiom1" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "no_such_structure"],
        ["check", "trivial", "--only", "bogus"],
        ["check", "jacobi_plane", "--probes", "x1,t"],
        ["check", "jacobi_plane", "--probes", "x1 +"],
        ["show", "no_such_structure"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("error:")


def test_malformed_file_exits_two(tmp_path, capsys):
    p = tmp_path / "bad.yaml"
    p.write_text("base: {dim: 1}\nbundle: {rank: 1}\nphi: [\"x1 $\"]\n")
    code, _, err = run(capsys, "check", str(p))
    assert code == 2 and "line 3" in err


def test_file_target(tmp_path, capsys):
    p = tmp_path / "g.yaml"
    p.write_text(catalog_text("lie_algebra_phi_a1"))
    assert run(capsys, "check", str(p))[0] == 0


def test_only_selects_stages(capsys):
    code, out, _ = run(capsys, "check", "jacobi_plane", "--only", "courant", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert [e["check"] for e in data["entries"]] == [f"courant_axiom{k}" for k in range(1, 6)] + ["courant_D_routes"]
    assert {e["stage"] for e in data["entries"]} == {"courant"}


def test_json_is_deterministic_and_timing_free(capsys):
    outs = [run(capsys, "check", "jacobi_plane", "--format", "json", "--seed", "7")[1] for _ in range(2)]
    assert outs[0] == outs[1]
    data = json.loads(outs[0])
    assert data["seed"] == 7 and data["oracle_discrepancies"] == 0
    assert all("timing" not in e for e in data["entries"])
    assert all(set(e) >= {"check", "stage", "anchor", "status", "witness", "oracle"} for e in data["entries"])


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "check", "trivial", "--format", "json", "--timing")
    assert all("timing" in e for e in json.loads(out)["entries"])


def test_probes_override(capsys):
    _, out, _ = run(capsys, "check", "poisson_graph", "--only", "dirac,admissibility", "--probes", "x2^2", "--format", "json")
    prop2 = next(e for e in json.loads(out)["entries"] if e["check"] == "prop2")
    assert [n.split(":")[0] for n in prop2["notes"]] == ["1", "x2^2"]


def test_printed_reading_reported(capsys):
    code, out, _ = run(capsys, "check", "jacobi_plane", "--hatdual", "printed", "--only", "courant,embedding")
    assert code == 1 and "FAIL  prop1" in out and "readings disagree" in out


def test_expectation_mismatch_flagged(tmp_path, capsys):
    text = catalog_text("trivial").replace("genbialgebroid: pass", "genbialgebroid: fail")
    assert "genbialgebroid: fail" in text
    p = tmp_path / "t.yaml"
    p.write_text(text)
    code, out, _ = run(capsys, "check", str(p))
    assert code == 0
    assert "(document expects fail)" in out and "1 differ from the document's expectations" in out


def test_catalog_and_show(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0 and out.split() == catalog_names()
    code, out, _ = run(capsys, "show", "contact_r3")
    assert code == 0 and out == catalog_text("contact_r3")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "algebroid_verify", "check", "trivial_bad_cocycles"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "FAIL  genbialgebroid" in proc.stdout
