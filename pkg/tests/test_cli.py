import json
from pathlib import Path

import pytest

from obcalc import cli
from obcalc.zmodule import AbelianGroup

ROOT = Path(__file__).parent.parent
GOLDEN = sorted((Path(__file__).parent / "golden").glob("*.txt"))


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="doc.ob"):
    p = tmp_path / name
    p.write_text(text)
    return p


@pytest.mark.parametrize("golden", GOLDEN, ids=lambda p: p.name)
def test_golden_reports(capsys, golden):
    sample, command, _ = golden.name.split(".")
    code, out, _ = run(capsys, command, ROOT / "samples" / f"{sample}.ob")
    assert code == 0
    assert out == golden.read_text()


def test_invariants_of_lens_book(capsys, tmp_path):
    p = write(tmp_path, 'openbook L { page genus=0 boundary=2; monodromy = "T(core)^2"; }')
    code, out, _ = run(capsys, "invariants", p)
    assert code == 0
    assert "  H1: Z/2" in out.splitlines()
    assert "  chi: 0" in out.splitlines()


def test_sum_of_two_spheres_prints_annulus_book(capsys):
    code, out, _ = run(capsys, "sum", ROOT / "samples" / "s3_pair.ob")
    assert code == 0
    assert "    chi: 2 -> 0" in out
    assert "page genus=0 boundary=2 labels=A.1,B.1;" in out


def test_printed_sum_result_parses_back(capsys, tmp_path):
    code, out, _ = run(capsys, "sum", ROOT / "samples" / "torus_pair.ob")
    book = out[out.index("openbook"):]
    p = write(tmp_path, book, "result.ob")
    code, out2, _ = run(capsys, "invariants", p)
    assert code == 0
    assert "  H1: Z^2 + Z/2 + Z/4" in out2.splitlines()


def test_oracle_compare_two_discs(capsys, tmp_path):
    p = write(tmp_path, 'openbook A { page genus=0 boundary=1; monodromy=""; }\n'
                        'openbook B { page genus=0 boundary=1; monodromy=""; }\n')
    code, out, _ = run(capsys, "oracle-compare", p)
    assert code == 0
    assert "  binding sum H1: Z" in out and "  fibration H1: Z" in out and "MATCH" in out


def test_oracle_mismatch_sets_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "fibration_oracle_h1", lambda *a: AbelianGroup(7))
    code, out, _ = run(capsys, "oracle-compare", ROOT / "samples" / "s3_pair.ob")
    assert code == 1
    assert "MISMATCH" in out


def test_partial_sum_is_not_compared(capsys, tmp_path):
    p = write(tmp_path, 'openbook A { page genus=0 boundary=2; monodromy=""; }\n'
                        'openbook B { page genus=0 boundary=2; monodromy=""; }\n'
                        'sum A.1 B.1;\n')
    code, out, _ = run(capsys, "oracle-compare", p)
    assert code == 0
    assert "not applicable" in out


def test_symbolic_invariants_are_descriptor_only(capsys):
    code, out, _ = run(capsys, "invariants", ROOT / "samples" / "symbolic.ob")
    assert code == 0
    assert "H1 unavailable for symbolic books" in out
    assert "manifold: S³×S¹" in out


def test_json_output(capsys):
    code, out, _ = run(capsys, "invariants", "--json", ROOT / "samples" / "lens.ob")
    data = json.loads(out)
    assert data["status"] == 0
    assert [b["homology"]["H1"] for b in data["books"]] == ["Z/2", "Z/5", "0"]


def test_contact_verify_flags(capsys, tmp_path):
    p = write(tmp_path, "verify contact;\n")
    code, out, _ = run(capsys, "contact-verify", p, "--grid", 4000, "--tol", 1e-7, "--json")
    data = json.loads(out)
    assert code == 0
    (rep,) = data["reports"]
    assert rep["grid"]["points"] == 4000 and rep["pass"] is True


def test_contact_verify_failure_exit_code(capsys, tmp_path):
    p = write(tmp_path, "verify contact tol=1;\n")
    code, out, _ = run(capsys, "contact-verify", p)
    assert code == 1
    assert "FAIL" in out


def test_contact_verify_coarse_grid_is_input_error(capsys, tmp_path):
    p = write(tmp_path, "verify contact;\n")
    code, _, err = run(capsys, "contact-verify", p, "--grid", 10)
    assert code == 2
    assert "at least" in err


def test_unknown_verify_parameter(capsys, tmp_path):
    p = write(tmp_path, "verify framing speed=3;\n")
    code, _, err = run(capsys, "contact-verify", p)
    assert code == 2 and "speed" in err


@pytest.mark.parametrize("text, fragment", [
    ('openbook X {\n page genus=1 boundary=1;\n monodromy = "T(a1)^";\n}\n', "line 3"),
    ('openbook X { page genus=0 boundary=1; monodromy=""; }\nsum X.1 Y.1;\n', "unresolved book 'Y'"),
    ('openbook X { page genus=0 boundary=1; monodromy="T(a2)"; }\n', "a2"),
    ('openbook X { page genus=0 boundary=1; monodromy=""; }\n'
     'symbolic S { dim=4; page chi=1 "D3"; binding chi_page=1 "S2" page "D1"; }\nsum X.1 S.B;\n',
     "symbolic"),
])
def test_input_errors_exit_two(capsys, tmp_path, text, fragment):
    code, _, err = run(capsys, "invariants", write(tmp_path, text))
    assert code == 2
    assert fragment in err


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "invariants", tmp_path / "absent.ob")
    assert code == 2


def test_unknown_label_in_sum(capsys, tmp_path):
    p = write(tmp_path, 'openbook A { page genus=0 boundary=1; monodromy=""; }\n'
                        'openbook B { page genus=0 boundary=1; monodromy=""; }\nsum A.1 B.7;\n')
    code, _, err = run(capsys, "sum", p)
    assert code == 2


def test_chained_sums_use_original_names(capsys, tmp_path):
    p = write(tmp_path, 'openbook A { page genus=0 boundary=2; monodromy=""; }\n'
                        'openbook B { page genus=0 boundary=2; monodromy=""; }\n'
                        'sum A.1 B.1;\nsum A.2 B.2 as C;\n')
    code, out, _ = run(capsys, "oracle-compare", p)
    assert code == 0
    assert "  binding sum H1: Z^3" in out and "MATCH" in out


def test_stdin_input(capsys, monkeypatch):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO('openbook D { page genus=0 boundary=1; monodromy=""; }'))
    code, out, _ = run(capsys, "invariants", "-")
    assert code == 0 and "  H1: 0" in out
