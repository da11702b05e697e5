import csv
import io
import json

import pytest

from lamplighter.cli import main
from lamplighter.lie import parse_structure


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_all_q(capsys):
    code, out, _ = run(capsys, "homology", "--m", "4", "--all-q")
    assert code == 0
    rows = {r["q"]: r for r in json.loads(out)["records"]}
    assert rows[0]["dim"] == 1 and rows[1]["dim"] == 2
    assert set(rows[2]) == {"m", "q", "chain_dim", "rank_d", "dim"}


def test_homology_single_degree(capsys):
    code, out, _ = run(capsys, "homology", "--m", "2", "--q", "2")
    assert code == 0
    assert json.loads(out)["records"] == [{"m": 2, "q": 2, "chain_dim": 3, "rank_d": 1, "dim": 2}]


def test_homology_csv(capsys):
    code, out, _ = run(capsys, "homology", "--m", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [r["dim"] for r in rows] == ["1", "2", "2", "2", "1"]


def test_homology_rejects_m0(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["homology", "--m", "0"])
    assert exc.value.code == 2


def test_homology_q_too_large(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["homology", "--m", "2", "--q", "9"])
    assert exc.value.code == 2


def test_verify_lemma3(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "3", "--n-max", "41")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    dims = {d["n"]: d for d in rep["dimensions"]}
    assert dims[20] == {"n": 20, "dimV_even": 20, "dimV_odd": 21}


def test_verify_lemma5(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "5", "--q-max", "6", "--n-max", "40")
    assert code == 0 and json.loads(out)["passed"]


def test_verify_lemma4_small(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "4", "--q-max", "4", "--n-max", "15")
    rep = json.loads(out)
    assert code == 0 and rep["psi_sign"] == -1
    assert all(r["phi_square"] and r["psi_square"] for r in rep["records"])


def test_verify_theorem(capsys):
    code, out, _ = run(capsys, "verify", "--lemma", "theorem", "--q-max", "5")
    rep = json.loads(out)
    assert code == 0
    assert {(r["q"], r["r"]) for r in rep["records"]} == {
        (q, q * q + 1 + 2 * k) for q in range(2, 6) for k in range(3)
    }


def test_verify_failure_exit_code(capsys, monkeypatch):
    import lamplighter.strata as S
    monkeypatch.setattr(S, "PSI_SQUARE_SIGN", 1)
    code, out, err = run(capsys, "verify", "--lemma", "4", "--q-max", "3", "--n-max", "8")
    assert code == 1
    assert "FAILED 4" in err


def test_verify_is_byte_stable(capsys):
    _, a, _ = run(capsys, "verify", "--lemma", "3", "--n-max", "12")
    _, b, _ = run(capsys, "verify", "--lemma", "3", "--n-max", "12")
    assert a == b


def test_verify_bad_bounds():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--q-max", "1"])
    assert exc.value.code == 2


def test_strata_listing(capsys):
    code, out, _ = run(capsys, "strata", "--q", "3", "--n", "6", "--part", "E")
    rep = json.loads(out)
    assert code == 0 and [r["exponents"] for r in rep["records"]] == [[0, 1, 5], [0, 2, 4]]


def test_strata_table_csv(capsys):
    code, out, _ = run(capsys, "strata", "--q-max", "3", "--n-max", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 12
    assert {"q", "n", "dimV", "dimW", "dimE", "rank_dV", "rank_dW", "rank_rhodE", "injective"} <= set(rows[0])


def test_malcev(capsys):
    code, out, _ = run(capsys, "malcev", "--m", "6", "--i-max", "8", "--trials", "10")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["psi_b"] == "exp(-A)"
    assert len(rep["records"]) == 17


def test_malcev_degenerate(capsys):
    code, out, _ = run(capsys, "malcev", "--m", "1", "--trials", "5")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["phi_injective"] is False


def test_bch(tmp_path, capsys):
    x = tmp_path / "x.json"
    y = tmp_path / "y.json"
    x.write_text(json.dumps([["0", "2", "0"], ["0", "0", "0"], ["0", "0", "0"]]))
    y.write_text(json.dumps([["0", "0", "1"], ["0", "0", "3"], ["0", "0", "0"]]))
    code, out, _ = run(capsys, "bch", "--size", "3", "--x", str(x), "--y", str(y))
    rep = json.loads(out)
    assert code == 0 and rep["exp_roundtrip"]
    assert rep["Z"] == [["0", "2", "4"], ["0", "0", "3"], ["0", "0", "0"]]


def test_bch_text_output(tmp_path, capsys):
    x = tmp_path / "x.json"
    x.write_text(json.dumps([["0", "1/2"], ["0", "0"]]))
    code, out, _ = run(capsys, "bch", "--size", "2", "--x", str(x), "--y", str(x), "--format", "text")
    assert code == 0 and out.splitlines()[0] == "0 1"


def test_bch_size_mismatch(tmp_path):
    x = tmp_path / "x.json"
    x.write_text(json.dumps([["0", "1"], ["0", "0"]]))
    with pytest.raises(SystemExit) as exc:
        main(["bch", "--size", "3", "--x", str(x), "--y", str(x)])
    assert exc.value.code == 2


def test_dump_algebra(tmp_path, capsys):
    path = tmp_path / "alg.txt"
    assert main(["dump-algebra", "--m", "5", "--output", str(path)]) == 0
    L = parse_structure(path.read_text())
    assert L.dim == 6 and len(L.structure) == 4
