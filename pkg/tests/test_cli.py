import json
import subprocess
import sys

import numpy as np
import pytest

from quatdet.cli import EXIT_CHECK, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_SINGULAR, main, run_demo
from quatdet.qmatrix import QMatrix, from_json_obj, loads, random_qmatrix, save
from quatdet.qdet import naive_det_witnesses

from conftest import I_, J_, K_, rank_deficient


@pytest.fixture
def write(tmp_path):
    def _write(name, m):
        path = tmp_path / name
        if isinstance(m, QMatrix):
            save(m, path)
        else:
            path.write_text(m)
        return str(path)

    return _write


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sdet_identity_prints_one(capsys, write):
    code, out, _ = call(capsys, "sdet", write("identity.json", QMatrix.identity(3)))
    assert code == EXIT_OK
    assert out == "1.0\n"


def test_scalar_file(capsys, write):
    path = write("s.json", '{"rows": 1, "cols": 1, "entries": [[[2, 0, 0, 0]]]}')
    assert call(capsys, "sdet", path)[1] == "2.0\n"
    assert call(capsys, "qdet", path)[1] == "4.0\n"


@pytest.mark.parametrize("method", ["gauss", "eigen", "svd", "complexify", "schur"])
def test_sdet_methods(capsys, write, method):
    path = write("m.json", QMatrix.from_entries([[1, I_], [J_, K_]]))
    code, out, _ = call(capsys, "sdet", path, "--method", method)
    assert code == EXIT_OK
    assert float(out) == pytest.approx(2.0, rel=1e-12)


def test_unknown_method(capsys, write):
    code, _, err = call(capsys, "sdet", write("m.json", QMatrix.identity(2)), "--method", "laplace")
    assert code == EXIT_PRECONDITION and "laplace" in err


def test_report_random(capsys, write, rng):
    code, out, _ = call(capsys, "report", write("m.json", random_qmatrix(rng, 5)), "--format", "json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["max_rel_spread"] <= 1e-6 and rep["agree"] is True
    assert len([k for k in rep if k.startswith("sdet_")]) == 5


def test_report_tight_tol_fails(capsys, write, rng):
    code, _, _ = call(capsys, "report", write("m.json", random_qmatrix(rng, 5)), "--tol", "-1")
    assert code == EXIT_CHECK


def test_hdet(capsys, write, rng):
    path = write("h.json", QMatrix.from_entries([[1, I_], [-I_, 2]]))
    code, out, _ = call(capsys, "hdet", path)
    assert code == EXIT_OK and float(out) == pytest.approx(1.0)
    code, _, err = call(capsys, "hdet", write("g.json", random_qmatrix(rng, 3)))
    assert code == EXIT_PRECONDITION and "hermitian" in err


def test_inv_methods(capsys, write):
    m = QMatrix.from_entries([[0, I_], [J_, K_]])
    path = write("m.json", m)
    expected = QMatrix.from_entries([[1, -J_], [-I_, 0]])
    for args in (["--method", "schur"], ["--method", "gauss"], ["--method", "closed2x2"]):
        code, out, _ = call(capsys, "inv", path, "--format", "json", *args)
        assert code == EXIT_OK
        assert from_json_obj(json.loads(out)).allclose(expected, 1e-14)
    # the leading 1x1 block is zero, so the unpivoted split cannot proceed
    code, _, err = call(capsys, "inv", path, "--split", "1")
    assert code == EXIT_SINGULAR and "leading" in err
    n = QMatrix.from_entries([[1, I_], [J_, K_]])
    code, out, _ = call(capsys, "inv", write("n.json", n), "--split", "1", "--format", "json")
    assert code == EXIT_OK
    assert from_json_obj(json.loads(out)).allclose(n.H * 0.5, 1e-15)


def test_inv_singular(capsys, write, rng):
    code, _, err = call(capsys, "inv", write("s.json", rank_deficient(rng, 3)))
    assert code == EXIT_SINGULAR and "singular" in err


def test_inv_preconditions(capsys, write, rng):
    assert call(capsys, "inv", write("r.json", random_qmatrix(rng, 2, 3)))[0] == EXIT_PRECONDITION
    assert call(capsys, "inv", write("t.json", random_qmatrix(rng, 3)), "--method", "closed2x2")[0] == EXIT_PRECONDITION
    assert call(capsys, "inv", write("u.json", random_qmatrix(rng, 3)), "--split", "5")[0] == EXIT_PRECONDITION
    assert call(capsys, "sdet", write("v.json", random_qmatrix(rng, 2, 3)))[0] == EXIT_PRECONDITION


def test_eig_svd_schur(capsys, write, rng):
    path = write("m.json", QMatrix.diag([I_, J_ * 2.0]))
    code, out, _ = call(capsys, "eig", path, "--format", "json")
    assert code == EXIT_OK
    eigs = json.loads(out)["eigenvalues"]
    assert np.allclose(sorted(e[1] for e in eigs), [1.0, 2.0])
    code, out, _ = call(capsys, "svd", path, "--format", "json")
    assert code == EXIT_OK and np.allclose(json.loads(out)["sigma"], [2.0, 1.0])
    code, out, _ = call(capsys, "schur", write("r.json", random_qmatrix(rng, 3)))
    assert code == EXIT_OK and out.startswith("U:")


def test_parse_errors(capsys, write, tmp_path):
    code, _, err = call(capsys, "sdet", write("bad.json", '{"rows": 1,\n  "cols": 1,\n  "entries": [[[1, 0, 0]]}'))
    assert code == EXIT_PARSE and ":3:" in err
    code, _, err = call(capsys, "sdet", write("empty.json", '{"rows": 1, "cols": 1, "entries": []}'))
    assert code == EXIT_PARSE and "$.entries" in err
    code, _, err = call(capsys, "sdet", write("short.json", '{"rows": 1, "cols": 1, "entries": [[[1, 0, 0]]]}'))
    assert code == EXIT_PARSE and "$.entries[0][0]" in err
    code, _, err = call(capsys, "sdet", str(tmp_path / "missing.json"))
    assert code == EXIT_PARSE and "cannot read" in err


def test_json_round_trip(capsys, write, rng):
    m = random_qmatrix(rng, 3)
    code, out, _ = call(capsys, "inv", write("m.json", m), "--format", "json")
    inv = from_json_obj(json.loads(out))
    again = loads(json.dumps(json.loads(out)))
    assert again == inv


def test_text_precision(capsys, write):
    path = write("m.json", QMatrix.from_entries([[0.5]]))
    assert call(capsys, "inv", path)[1] == "2.0+0.0i+0.0j+0.0k\n"
    path = write("t.json", QMatrix.from_entries([[3.0]]))
    assert call(capsys, "inv", path)[1] == "0.33333333333333331+0.0i+0.0j+0.0k\n"


def test_deterministic(capsys, write, rng):
    path = write("m.json", random_qmatrix(rng, 6))
    for cmd in ("report", "eig", "svd", "schur", "inv"):
        first = call(capsys, cmd, path)
        assert call(capsys, cmd, path) == first


def test_demo(capsys):
    code, out, _ = call(capsys, "demo")
    assert code == EXIT_OK
    assert (
        "SM = NS: OK; Re det M ≠ Re det N: OK; A: exactly 2 of 4 expressions vanish: OK; B: 4 of 4 vanish: OK"
        in out
    )
    assert "FAIL" not in out
    result, ok = run_demo()
    assert ok and result["all_ok"]


def test_verify(capsys, tmp_path, rng):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for t in range(4):
        save(random_qmatrix(rng, t + 2), corpus / f"m{t}.json")
    save(naive_det_witnesses()[0], corpus / "a.json")
    save(rank_deficient(rng, 4), corpus / "singular.json")
    code, out, _ = call(capsys, "verify", str(corpus), "--format", "json")
    assert code == EXIT_OK
    res = json.loads(out)
    assert res["count"] == 6
    assert list(res["files"]) == sorted(res["files"])
    assert res["files"]["singular.json"]["singular"] is True
    save(random_qmatrix(rng, 2, 3), corpus / "rect.json")
    assert call(capsys, "verify", str(corpus))[0] == EXIT_CHECK
    (corpus / "zz.json").write_text("{")
    assert call(capsys, "verify", str(corpus))[0] == EXIT_PARSE
    assert call(capsys, "verify", str(corpus), "--tol", "-1")[0] == EXIT_PARSE


def test_verify_not_directory(capsys, tmp_path):
    assert call(capsys, "verify", str(tmp_path / "nope"))[0] == EXIT_PARSE


def test_missing_input_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["sdet"])
    assert info.value.code == 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "i.json"
    save(QMatrix.identity(2), path)
    proc = subprocess.run(
        [sys.executable, "-m", "quatdet", "sdet", str(path)], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and proc.stdout == "1.0\n"
