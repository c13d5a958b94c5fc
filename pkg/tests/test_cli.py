import json

import numpy as np
import pytest

from lorentzsvd.cli import main
from lorentzsvd.io import StateFile
from lorentzsvd.states import GHZ, W, bell_diagonal, generalized_ghz, werner


def _write(tmp_path, name, kind, payload):
    p = tmp_path / name
    StateFile(kind, payload).save(p)
    return str(p)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None), out


def test_lsvd_werner(tmp_path, capsys):
    f = _write(tmp_path, "w.json", "density2q", werner(0.5))
    code, rep, _ = _run(["lsvd", f, "--oracle"], capsys)
    assert code == 0
    assert np.allclose(rep["results"]["s"], [1, 0.5, 0.5, -0.5])
    assert rep["results"]["normal_form"] == "Diagonal"
    assert rep["results"]["oracle"]["agreement"] <= 1e-6


def test_monotones_and_json_out(tmp_path, capsys):
    f = _write(tmp_path, "b.json", "density2q", bell_diagonal([1, 0, 0, 0]))
    out = tmp_path / "r.json"
    code, rep, text = _run(["monotones", f, "--json-out", str(out)], capsys)
    assert code == 0 and out.read_text() == text
    assert np.isclose(rep["results"]["concurrence"], 1.0)


def test_convert_verdicts(tmp_path, capsys):
    bell = _write(tmp_path, "bell.json", "density2q", bell_diagonal([1, 0, 0, 0]))
    w6 = _write(tmp_path, "w6.json", "density2q", werner(0.6))
    w9 = _write(tmp_path, "w9.json", "density2q", werner(0.9))
    code, rep, _ = _run(["convert", bell, w6], capsys)
    assert code == 0 and rep["results"]["verdict"] == "feasible"
    code, rep, _ = _run(["convert", w6, w9], capsys)
    assert code == 0 and rep["results"]["verdict"] == "infeasible"


def test_classify_and_distill(tmp_path, capsys):
    g = _write(tmp_path, "g.json", "pure3q", GHZ)
    w = _write(tmp_path, "w.json", "pure3q", W)
    code, rep, _ = _run(["classify3", g], capsys)
    assert code == 0 and rep["results"]["class"] == "GHZclass"
    code, rep, _ = _run(["distill-ghz", g], capsys)
    assert code == 0 and np.isclose(rep["results"]["p_opt"], 1.0)
    assert main(["distill-ghz", w, "--quiet"]) == 3
    code, rep, _ = _run(["distill-w", w, "--n-starts", "3"], capsys)
    assert code == 0 and np.isclose(rep["results"]["success_probability"], 1.0)


def test_distill_ghz_oracle(tmp_path, capsys):
    f = _write(tmp_path, "g.json", "pure3q", generalized_ghz(0.25))
    code, rep, _ = _run(["distill-ghz", f, "--oracle"], capsys)
    assert code == 0 and rep["results"]["oracle"]["agreement"] <= 1e-6


def test_invalid_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{oops")
    assert main(["lsvd", str(bad)]) == 2
    assert main(["lsvd", str(tmp_path / "missing.json")]) == 2
    g = _write(tmp_path, "g.json", "pure3q", GHZ)
    assert main(["lsvd", g]) == 2
    assert main(["random", "werner", "--param", "2"]) == 2
    capsys.readouterr()


def test_outputs_are_deterministic(tmp_path, capsys):
    f = _write(tmp_path, "w.json", "density2q", werner(0.3))
    for argv in (["lsvd", f], ["monotones", f], ["random", "pure3q", "--seed", "7"]):
        _, _, a = _run(argv, capsys)
        _, _, b = _run(argv, capsys)
        assert a == b


def test_random_bell_diagonal(capsys):
    code, rep, _ = _run(["random", "bell-diagonal", "--weights", "0.7,0.1,0.1,0.1"], capsys)
    assert code == 0
    sf = StateFile.from_dict(rep)
    assert np.allclose(np.sort(np.linalg.eigvalsh(sf.payload))[::-1], [0.7, 0.1, 0.1, 0.1])


def test_random_file_loads(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert main(["random", "w-class", "--seed", "3", "--json-out", str(out)]) == 0
    capsys.readouterr()
    assert StateFile.load(out).kind == "pure3q"


def test_selftest_pass_and_fail(tmp_path, capsys):
    code, rep, _ = _run(["selftest", "lsvd", "--n", "5", "--seed", "1"], capsys)
    assert code == 0 and rep["results"]["passed"]
    cx = tmp_path / "cx.json"
    code, rep, _ = _run(["selftest", "lsvd", "--n", "3", "--tol", "1e-40",
                         "--counterexample-out", str(cx)], capsys)
    assert code == 1 and not rep["results"]["passed"]
    assert StateFile.load(cx).kind == "density2q"


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["nope"])
