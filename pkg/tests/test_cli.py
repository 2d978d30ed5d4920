import json
import math

import pytest

from turanlab.cli import run
from turanlab.serialize import CSV_COLUMNS, dumps, loads


def _run(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_equality(capsys):
    code, out, _ = _run(capsys, "verify", "--ineq", "INEQ-5", "--n", "3", "--family", "one-plus-x-pow-n")
    assert code == 0
    assert loads(out)["ratio"] == pytest.approx(1.0, abs=1e-9)


def test_constants_a(capsys):
    code, out, _ = _run(capsys, "constants", "--name", "A")
    assert code == 0
    assert loads(out)["value"] == pytest.approx(2 / (3 * math.sqrt(210 * math.e)), rel=1e-15)


def test_asymptote_slope(capsys):
    code, out, _ = _run(capsys, "asymptote", "--family", "qn", "--deriv", "0", "--p", "2", "--n-range", "10:100")
    doc = loads(out)
    assert code == 0 and abs(doc["slope"] + 0.5) <= 0.05
    assert {"n", "value", "fit"} <= set(doc["rows"][0])


def test_usage_errors(capsys):
    assert _run(capsys, "verify", "--ineq", "INEQ-6", "--n", "3", "--p", "inf", "--family", "monomial")[0] == 2
    assert _run(capsys, "verify", "--ineq", "INEQ-5", "--n", "3")[0] == 2
    assert _run(capsys, "verify", "--bogus")[0] == 2
    code, _, err = _run(capsys, "verify", "--ineq", "INEQ-2", "--roots", "0.5j")
    assert code == 2 and "ClassMismatch" in err
    assert _run(capsys, "sweep", "--ineq", "INEQ-77", "--n-range", "1:2")[0] == 2


def test_inf_literal_round_trip(capsys):
    code, out, _ = _run(capsys, "verify", "--ineq", "INEQ-7", "--q", "inf", "--roots", "0.2,0.5+0.5j")
    assert code == 0
    assert '"q": "inf"' in out
    assert dumps(loads(out)) == out


def test_json_round_trip_and_determinism(tmp_path, monkeypatch):
    monkeypatch.setenv("TURANLAB_SEED", "17")
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        argv = ["sweep", "--ineq", "INEQ-1,INEQ-7", "--family", "random-halfdisk", "--n-range", "1:3",
                "--q-grid", "2,inf", "--trials", "2", "--jobs", "1", "--output", str(p)]
        assert run(argv) == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    doc = json.loads(a)
    assert doc["seed"] == 17 and doc["violations"] == 0
    assert dumps(loads(a.decode())).encode() == a


def test_csv_columns(capsys):
    code, out, _ = _run(capsys, "sweep", "--ineq", "INEQ-2", "--n-range", "1:2", "--format", "csv", "--seed", "3")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == ",".join(CSV_COLUMNS) and len(lines) == 3
    assert lines[1].split(",")[8] == "3"


def test_extremal_and_measure(capsys):
    code, out, _ = _run(capsys, "extremal", "--ineq", "INEQ-2", "--n", "1", "--starts", "2")
    assert code == 0 and loads(out)["best_ratio"] == pytest.approx(3, rel=1e-6)
    code, out, _ = _run(capsys, "measure", "--variant", "segment", "--family", "monomial", "--n", "4", "--alpha", "1")
    assert code == 0 and loads(out)["estimates"][0]["measure"] == pytest.approx(3 - math.sqrt(5), abs=1e-9)
    code, out, _ = _run(capsys, "measure", "--variant", "layercake", "--roots=-1,1", "--q", "2")
    assert code == 0 and loads(out)["pass"]
    code, out, _ = _run(capsys, "measure", "--variant", "lemma9", "--family", "qn", "--n", "5", "--q", "2")
    assert code == 0


def test_failed_check_exit_code(capsys, monkeypatch):
    import turanlab.cli as cli

    real = cli.check

    def broken(*a, **k):
        r = real(*a, **k)
        return type(r)(**{**r.__dict__, "passed": False})

    monkeypatch.setattr(cli, "check", broken)
    assert _run(capsys, "verify", "--ineq", "INEQ-5", "--n", "2", "--family", "monomial")[0] == 1


def test_numeric_failure_exit_code(capsys, monkeypatch):
    import turanlab.cli as cli
    from turanlab.errors import QuadratureNoConvergence

    def boom(*a, **k):
        raise QuadratureNoConvergence("depth cap")

    monkeypatch.setattr(cli, "check", boom)
    assert _run(capsys, "verify", "--ineq", "INEQ-5", "--n", "2", "--family", "monomial")[0] == 3


def test_serializer_floats():
    s = dumps({"b": [0.1, math.inf, -math.inf, math.nan], "a": 1})
    assert s.index('"a"') < s.index('"b"')
    assert '0.10000000000000001' in s and '"inf"' in s and '"-inf"' in s and '"nan"' in s
