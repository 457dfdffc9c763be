from __future__ import annotations

import csv
import io
import json

import jsonschema
import pytest
from referencing import Registry, Resource

from toriczeta import cli


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _validator(name):
    names = ["output", "runconfig", "todd", "dedekind", "zeta", "verify", "bench"]
    registry = Registry().with_resources(
        (cli.load_schema(n)["$id"], Resource.from_contents(cli.load_schema(n))) for n in names
    )
    schema = cli.load_schema(name)
    return jsonschema.Draft202012Validator(schema, registry=registry)


def test_todd_table(capsys):
    code, out, _ = _run(capsys, "todd", "-p", "1", "-q", "2", "-d", "3")
    assert code == 0
    assert out.strip().startswith("1 + ")


@pytest.mark.parametrize("method", ["cf", "ppd", "cyclotomic", "all"])
def test_todd_methods(capsys, method):
    code, out, _ = _run(capsys, "todd", "-p", "2", "-q", "5", "-d", "4", "--method", method)
    assert code == 0
    assert out.strip()


def test_todd_nonsingular_needs_q1(capsys):
    assert _run(capsys, "todd", "-p", "0", "-q", "1", "-d", "4", "--method", "nonsingular")[0] == 0
    code, _, err = _run(capsys, "todd", "-p", "1", "-q", "2", "-d", "4", "--method", "nonsingular")
    assert code == 2
    assert "error" in err


def test_dedekind_examples(capsys):
    code, out, _ = _run(capsys, "dedekind", "-i", "1", "-j", "1", "-p", "-1", "-q", "3")
    assert code == 0
    assert out.strip() == "1/18"
    code, out, _ = _run(capsys, "dedekind", "-i", "2", "-j", "2", "-p", "3", "-q", "7", "--method", "both")
    assert code == 0
    assert "True" in out


def test_zeta_example(capsys):
    code, out, _ = _run(capsys, "zeta", "-b", "2,3", "-n", "0")
    assert code == 0
    assert out.strip() == "-1/12"


def test_zeta_all_routes(capsys):
    code, out, _ = _run(capsys, "zeta", "-b", "3", "--nmax", "2", "--routes", "field,general,zero,numeric", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    recs = doc["result"]
    assert [r["zeta"] for r in recs][:2] == ["0", "1/30"]
    assert recs[0]["numeric_checked"] and recs[1]["numeric_checked"]
    assert not recs[2]["numeric_checked"]


@pytest.mark.parametrize(
    "argv",
    [
        ["todd", "-p", "2", "-q", "4", "-d", "3"],
        ["todd", "-p", "1", "-q", "0", "-d", "3"],
        ["todd", "-p", "1", "-q", "2", "-d", "-1"],
        ["zeta", "-b", "2,2"],
        ["zeta", "-b", "1,3"],
        ["zeta", "-b", "x"],
        ["zeta", "-b", "3", "--routes", "magic"],
        ["dedekind", "-i", "1", "-j", "1", "-p", "2", "-q", "4"],
        ["dedekind", "-i", "0", "-j", "1", "-p", "1", "-q", "3", "--method", "todd"],
        ["bench", "--q", "0"],
        ["nosuch"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    assert _run(capsys, *argv)[0] == 2


def test_csv_format(capsys):
    code, out, _ = _run(capsys, "todd", "-p", "1", "-q", "3", "-d", "2", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["i", "j", "value"]
    assert rows[1] == ["0", "0", "1"]


@pytest.mark.parametrize(
    "name,argv",
    [
        ("todd", ["todd", "-p", "2", "-q", "5", "-d", "4"]),
        ("dedekind", ["dedekind", "-i", "2", "-j", "1", "-p", "2", "-q", "5", "--method", "both"]),
        ("zeta", ["zeta", "-b", "2,3", "-n", "1", "--routes", "field,general"]),
        ("zeta", ["zeta", "-b", "2,3", "--nmax", "1"]),
        ("verify", ["verify", "--suite", "classical", "--qmax", "12"]),
        ("bench", ["bench", "--q", "101,1009", "--repeat", "1"]),
    ],
)
def test_json_matches_schema(capsys, name, argv):
    code, out, _ = _run(capsys, *argv, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    _validator("output").validate(doc)
    _validator(name).validate(doc["result"])


def test_config_replay_is_identical(capsys, tmp_path):
    code, first, _ = _run(capsys, "zeta", "-b", "2,3", "--nmax", "2", "--format", "json")
    assert code == 0
    cfg = json.loads(first)["config"]
    path = tmp_path / "run.json"
    path.write_text(json.dumps(cfg))
    code, second, _ = _run(capsys, "--config", str(path))
    assert code == 0
    assert first == second


def test_bad_config(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"subcommand": "launch"}')
    assert _run(capsys, "--config", str(path))[0] == 2
    path.write_text("not json")
    assert _run(capsys, "--config", str(path))[0] == 2
    assert _run(capsys, "--config", str(tmp_path / "missing.json"))[0] == 2


def test_jobs_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "2")
    code, out, _ = _run(capsys, "verify", "--suite", "todd", "--qmax", "8", "--degree", "4", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["jobs"] == 2
    monkeypatch.setenv(cli.JOBS_ENV, "nonsense")
    code, out, _ = _run(capsys, "verify", "--suite", "todd", "--qmax", "4", "--degree", "2", "--format", "json")
    assert json.loads(out)["config"]["jobs"] == 1


def test_jobs_flag_overrides_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.JOBS_ENV, "3")
    code, out, _ = _run(capsys, "zeta", "-b", "3", "--format", "json", "--jobs", "1")
    assert json.loads(out)["config"]["jobs"] == 1


@pytest.mark.parametrize("suite", cli.SUITES)
def test_verify_suites_pass_small(capsys, suite):
    code, out, _ = _run(capsys, "verify", "--suite", suite, "--qmax", "7", "--degree", "4", "--nmax", "1", "--rmax", "2", "--bmax", "4")
    assert code == 0
    assert "PASS" in out


def test_verify_failure_reports_witness(capsys, monkeypatch):
    monkeypatch.setattr(cli.ded, "classical_reciprocity_rhs", lambda p, q: 0)
    code, out, err = _run(capsys, "verify", "--suite", "classical", "--qmax", "5")
    assert code == 1
    assert "FAIL" in out
    # s(1,2) + s(2,1) = 0 happens to equal the stub, so (1,3) is the first witness
    assert "FAILED: classical: s(1,3) + s(3,1) = 1/18 != 0" in err


def test_bench_rows():
    rows = cli.bench_rows([97, 1009], seed=1, repeat=1)
    assert [r["q"] for r in rows] == [97, 1009]
    assert all(r["agree"] for r in rows)
    assert all(r["cf_length"] >= 1 for r in rows)
    assert cli.bench_rows([97], seed=1, repeat=1)[0]["p"] == rows[0]["p"]


def test_help_exits_zero(capsys):
    assert _run(capsys, "--help")[0] == 0
