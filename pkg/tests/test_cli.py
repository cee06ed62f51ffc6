import csv
import io
import json
import math
from pathlib import Path

import jsonschema
import pytest
from referencing import Registry, Resource

from qmpl.cli import main
from qmpl.errors import UsageError
from qmpl.harness import CONFIG_ENV, RunConfig, run_suite
from qmpl.harness.schemas import SCHEMA_NAMES, load_schema
from qmpl.harness.suites import SUITES
from qmpl import distribution_expand
from qmpl.scalar import exact

GOLDEN = Path(__file__).parent / "golden"


def _registry():
    resources = [
        (load_schema(n)["$id"].split("/")[-1], Resource.from_contents(load_schema(n))) for n in SCHEMA_NAMES
    ]
    return Registry().with_resources(resources)


def validate(instance, name):
    schema = load_schema(name)
    jsonschema.Draft202012Validator(schema, registry=_registry()).validate(instance)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ---------------------------------------------------------------- config


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig(seed=-1)
    with pytest.raises(UsageError):
        RunConfig(seed=2**64)
    with pytest.raises(UsageError):
        RunConfig(format="xml")
    with pytest.raises(UsageError):
        RunConfig(precision_bits=10)
    with pytest.raises(UsageError):
        RunConfig().updated(colour="red")


def test_config_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 11, "mode": "float", "precision_bits": 96}))
    monkeypatch.setenv(CONFIG_ENV, str(path))
    cfg = RunConfig.load()
    assert (cfg.seed, cfg.mode.value, cfg.precision_bits) == (11, "float", 96)


def test_cli_flags_override_config_file(tmp_path, monkeypatch, capsys):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 11, "format": "csv"}))
    monkeypatch.setenv(CONFIG_ENV, str(path))
    code, out = run(capsys, "verify", "--suite", "exchange", "--count", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["seed"] == 11


# ---------------------------------------------------------------- suites


@pytest.mark.parametrize("suite", SUITES)
def test_every_suite_passes_and_validates(suite):
    reports = run_suite(suite, 3, RunConfig(seed=3))
    assert len(reports) == 3
    for r in reports:
        assert r.passed, r.to_dict()
        validate(r.to_dict(), "verification_report")


def test_seed_determines_parameters():
    a = [r.parameters for r in run_suite("symmetry", 5, RunConfig(seed=1))]
    b = [r.parameters for r in run_suite("symmetry", 5, RunConfig(seed=1))]
    c = [r.parameters for r in run_suite("symmetry", 5, RunConfig(seed=2))]
    assert a == b != c


def test_generated_parameters_respect_bounds():
    for r in run_suite("symmetry", 30, RunConfig(seed=9)):
        vals = [r.parameters["q"], *r.parameters["values"].values()]
        assert all(0 < abs(exact(v).to_fraction()) <= exact("1/2").to_fraction() for v in vals)


def test_unknown_suite_is_usage_error(capsys):
    with pytest.raises(UsageError):
        run_suite("nope", 1, RunConfig())
    code, out = run(capsys, "verify", "--suite", "nope")
    assert code == 2
    validate(json.loads(out), "error")


# ---------------------------------------------------------------- commands


def test_eval_exact_value(capsys):
    code, out = run(capsys, "eval", "--comp", "1", "--z", "1/2", "--q", "1/2", "--trunc", "3")
    assert code == 0
    data = json.loads(out)
    validate(data, "eval_result")
    assert data["value"] == "31/21"
    assert out == (GOLDEN / "eval_qmpl_k3.json").read_text()


def test_eval_divergent_qmzv_is_structured_error(capsys):
    code, out = run(capsys, "eval", "--kind", "qmzv", "--comp", "2", "--q", "1/2")
    assert code == 2
    data = json.loads(out)
    validate(data, "error")
    assert data["error"]["code"] == "divergent-series"


def test_eval_domain_error(capsys):
    code, out = run(capsys, "eval", "--comp", "1", "--z", "3", "--q", "1/2", "--trunc", "5")
    assert code == 2
    assert json.loads(out)["error"]["code"] == "domain-error"


def test_eval_classical_at_one(capsys):
    code, out = run(
        capsys, "eval", "--kind", "classical", "--comp", "2", "--z", "1", "--mode", "float", "--trunc", "200000"
    )
    data = json.loads(out)
    assert code == 0
    assert abs(float(data["value"]) - math.pi**2 / 6) <= data["tail_bound"] < 1e-5


def test_zeta_numeric_and_word(capsys):
    code, out = run(capsys, "zeta", "--comp", "2", "--q", "2", "--mode", "float")
    assert code == 0
    assert abs(float(json.loads(out)["value"]) - 1.1373387363442) < 1e-12
    code, out = run(capsys, "zeta", "--word", "3|2")
    assert out == (GOLDEN / "zeta_word_3_2.json").read_text()
    assert json.loads(out)["q_exponent"] == -6
    code, out = run(capsys, "zeta", "--word", "2", "--times", "1,1")
    assert json.loads(out)["normal_form"] == "q^-4 zeta(1,1) zeta(2)"


def test_qmzv_grid_table(capsys):
    argv = ["table", "--kind", "qmzv_grid", "--comp", "2", "--format", "csv"]
    for q in ("2", "3/2", "5/4", "9/8"):
        argv += ["--q", q]
    code, out = run(capsys, *argv)
    assert code == 0
    assert out.encode() == (GOLDEN / "qmzv_grid.csv").read_bytes()
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["q"] for r in rows] == ["2", "3/2", "5/4", "9/8"]
    rescaled = [float(r["rescaled"]) for r in rows]
    assert rescaled == sorted(rescaled)


def test_empty_grid_gives_empty_table(capsys):
    code, out = run(capsys, "table", "--kind", "qmzv_grid", "--comp", "2")
    assert code == 0
    data = json.loads(out)
    validate(data, "table")
    assert data["rows"] == []
    code, out = run(capsys, "table", "--kind", "qmzv_grid", "--comp", "2", "--format", "csv")
    assert out == "q,K,value,rescaled,tail_bound\r\n"


def test_limit_sweep_table(capsys):
    code, out = run(capsys, "table", "--kind", "limit_sweep", "--comp", "2", "--z", "1/2")
    data = json.loads(out)
    validate(data, "table")
    devs = [r["deviation"] for r in data["rows"]]
    assert [r["j"] for r in data["rows"]] == list(range(4, 13))
    assert all(b < a for a, b in zip(devs, devs[1:]))


def test_closure_command(capsys):
    code, out = run(capsys, "closure", "--a", "1:1", "--b", "1:2")
    assert code == 0
    assert out == (GOLDEN / "closure_li1_li1.json").read_text()
    validate(json.loads(out), "verification_report")


def test_closure_failure_sets_exit_code(capsys):
    code, out = run(capsys, "closure", "--a", "1:2", "--b", "1:1", "--degree-cap", "8")
    assert code == 1
    data = json.loads(out)
    validate(data, "verification_report")
    assert data["verdict"] == "Fail"


def test_closure_parse_errors(capsys):
    code, out = run(capsys, "closure", "--a", "1;1", "--b", "1:2")
    assert code == 2


# ---------------------------------------------------------------- output formats


def test_verify_json_matches_golden(capsys):
    code, out = run(capsys, "verify", "--suite", "all", "--count", "2", "--seed", "7")
    assert code == 0
    data = json.loads(out)
    validate(data, "verify_output")
    assert out == (GOLDEN / "verify_all_count2_seed7.json").read_text()


def test_verify_csv_matches_golden(tmp_path, capsys):
    target = tmp_path / "out.csv"
    code, _ = run(capsys, "verify", "--suite", "symmetry", "--count", "3", "--seed", "7", "--format", "csv", "--out", str(target))
    assert code == 0
    raw = target.read_bytes()
    assert raw == (GOLDEN / "verify_symmetry_seed7.csv").read_bytes()
    assert raw.count(b"\r\n") == 4
    rows = list(csv.DictReader(io.StringIO(raw.decode(), newline="")))
    assert all(r["verdict"] == "ExactPass" for r in rows)
    assert json.loads(rows[0]["parameters"])["K"] == 40


def test_reports_are_sorted_canonically():
    reports = run_suite("derivative", 10, RunConfig(seed=4))
    keys = [(r.relation_id, json.dumps(r.parameters, sort_keys=True)) for r in reports]
    assert keys == sorted(keys)


def test_distribution_relation_schema():
    rel = distribution_expand((1, 1), [exact("1/4"), exact("1/9")], 2)
    validate(rel.to_dict(), "distribution_relation")
