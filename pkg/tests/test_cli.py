import json

import pytest

from ispaces.cli import main
from ispaces.scenarios import REGISTRY, RunConfig, reports_to_json, run_all, run_scenario


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_config_invariants():
    assert RunConfig(trunc=0).validate()
    assert RunConfig(deg=-1).validate()
    assert RunConfig(deg=2, chains=2).validate()
    assert RunConfig().validate() == []


def test_malformed_config_rejected_before_execution(capsys):
    code, payload = run_cli(capsys, "scenario", "--deg", "2", "--chains", "1")
    assert code == 2
    assert "error" in payload


def test_unknown_scenario_is_an_error():
    with pytest.raises(ValueError):
        run_scenario("no-such-scenario", RunConfig())


def test_scenario_skips_below_minimum_truncation():
    r = run_scenario("semistable-suite", RunConfig(trunc=1))
    assert all(c["verdict"] == "skipped" for c in r.checks)
    assert r.passed()


def test_reports_are_deterministic():
    cfg = RunConfig(trunc=2, deg=1)
    a = reports_to_json([run_scenario("c1-pi0", cfg)], cfg)
    b = reports_to_json([run_scenario("c1-pi0", cfg)], cfg)
    assert a == b


def test_parallel_matches_serial():
    names = ["c1-pi0", "grothendieck", "terminal-sanity"]
    serial = run_all(RunConfig(trunc=2, scenarios=names, jobs=1))
    parallel = run_all(RunConfig(trunc=2, scenarios=names, jobs=2))
    assert [(r.name, r.checks) for r in serial] == \
        [(r.name, r.checks) for r in parallel]


def test_cli_validate(capsys):
    code, payload = run_cli(capsys, "validate", "--trunc", "2", "c1", "terminal")
    assert code == 0
    assert payload["validate"] == {"c1": [], "terminal": []}


def test_cli_hocolim_over_both_categories(capsys):
    code, payload = run_cli(capsys, "hocolim", "--trunc", "2", "--deg", "0",
                            "--chains", "1", "c1")
    assert code == 0
    assert payload["pi0"] == 3
    code, payload = run_cli(capsys, "hocolim", "--trunc", "2", "--deg", "0",
                            "--chains", "1", "--over", "N", "c1")
    assert payload["pi0"] == 4


def test_cli_homology(capsys):
    code, payload = run_cli(capsys, "homology", "--trunc", "2", "--deg", "0",
                            "terminal")
    assert code == 0
    assert payload["homology"]["0"] == [1, []]


def test_cli_flat(capsys):
    code, payload = run_cli(capsys, "flat", "--trunc", "2", "c1", "collapsing")
    assert code == 0
    assert payload["flat"]["c1"]["flat"] is True
    assert payload["flat"]["collapsing"]["flat"] is False
    assert payload["flat"]["collapsing"]["witness"] is not None


def test_cli_semistable_exit_code(capsys):
    code, payload = run_cli(capsys, "semistable", "--trunc", "2", "c1")
    assert code == 1
    assert payload["verdict"] == "refuted"


def test_cli_pi0_and_units(capsys):
    code, payload = run_cli(capsys, "pi0", "--trunc", "2", "c1")
    assert code == 0
    assert payload["grothendieck"] == [1, []]
    code, payload = run_cli(capsys, "units", "--trunc", "2", "m52")
    assert code == 0
    assert len(payload["unit_classes"]) == 2


def test_cli_bar_summary(capsys):
    code, payload = run_cli(capsys, "bar", "--trunc", "2", "m52")
    assert code == 0
    assert payload["homology"]["1"] == [1, []]


def test_cli_gamma(capsys):
    code, payload = run_cli(capsys, "gamma", "--trunc", "2", "--K", "2", "c1")
    assert code == 0
    assert payload["special"] == "special-evidence"
    assert payload["very_special"] == "refuted"


def test_cli_scenario_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, payload = run_cli(capsys, "scenario", "--trunc", "2",
                            "--name", "c1-pi0", "--out", str(out))
    assert code == 0
    assert json.loads(out.read_text()) == payload
    assert payload["passed"] is True


def test_registry_covers_acceptance_surfaces():
    needed = {"c1-pi0", "c1-bsigma2", "comma-contractible", "flat-suite",
              "semistable-suite", "grothendieck", "units-m52", "bar-c1",
              "gamma-c1-special", "eckmann-hilton"}
    assert needed <= set(REGISTRY)
