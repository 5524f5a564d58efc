"""Scenario files, report formats and the command line surface."""

import json
from fractions import Fraction

import pytest

from permit_games import cli
from permit_games.reference import bundled_scenario
from permit_games.report import decimal_str, round_fraction
from permit_games.scenario import (
    ScenarioError,
    dump_scenario,
    load_scenario,
    loads_scenario,
    scenario_to_dict,
)

F = Fraction

MINIMAL = {
    "production": [[2, 3], [3, 2], [1, 1]],
    "endowments": [[40, 60, 80], [60, 40, 50]],
    "prices": [50, 60],
    "tax": 14,
    "cap": 50,
}


def write_scenario(tmp_path, data, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_bundled_scenario_loads():
    scenario = bundled_scenario()
    assert scenario.situation.tax == 14
    assert scenario.situation.cap == 50
    assert scenario.rule == "cea"


def test_numeric_literal_forms(tmp_path):
    data = dict(MINIMAL)
    data["tax"] = "14"
    data["cap"] = "50/1"
    data["prices"] = ["50.0", 60]
    scenario = load_scenario(write_scenario(tmp_path, data))
    assert scenario.situation.tax == 14
    assert scenario.situation.prices == (50, 60)


def test_bare_decimal_numbers_are_exact(tmp_path):
    data = dict(MINIMAL)
    data["tax"] = 14.1  # json.dump writes 14.1; must load as 141/10 exactly
    scenario = load_scenario(write_scenario(tmp_path, data))
    assert scenario.situation.tax == F(141, 10)


def test_zero_tax_rejected(tmp_path):
    data = dict(MINIMAL)
    data["tax"] = 0
    with pytest.raises(ScenarioError, match="tax must be positive"):
        load_scenario(write_scenario(tmp_path, data))


def test_price_condition_rejected(tmp_path):
    data = dict(MINIMAL)
    data["prices"] = [50, 1]
    with pytest.raises(ScenarioError, match="price condition .* good 2"):
        load_scenario(write_scenario(tmp_path, data))


def test_field_level_context(tmp_path):
    data = dict(MINIMAL)
    data["endowments"] = [[40, 60, 80], [60, "x", 50]]
    with pytest.raises(ScenarioError, match=r"endowments\[1\]\[1\]"):
        load_scenario(write_scenario(tmp_path, data))
    with pytest.raises(ScenarioError, match="missing field: cap"):
        loads_scenario(json.dumps({k: v for k, v in MINIMAL.items() if k != "cap"}))
    with pytest.raises(ScenarioError, match="unknown fields: extra"):
        loads_scenario(json.dumps({**MINIMAL, "extra": 1}))


def test_round_trip(tmp_path):
    original = bundled_scenario()
    out = tmp_path / "dumped.json"
    dump_scenario(original, out)
    again = load_scenario(out)
    assert again.situation == original.situation
    assert again.rule == original.rule
    assert again.options == original.options
    assert scenario_to_dict(again) == scenario_to_dict(original)


def test_rounding_helpers():
    assert decimal_str(F(50, 3), 2) == "16.67"
    assert decimal_str(F(2300, 3), 2) == "766.67"
    assert decimal_str(F(1, 8), 2) == "0.12"  # half-even
    assert decimal_str(F(3, 8), 2) == "0.38"
    assert decimal_str(F(-50, 3), 2) == "-16.67"
    assert decimal_str(F(5), 0) == "5"
    assert round_fraction(F(200, 13), 2) == F(1538, 100)


@pytest.fixture()
def scenario_path(tmp_path):
    return write_scenario(tmp_path, MINIMAL, "example3.json")


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_demands_command(scenario_path, capsys):
    code, out, _ = run_cli(capsys, "demands", "--scenario", str(scenario_path))
    assert code == 0
    assert "{1,2,3}" in out and "66 (66.00)" in out


def test_single_firm_demands(tmp_path, capsys):
    data = {
        "production": [[1], [2]], "endowments": [[7]], "prices": [9],
        "tax": 2, "cap": 3,
    }
    path = write_scenario(tmp_path, data)
    code, out, _ = run_cli(capsys, "demands", "--scenario", str(path))
    assert code == 0
    assert out.count("{1}") == 1


def test_reports_are_byte_identical(scenario_path, capsys):
    first = run_cli(capsys, "pipeline", "--scenario", str(scenario_path))
    second = run_cli(capsys, "pipeline", "--scenario", str(scenario_path))
    assert first == second


def test_cores_exit_codes(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "cores", "--scenario", str(scenario_path), "--game", "optimistic")
    assert code == 1
    assert "EMPTY" in out
    assert "720.00 + 920.00 + 1150.00" in out and "2300.00" in out
    code, out, _ = run_cli(
        capsys, "cores", "--scenario", str(scenario_path), "--game", "pessimistic")
    assert code == 0
    assert "NONEMPTY" in out


def test_rule_override_and_negative_pipeline(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "pipeline", "--scenario", str(scenario_path), "--rule", "prop")
    assert code == 1
    assert "permit-allocation-unstable" in out


def test_trade_command_reference_numbers(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "trade", "--scenario", str(scenario_path),
        "--target", "700,800,800", "--price", "50")
    assert code == 0
    assert "uniform permit price 50.00" in out
    assert "authority revenue 700.00" in out
    assert "20/3 (6.67)" in out


def test_trade_command_default_target(scenario_path, capsys):
    # without --target the ledger aims at the pipeline's priced allocation
    code, out, _ = run_cli(capsys, "trade", "--scenario", str(scenario_path))
    assert code == 0
    assert "766.67" in out


def test_trade_command_rejects_abundant_regime(tmp_path, capsys):
    data = dict(MINIMAL)
    data["cap"] = 200
    path = write_scenario(tmp_path, data)
    code, _, err = run_cli(capsys, "trade", "--scenario", str(path))
    assert code == 2 and "rationed cap" in err


def test_pipeline_single_firm(tmp_path, capsys):
    data = {
        "production": [[1], [2]], "endowments": [[7]], "prices": [9],
        "tax": 2, "cap": 3,
    }
    path = write_scenario(tmp_path, data)
    code, out, _ = run_cli(capsys, "pipeline", "--scenario", str(path))
    assert code in (0, 1)
    assert "verdict" in out


def test_mechanism_command(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "mechanism", "--scenario", str(scenario_path),
        "--grid", "0,10,50/3,20,25,30,46,50,66")
    assert code == 0
    assert "dominant strategy" in out
    code, out, _ = run_cli(
        capsys, "mechanism", "--scenario", str(scenario_path), "--rule", "prop",
        "--grid", "0,10,50/3,20,25,30,46,50,66")
    assert code == 1
    assert "NOT dominant" in out


def test_csv_and_json_formats(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "demands", "--scenario", str(scenario_path), "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "section,row,field,value,exact,decimal"
    assert any(line.endswith("demand,,20,20.00") for line in lines)
    code, out, _ = run_cli(
        capsys, "demands", "--scenario", str(scenario_path), "--format", "json")
    assert code == 0
    payload = json.loads(out)
    rows = payload["sections"][0]["rows"]
    assert rows[0]["demand"] == {"exact": "20", "decimal": "20.00"}


def test_format_env_variable(scenario_path, capsys, monkeypatch):
    monkeypatch.setenv("PERMIT_GAMES_FORMAT", "json")
    code, out, _ = run_cli(capsys, "demands", "--scenario", str(scenario_path))
    assert code == 0
    json.loads(out)


def test_precision_flag(scenario_path, capsys):
    code, out, _ = run_cli(
        capsys, "demands", "--scenario", str(scenario_path), "--precision", "4")
    assert code == 0
    assert "40 (40.0000)" in out


def test_dump_scenario_flag(scenario_path, tmp_path, capsys):
    out_path = tmp_path / "normalized.json"
    code, _, _ = run_cli(
        capsys, "demands", "--scenario", str(scenario_path),
        "--dump-scenario", str(out_path))
    assert code == 0
    reloaded = load_scenario(out_path)
    assert reloaded.situation == load_scenario(scenario_path).situation


def test_input_errors_exit_two(tmp_path, capsys):
    code, _, err = run_cli(capsys, "demands", "--scenario", str(tmp_path / "nope.json"))
    assert code == 2 and "error:" in err
    bad = write_scenario(tmp_path, {**MINIMAL, "tax": 0})
    code, _, err = run_cli(capsys, "pipeline", "--scenario", str(bad))
    assert code == 2 and "tax must be positive" in err
    code, _, err = run_cli(capsys, "demands")
    assert code == 2


def test_unknown_command_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_reproduce_paper_command(capsys):
    code, out, _ = run_cli(capsys, "reproduce-paper")
    assert code == 0
    assert "22/22 reference checks passed" in out
