"""Seeded generation and canonical JSON round-trips."""

import json

import numpy as np
import pytest

from akgame import (
    ATTACKER,
    DEFENDER,
    ActionPlan,
    GenerationParams,
    RunStep,
    SchemaError,
    SchemaVersionError,
    Transfer,
    ValidationError,
    generate,
    load,
    load_duel,
    load_run,
    load_scenario,
    load_trace,
    preset,
    reduce_to_duel,
    replay,
    run_fictitious_play,
    save_run,
    save_scenario,
    save_trace,
    step,
)
from akgame.scenario import RunLog, Scenario, canonical_json, save_duel


def test_preset_matches_benchmark_setup():
    params = preset("paper", seed=1)
    assert params.node_count == 100
    assert params.vuln_count == 70
    assert params.vulns_per_node == (0, 10)
    assert params.hazard_range == (6.0, 100.0)
    assert params.exploit_cost_range == (100.0, 700.0)
    assert params.budget_attacker == params.budget_defender == 800.0
    scenario = generate(params)
    assert scenario.state.node_count == 100
    assert scenario.state.vuln_count == 70


def test_generate_is_seed_deterministic():
    params = preset("paper", seed=99)
    first = generate(params)
    second = generate(params)
    assert first == second
    third = generate(preset("paper", seed=100))
    assert third != first


def test_generated_values_inside_ranges():
    params = GenerationParams(
        node_count=30,
        vuln_count=15,
        vulns_per_node=(1, 5),
        hazard_range=(6, 100),
        patch_cost_range=(10, 100),
        exploit_cost_range=(100, 700),
        seed=5,
    )
    scenario = generate(params)
    catalog = scenario.catalog
    assert np.all((catalog.hazard >= 6) & (catalog.hazard <= 100))
    assert np.all((catalog.patch_costs >= 10) & (catalog.patch_costs <= 100))
    assert np.all((catalog.exploit_costs >= 100) & (catalog.exploit_costs <= 700))
    per_node = scenario.state.phi.sum(axis=0)
    assert np.all((per_node >= 1) & (per_node <= 5))
    # integral bounds draw integers, which keeps duels on the dp path
    assert np.all(catalog.hazard == np.rint(catalog.hazard))


def test_generate_minimal_scenario():
    scenario = generate(GenerationParams(node_count=1, vuln_count=1, vulns_per_node=(1, 1), seed=0))
    assert scenario.state.phi.tolist() == [[1]]
    assert int(scenario.state.gamma[0]) == DEFENDER
    assert int(scenario.state.reachable[0]) == 1


def test_hazard_sum_node_values():
    params = GenerationParams(
        node_count=5, vuln_count=4, vulns_per_node=(1, 3), node_value_mode="hazard_sum", seed=2
    )
    scenario = generate(params)
    expected = scenario.state.node_hazard(scenario.catalog)
    assert np.array_equal(scenario.state.node_values, expected)


def test_params_validation():
    with pytest.raises(ValidationError):
        GenerationParams(node_count=3, vuln_count=2, vulns_per_node=(0, 5))
    with pytest.raises(ValidationError):
        GenerationParams(node_count=0, vuln_count=2)
    with pytest.raises(ValidationError):
        GenerationParams(node_count=1, vuln_count=1, hazard_range=(10, 5))
    with pytest.raises(ValidationError):
        GenerationParams(node_count=1, vuln_count=1, node_value_mode="nope")
    with pytest.raises(ValidationError):
        preset("unknown")


def test_scenario_round_trip(tmp_path):
    scenario = generate(preset("paper", seed=7))
    path = tmp_path / "scenario.json"
    save_scenario(scenario, path)
    assert load_scenario(path) == scenario
    # byte-identical on re-save
    save_scenario(load_scenario(path), tmp_path / "again.json")
    assert path.read_bytes() == (tmp_path / "again.json").read_bytes()


def test_duel_round_trip(tmp_path):
    scenario = generate(GenerationParams(node_count=6, vuln_count=4, vulns_per_node=(1, 2), seed=3))
    reduction = reduce_to_duel(scenario.state, scenario.catalog, scenario.budgets)
    path = tmp_path / "duel.json"
    save_duel(reduction, path)
    assert load_duel(path) == reduction


def test_trace_round_trip(tmp_path):
    scenario = generate(GenerationParams(node_count=4, vuln_count=3, vulns_per_node=(1, 2), seed=4))
    reduction = reduce_to_duel(scenario.state, scenario.catalog, scenario.budgets)
    trace = run_fictitious_play(reduction.duel, max_steps=50)
    path = tmp_path / "trace.json"
    save_trace(trace, path, duel=reduction.duel)
    loaded_trace, loaded_duel = load_trace(path)
    assert loaded_trace == trace
    assert loaded_duel == reduction.duel


def test_run_round_trip_and_replay(tmp_path):
    scenario = generate(GenerationParams(node_count=3, vuln_count=2, vulns_per_node=(1, 2), seed=6))
    state = scenario.state
    steps = []
    for _ in range(3):
        reduction = reduce_to_duel(state, scenario.catalog, scenario.budgets)
        exploits = set(reduction.coords[:1])
        attacker_plan = ActionPlan(exploits=exploits, acting_agent=ATTACKER)
        defender_plan = ActionPlan(acting_agent=DEFENDER)
        state, transfers = step(state, defender_plan, attacker_plan, scenario.catalog, scenario.budgets)
        steps.append(RunStep(defender_plan, attacker_plan, tuple(transfers)))
    run = RunLog(scenario=scenario, config={"note": "unit"}, steps=steps, final_state=state)
    path = tmp_path / "run.json"
    save_run(run, path)
    loaded = load_run(path)
    assert loaded == run
    assert replay(loaded) == run.final_state


def test_load_dispatches_on_kind(tmp_path):
    scenario = generate(GenerationParams(node_count=2, vuln_count=2, vulns_per_node=(1, 1), seed=8))
    path = tmp_path / "scenario.json"
    save_scenario(scenario, path)
    assert isinstance(load(path), Scenario)


def test_unknown_schema_version(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schema_version": 99, "kind": "scenario"}))
    with pytest.raises(SchemaVersionError, match="99"):
        load(path)


def test_truncated_file_names_byte_offset(tmp_path):
    scenario = generate(GenerationParams(node_count=2, vuln_count=2, vulns_per_node=(1, 1), seed=9))
    path = tmp_path / "scenario.json"
    save_scenario(scenario, path)
    truncated = tmp_path / "truncated.json"
    truncated.write_text(path.read_text()[:120])
    with pytest.raises(SchemaError, match="byte offset"):
        load(truncated)


def test_unknown_kind(tmp_path):
    path = tmp_path / "odd.json"
    path.write_text(json.dumps({"schema_version": 1, "kind": "mystery"}))
    with pytest.raises(SchemaError, match="mystery"):
        load(path)


def test_canonical_json_sorted_keys():
    text = canonical_json({"b": 1, "a": {"d": 2, "c": 3}})
    assert text.index('"a"') < text.index('"b"')
    assert text.index('"c"') < text.index('"d"')
    assert text.endswith("\n")
