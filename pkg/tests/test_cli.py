"""Command surface: exit codes, file outputs, determinism, policies."""

import json
import socket

import numpy as np
import pytest

from akgame import (
    DEFENDER,
    GenerationParams,
    generate,
    load_run,
    load_scenario,
    load_trace,
    replay,
    save_scenario,
    utility,
)
from akgame.cli import (
    EXIT_DEGENERATE,
    EXIT_ENVIRONMENT,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
    run_simulation,
)
from akgame.netgame import NetworkState
from akgame.scenario import Scenario


def small_params(seed=1):
    return GenerationParams(
        node_count=8,
        vuln_count=6,
        vulns_per_node=(1, 3),
        hazard_range=(6, 100),
        patch_cost_range=(10, 60),
        exploit_cost_range=(60, 200),
        budget_attacker=300,
        budget_defender=120,
        node_value_mode="hazard_sum",
        seed=seed,
    )


def test_generate_preset(tmp_path, capsys):
    out = tmp_path / "scenario.json"
    assert main(["generate", "--preset", "paper", "--seed", "1", "-o", str(out)]) == EXIT_OK
    scenario = load_scenario(out)
    assert scenario.params.seed == 1
    assert "wrote" in capsys.readouterr().out


def test_generate_same_seed_byte_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["generate", "--preset", "paper", "--seed", "3", "-o", str(a)]) == EXIT_OK
    assert main(["generate", "--preset", "paper", "--seed", "3", "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_generate_bad_params_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"node_count": 4, "vuln_count": 3, "vulns_per_node": [0, 9]}))
    assert main(["generate", "--params", str(bad), "-o", str(tmp_path / "x.json")]) == EXIT_VALIDATION
    assert "error" in capsys.readouterr().err


def test_generate_params_file(tmp_path):
    params_path = tmp_path / "params.json"
    params_path.write_text(
        json.dumps(
            {
                "node_count": 5,
                "vuln_count": 4,
                "vulns_per_node": [1, 2],
                "seed": 11,
            }
        )
    )
    out = tmp_path / "scenario.json"
    assert main(["generate", "--params", str(params_path), "-o", str(out)]) == EXIT_OK
    assert load_scenario(out).params.node_count == 5


def test_fp_writes_trace_and_report(tmp_path, capsys):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=2)), scenario_path)
    trace_path = tmp_path / "trace.json"
    report_path = tmp_path / "report.json"
    csv_path = tmp_path / "payoffs.csv"
    code = main(
        [
            "fp",
            "--scenario",
            str(scenario_path),
            "--max-steps",
            "200",
            "-o",
            str(trace_path),
            "--report",
            str(report_path),
            "--csv",
            str(csv_path),
        ]
    )
    assert code == EXIT_OK
    trace, duel = load_trace(trace_path)
    assert duel is not None
    report = json.loads(report_path.read_text())
    assert report["cycle_found"] is True
    assert report["terminated_by"] == "cycle_found"
    eps = report["epsilon"]
    assert report["attacker_maximin"] <= report["mixed_value"] + eps
    assert report["mixed_value"] <= report["defender_minimax"] + eps
    assert csv_path.exists()


def test_fp_max_steps_one(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=3)), scenario_path)
    trace_path = tmp_path / "trace.json"
    code = main(
        ["fp", "--scenario", str(scenario_path), "--max-steps", "1", "-o", str(trace_path)]
    )
    assert code == EXIT_OK
    trace, _ = load_trace(trace_path)
    assert trace.terminated_by == "max_steps"
    assert len(trace.steps) == 1


def test_fp_trace_deterministic(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=4)), scenario_path)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["fp", "--scenario", str(scenario_path), "-o", str(a)]) == EXIT_OK
    assert main(["fp", "--scenario", str(scenario_path), "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_fp_degenerate_scenario_exits_3(tmp_path, capsys):
    scenario = generate(small_params(seed=5))
    unreachable = Scenario(
        params=scenario.params,
        catalog=scenario.catalog,
        state=NetworkState(
            phi=scenario.state.phi,
            gamma=scenario.state.gamma,
            reachable=np.zeros(scenario.state.node_count, dtype=np.int8),
            node_values=scenario.state.node_values,
            time_step=0,
        ),
        budgets=scenario.budgets,
    )
    scenario_path = tmp_path / "scenario.json"
    save_scenario(unreachable, scenario_path)
    report_path = tmp_path / "report.json"
    code = main(
        ["fp", "--scenario", str(scenario_path), "--report", str(report_path)]
    )
    assert code == EXIT_DEGENERATE
    report = json.loads(report_path.read_text())
    assert report["degenerate"] is True
    assert report["duel_items"] == 0


def test_fp_missing_scenario_exits_2(tmp_path):
    assert main(["fp", "--scenario", str(tmp_path / "nope.json")]) == EXIT_VALIDATION


def test_simulate_reproducible(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=6)), scenario_path)
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = [
        "simulate",
        "--scenario",
        str(scenario_path),
        "--steps",
        "4",
        "--defender",
        "random",
        "--attacker",
        "random",
        "--seed",
        "17",
    ]
    assert main(args + ["-o", str(a)]) == EXIT_OK
    assert main(args + ["-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_simulate_zero_steps(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    scenario = generate(small_params(seed=7))
    save_scenario(scenario, scenario_path)
    out = tmp_path / "run.json"
    assert main(["simulate", "--scenario", str(scenario_path), "--steps", "0", "-o", str(out)]) == EXIT_OK
    run = load_run(out)
    assert run.steps == []
    assert run.final_state == scenario.state


def test_simulate_replay_matches_final_state(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=8)), scenario_path)
    out = tmp_path / "run.json"
    code = main(
        [
            "simulate",
            "--scenario",
            str(scenario_path),
            "--steps",
            "5",
            "--defender",
            "best-response",
            "--attacker",
            "greedy",
            "-o",
            str(out),
        ]
    )
    assert code == EXIT_OK
    run = load_run(out)
    assert replay(run) == run.final_state


def test_simulate_unknown_policy_exits_2(tmp_path, capsys):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=9)), scenario_path)
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--scenario", str(scenario_path), "--steps", "1", "--defender", "psychic"])
    assert exc.value.code == EXIT_VALIDATION


def _defender_utility(run):
    scenario = run.scenario
    states = [scenario.state]
    current = scenario.state
    from akgame import step

    for logged in run.steps:
        current, _ = step(
            current, logged.defender_plan, logged.attacker_plan, scenario.catalog, scenario.budgets
        )
        states.append(current)
    return utility(states, DEFENDER, scenario.state.node_values, scenario.budgets.delta)


def test_best_response_defender_beats_random_defender_in_aggregate():
    # Paired-seed experiment: same attacker policy and seed on both arms.
    informed_total = 0.0
    random_total = 0.0
    for seed in range(20):
        scenario = generate(small_params(seed=100 + seed))
        informed = run_simulation(scenario, 4, "best-response", "random", seed=seed)
        oblivious = run_simulation(scenario, 4, "random", "random", seed=seed)
        informed_total += _defender_utility(informed)
        random_total += _defender_utility(oblivious)
    assert informed_total >= random_total


def test_serve_rejects_busy_port(tmp_path):
    scenario_path = tmp_path / "scenario.json"
    save_scenario(generate(small_params(seed=10)), scenario_path)
    blocker = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    blocker.bind(("127.0.0.1", 0))
    blocker.listen(1)
    port = blocker.getsockname()[1]
    try:
        code = main(["serve", "--scenario", str(scenario_path), "--port", str(port)])
        assert code == EXIT_ENVIRONMENT
    finally:
        blocker.close()


def test_serve_missing_scenario_exits_2(tmp_path):
    assert main(["serve", "--scenario", str(tmp_path / "nope.json"), "--port", "0"]) == EXIT_VALIDATION
