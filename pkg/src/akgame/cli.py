"""Command-line entry point: generate, analyze, simulate, serve.

Exit codes: 0 success, 2 validation problem, 3 degenerate game (nothing
contested), 4 environment problem (e.g. port already bound).  Every command
except ``serve`` is deterministic given its inputs and seed.  Logging level
comes from the ``AK_LOG`` environment variable (error, info or debug).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from .errors import SchemaError, ValidationError
from .fplay import (
    TERMINATED_CYCLE,
    default_init,
    empirical_frequencies,
    matrix_game_value,
    payoff_matrix_from_trace,
    payoff_matrix_to_csv,
    random_init,
    run_fictitious_play,
    safety_levels,
)
from .netgame import (
    ATTACKER,
    DEFENDER,
    RunStep,
    duel_plans_to_actions,
    reduce_to_duel,
    step,
    utility,
)
from .policies import POLICIES, policy_plan
from .scenario import (
    GenerationParams,
    RunLog,
    Scenario,
    canonical_json,
    generate,
    load_scenario,
    preset,
    preset_names,
    save_run,
    save_scenario,
    save_trace,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_DEGENERATE = 3
EXIT_ENVIRONMENT = 4

log = logging.getLogger("akgame")


def _configure_logging() -> None:
    level = os.environ.get("AK_LOG", "error").lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(
        level=levels.get(level, logging.ERROR),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="akgame",
        description="Budgeted attack/defense duels over a network-control game",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a random scenario file")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=preset_names(), help="named generation preset")
    source.add_argument("--params", help="JSON file of generation parameters")
    gen.add_argument("--seed", type=int, default=None, help="override the seed")
    gen.add_argument("-o", "--output", default="scenario.json", help="output path")

    fp = sub.add_parser("fp", help="run best-response dynamics on a scenario's duel")
    fp.add_argument("--scenario", required=True)
    fp.add_argument("--max-steps", type=int, default=200)
    fp.add_argument("--init", choices=["default", "random"], default="default")
    fp.add_argument("--seed", type=int, default=0, help="seed for --init random")
    fp.add_argument("--epsilon", type=float, default=1e-6, help="game-value gap target")
    fp.add_argument("-o", "--output", default="trace.json", help="trace output path")
    fp.add_argument("--report", default=None, help="analysis report output path")
    fp.add_argument("--csv", default=None, help="also write the payoff matrix as CSV")

    sim = sub.add_parser("simulate", help="play the dynamic game with scripted policies")
    sim.add_argument("--scenario", required=True)
    sim.add_argument("--steps", type=int, required=True)
    sim.add_argument("--defender", choices=POLICIES, default="best-response")
    sim.add_argument("--attacker", choices=POLICIES, default="random")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("-o", "--output", default="run.json", help="run log output path")

    srv = sub.add_parser("serve", help="host the interactive game API")
    srv.add_argument("--scenario", required=True)
    srv.add_argument("--port", type=int, required=True)
    srv.add_argument("--host", default="127.0.0.1")

    return parser


def _load_params(path: str) -> GenerationParams:
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ValidationError(f"params file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"params file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ValidationError("params file must hold a JSON object")
    try:
        return GenerationParams(**doc)
    except TypeError as exc:
        raise ValidationError(f"bad generation params: {exc}") from None


def _read_scenario(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise ValidationError(f"scenario file not found: {path}") from None


def cmd_generate(args) -> int:
    if args.preset:
        params = preset(args.preset, seed=args.seed)
    else:
        params = _load_params(args.params)
        if args.seed is not None:
            params = GenerationParams(**{**params.__dict__, "seed": args.seed})
    scenario = generate(params)
    save_scenario(scenario, args.output)
    print(f"wrote {args.output}: {params.node_count} nodes, {params.vuln_count} vulnerabilities, seed {params.seed}")
    return EXIT_OK


def cmd_fp(args) -> int:
    started = time.perf_counter()
    scenario = _read_scenario(args.scenario)
    reduction = reduce_to_duel(scenario.state, scenario.catalog, scenario.budgets)
    if reduction.size == 0:
        report = {
            "schema_version": 1,
            "kind": "report",
            "scenario": str(args.scenario),
            "degenerate": True,
            "duel_items": 0,
            "message": "no contested (vulnerability, node) cells; nothing to play",
        }
        if args.report:
            Path(args.report).write_text(canonical_json(report))
        print("degenerate game: no contested cells", file=sys.stderr)
        return EXIT_DEGENERATE

    init = (
        default_init(reduction.duel)
        if args.init == "default"
        else random_init(reduction.duel, args.seed)
    )
    trace = run_fictitious_play(reduction.duel, init=init, max_steps=args.max_steps)
    trace_seconds = time.perf_counter() - started
    save_trace(trace, args.output, duel=reduction.duel)

    matrix = payoff_matrix_from_trace(trace, reduction.duel.rewards)
    maximin, minimax = safety_levels(matrix)
    estimate = matrix_game_value(matrix, args.epsilon)
    if args.csv:
        payoff_matrix_to_csv(matrix, args.csv)

    report = {
        "schema_version": 1,
        "kind": "report",
        "scenario": str(args.scenario),
        "degenerate": False,
        "duel_items": reduction.size,
        "multi_vuln_nodes": list(reduction.multi_vuln_nodes),
        "steps": len(trace.steps),
        "terminated_by": trace.terminated_by,
        "cycle_found": trace.terminated_by == TERMINATED_CYCLE,
        "prefix_length": trace.prefix_length,
        "cycle_length": trace.cycle_length,
        "strategies": {
            "defender": len(matrix.defender_strategies),
            "attacker": len(matrix.attacker_strategies),
        },
        "attacker_maximin": maximin,
        "defender_minimax": minimax,
        "mixed_value": estimate.mixed_value,
        "mixed_gap": estimate.gap,
        "mixed_converged": estimate.converged,
        "epsilon": estimate.epsilon,
        "timings": {
            "trace_seconds": trace_seconds,
            "total_seconds": time.perf_counter() - started,
        },
    }
    if trace.terminated_by == TERMINATED_CYCLE:
        p, q = empirical_frequencies(trace)
        report["empirical_patch_frequency"] = [float(v) for v in p]
        report["empirical_exploit_frequency"] = [float(v) for v in q]
    if args.report:
        Path(args.report).write_text(canonical_json(report))
    print(
        f"wrote {args.output}: {len(trace.steps)} steps, {trace.terminated_by}"
        + (
            f" (prefix {trace.prefix_length}, cycle {trace.cycle_length})"
            if trace.terminated_by == TERMINATED_CYCLE
            else ""
        )
    )
    print(
        f"safety levels: attacker {maximin:g}, defender {minimax:g}; "
        f"mixed value {estimate.mixed_value:g} (gap {estimate.gap:g})"
    )
    return EXIT_OK


def run_simulation(
    scenario: Scenario,
    steps: int,
    defender_policy: str,
    attacker_policy: str,
    seed: int,
) -> RunLog:
    """Play ``steps`` rounds with per-step re-planning; returns the run log."""
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    defender_seq, attacker_seq = np.random.SeedSequence(seed).spawn(2)
    rng_defender = np.random.Generator(np.random.PCG64(defender_seq))
    rng_attacker = np.random.Generator(np.random.PCG64(attacker_seq))

    state = scenario.state
    defender_history: list[frozenset] = []
    attacker_history: list[frozenset] = []
    logged = []
    for _ in range(steps):
        reduction = reduce_to_duel(state, scenario.catalog, scenario.budgets)
        zeta = policy_plan(
            defender_policy, DEFENDER, reduction, attacker_history, rng=rng_defender
        )
        xi = policy_plan(
            attacker_policy, ATTACKER, reduction, defender_history, rng=rng_attacker
        )
        defender_plan, attacker_plan = duel_plans_to_actions(reduction, zeta, xi)
        state, transfers = step(
            state, defender_plan, attacker_plan, scenario.catalog, scenario.budgets
        )
        defender_history.append(frozenset(defender_plan.patches))
        attacker_history.append(frozenset(attacker_plan.exploits))
        logged.append(
            RunStep(
                defender_plan=defender_plan,
                attacker_plan=attacker_plan,
                transfers=tuple(transfers),
            )
        )
    config = {
        "defender_policy": defender_policy,
        "attacker_policy": attacker_policy,
        "seed": seed,
        "steps": steps,
    }
    return RunLog(scenario=scenario, config=config, steps=logged, final_state=state)


def cmd_simulate(args) -> int:
    scenario = _read_scenario(args.scenario)
    run = run_simulation(scenario, args.steps, args.defender, args.attacker, args.seed)
    save_run(run, args.output)
    states = [scenario.state]
    current = scenario.state
    for logged in run.steps:
        current, _ = step(
            current, logged.defender_plan, logged.attacker_plan, scenario.catalog, scenario.budgets
        )
        states.append(current)
    delta = scenario.budgets.delta
    u_def = utility(states, DEFENDER, scenario.state.node_values, delta)
    u_att = utility(states, ATTACKER, scenario.state.node_values, delta)
    transfers = sum(len(logged.transfers) for logged in run.steps)
    print(
        f"wrote {args.output}: {len(run.steps)} steps, {transfers} transfers, "
        f"defender utility {u_def:g}, attacker utility {u_att:g}"
    )
    return EXIT_OK


def cmd_serve(args) -> int:
    from .gameserver import GameServer  # deferred: keeps plain commands socket-free

    scenario = _read_scenario(args.scenario)
    try:
        server = GameServer(scenario, host=args.host, port=args.port)
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return EXIT_ENVIRONMENT
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (Ctrl-C to stop)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return EXIT_OK


def main(argv=None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "fp": cmd_fp,
        "simulate": cmd_simulate,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (ValidationError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
