"""The dynamic network game, step by step.
==========================================

Patches flip exploitability bits; exploits against still-open bits take the
node starting next step; a scorebot pays each node's value to its owner
every step.  Policies re-plan each step by reducing the live state to a
duel over the contested cells.
"""

from akgame import ATTACKER, DEFENDER, generate, utility
from akgame.cli import run_simulation
from akgame.scenario import GenerationParams

params = GenerationParams(
    node_count=10,
    vuln_count=8,
    vulns_per_node=(1, 3),
    hazard_range=(6, 100),
    patch_cost_range=(10, 60),
    exploit_cost_range=(60, 250),
    budget_attacker=400,
    budget_defender=120,
    node_value_mode="hazard_sum",
    seed=7,
)
scenario = generate(params)
print(f"network: {scenario.state.node_count} nodes, total value {scenario.state.node_values.sum():g}")

for defender_policy in ("random", "greedy", "best-response", "expected-optimal"):
    run = run_simulation(scenario, steps=6, defender_policy=defender_policy,
                         attacker_policy="random", seed=3)
    states = [scenario.state]
    current = scenario.state
    from akgame import step

    for logged in run.steps:
        current, _ = step(
            current, logged.defender_plan, logged.attacker_plan,
            scenario.catalog, scenario.budgets,
        )
        states.append(current)
    lost = int((current.gamma == ATTACKER).sum())
    u_def = utility(states, DEFENDER, scenario.state.node_values, scenario.budgets.delta)
    u_att = utility(states, ATTACKER, scenario.state.node_values, scenario.budgets.delta)
    total_transfers = sum(len(s.transfers) for s in run.steps)
    print(
        f"defender={defender_policy:17s} nodes lost {lost:2d}, transfers {total_transfers:2d}, "
        f"utilities D={u_def:8.1f} A={u_att:7.1f}"
    )
