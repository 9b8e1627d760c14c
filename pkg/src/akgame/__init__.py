"""Budgeted attack/defense knapsack duels and a dynamic network-control game.

The layers, bottom up: exact 0/1 knapsack solving (`knapsack`), the
two-player re-weight-then-solve duel (`dueling`), cross-best-response
dynamics and matrix-game analysis (`fplay`), the stateful network game
(`netgame`), seeded generation plus JSON round-tripping (`scenario`),
planning policies (`policies`), the CLI (`cli`) and the interactive HTTP
service (`gameserver`).
"""

from .dueling import (
    DuelInstance,
    as_belief,
    attacker_reward,
    best_response_attacker,
    best_response_defender,
    defender_payoff,
    expected_optimal_attacker,
    expected_optimal_defender,
)
from .errors import SchemaError, SchemaVersionError, SizeLimitError, ValidationError
from .fplay import (
    FictitiousPlayTrace,
    GameValueEstimate,
    PayoffMatrix,
    build_payoff_matrix,
    default_init,
    detect_cycle,
    empirical_frequencies,
    matrix_game_value,
    payoff_matrix_from_trace,
    payoff_matrix_to_csv,
    random_init,
    run_fictitious_play,
    safety_levels,
    strategy_hash,
)
from .knapsack import (
    KnapsackInstance,
    as_plan,
    brute_force_knapsack,
    feasible,
    plan_value,
    solve_knapsack,
)
from .netgame import (
    ATTACKER,
    DEFENDER,
    ActionPlan,
    Budgets,
    DuelReduction,
    NetworkState,
    RunStep,
    Transfer,
    Violation,
    VulnCatalog,
    duel_plans_to_actions,
    plan_cost,
    reduce_to_duel,
    reduction_from_presence,
    step,
    utility,
    validate_plan,
)
from .scenario import (
    GenerationParams,
    RunLog,
    Scenario,
    generate,
    load,
    load_duel,
    load_run,
    load_scenario,
    load_trace,
    preset,
    replay,
    save,
    save_duel,
    save_run,
    save_scenario,
    save_trace,
)

__version__ = "0.1.0"
