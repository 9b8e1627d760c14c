"""Best-response dynamics cycle; the cycle brackets the game value.
===================================================================

Iterating cross best responses over a duel must eventually repeat a
strategy pair.  Averaging one cycle gives each side's empirical action
frequencies, and tabulating payoffs over the strategies discovered along
the way gives a small zero-sum matrix game whose value the engine brackets.
"""

from akgame import (
    empirical_frequencies,
    generate,
    matrix_game_value,
    preset,
    reduce_to_duel,
    run_fictitious_play,
    safety_levels,
)
from akgame.fplay import payoff_matrix_from_trace

scenario = generate(preset("paper", seed=1))
reduction = reduce_to_duel(scenario.state, scenario.catalog, scenario.budgets)
print(f"contested cells: {reduction.size} (nodes with several: {len(reduction.multi_vuln_nodes)})")

trace = run_fictitious_play(reduction.duel, max_steps=200)
print(
    f"play trace: {len(trace.steps)} steps, {trace.terminated_by}, "
    f"prefix {trace.prefix_length}, cycle length {trace.cycle_length}"
)

p, q = empirical_frequencies(trace)
print("cells patched in part of the cycle :", int(((p > 0) & (p < 1)).sum()))
print("cells exploited in part of the cycle:", int(((q > 0) & (q < 1)).sum()))

matrix = payoff_matrix_from_trace(trace, reduction.duel.rewards)
maximin, minimax = safety_levels(matrix)
print(f"payoff matrix over discovered strategies: {matrix.payoffs.shape}")
print(f"pure safety levels: attacker guarantees {maximin:g}, defender caps losses at {minimax:g}")

estimate = matrix_game_value(matrix, epsilon=1e-6)
print(
    f"mixed value estimate {estimate.mixed_value:.3f} "
    f"(bracket width {estimate.gap:.2e}, converged={estimate.converged})"
)
print("defender mixture over its rows:", [round(float(x), 3) for x in estimate.mixed_defender])
print("attacker mixture over its cols:", [round(float(x), 3) for x in estimate.mixed_attacker])
