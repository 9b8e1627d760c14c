"""Best responses in the attack/defense duel.
=============================================

The attacker maximizes the value of exploited-and-uncovered items; the
defender covers what the attacker goes after.  Both reduce to a single
knapsack solve after re-weighting the reward vector, and the expected-value
variants do the same with fractional beliefs instead of a fixed plan.
"""

import numpy as np

from akgame import (
    DuelInstance,
    attacker_reward,
    best_response_attacker,
    best_response_defender,
    expected_optimal_attacker,
    expected_optimal_defender,
)

duel = DuelInstance(
    attacker_weights=[110, 130, 400, 250],
    defender_weights=[20, 35, 60, 15],
    rewards=[40, 55, 90, 25],
    attacker_budget=500,
    defender_budget=60,
)

# The attacker against an empty defense: plain knapsack optimum.
nothing_patched = np.zeros(4, dtype=int)
xi = best_response_attacker(duel, nothing_patched)
print("attacker vs empty defense:", xi, "payoff", attacker_reward(xi, nothing_patched, duel.rewards))

# The defender matches that attack as well as its budget allows.
zeta = best_response_defender(duel, xi)
print("defender matching it     :", zeta, "payoff", attacker_reward(xi, zeta, duel.rewards))

# And the attacker re-routes around the new cover.
xi2 = best_response_attacker(duel, zeta)
print("attacker re-routing      :", xi2, "payoff", attacker_reward(xi2, zeta, duel.rewards))

# Beliefs instead of fixed plans: a 50/50 patch belief discounts each item.
belief = np.full(4, 0.5)
print("attacker vs p=0.5 belief :", expected_optimal_attacker(duel, belief))
print("defender vs q=0.5 belief :", expected_optimal_defender(duel, belief))

# Degenerate beliefs reproduce the crisp best responses exactly.
assert np.array_equal(expected_optimal_attacker(duel, zeta.astype(float)), xi2)
print("degenerate belief == best response: ok")
