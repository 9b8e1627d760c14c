"""Exact 0/1 knapsack solving, cross-checked and timed.
=======================================================

The solver picks dynamic programming for integral weights and
branch-and-bound otherwise; both are exact and both break value ties by
returning the lexicographically smallest selection vector.
"""

import time

import numpy as np

from akgame import KnapsackInstance, brute_force_knapsack, solve_knapsack

# A small instance, solved three ways.
instance = KnapsackInstance(weights=[3, 2, 2, 5], rewards=[5, 4, 4, 9], capacity=7)

plan, value = solve_knapsack(instance)
print("auto  :", plan, "value", value)

plan_dp, value_dp = solve_knapsack(instance, method="dp")
plan_bb, value_bb = solve_knapsack(instance, method="branch_and_bound")
oracle_plan, oracle_value = brute_force_knapsack(instance)
print("dp    :", plan_dp, "value", value_dp)
print("b&b   :", plan_bb, "value", value_bb)
print("oracle:", oracle_plan, "value", oracle_value)
assert value == value_dp == value_bb == oracle_value

# Ties prefer the lexicographically smallest plan: [0, 1] beats [1, 0].
tie = KnapsackInstance([2, 3], [3, 3], 3)
print("tie-break:", solve_knapsack(tie)[0])

# Measured solve times at growing sizes (costs like the benchmark preset:
# integer weights up to 700, capacity 800).
rng = np.random.default_rng(0)
print("\nmeasured dp solve times (integer weights in [100, 700], capacity 800):")
for n in (50, 200, 500, 2000):
    weights = rng.integers(100, 701, size=n)
    rewards = rng.integers(1, 101, size=n)
    inst = KnapsackInstance(weights, rewards, 800)
    started = time.perf_counter()
    solve_knapsack(inst)
    print(f"  n = {n:5d}: {1000 * (time.perf_counter() - started):7.1f} ms")
