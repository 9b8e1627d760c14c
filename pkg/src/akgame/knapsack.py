"""Exact 0/1 knapsack solving with a deterministic tie-break.

Two exact strategies share one entry point: dynamic programming when every
(scaled) weight is integral, and depth-first branch-and-bound with a
fractional relaxation bound otherwise.  Among equal-value optima both
strategies return the lexicographically smallest selection vector, which
keeps everything built on top of the solver (best responses, play traces)
reproducible.  A subset-enumeration oracle is kept alongside so the solver
can be cross-checked on small instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError, ValidationError

BRUTE_FORCE_MAX_ITEMS = 25

# A dp table larger than this many cells falls back to branch-and-bound.
_DP_CELL_LIMIT = 8_000_000

_INTEGRAL_ATOL = 1e-9
_REL_TOL = 1e-9

_METHODS = ("auto", "dp", "branch_and_bound")


@dataclass(frozen=True)
class KnapsackInstance:
    """Non-negative item weights and rewards with a capacity bound."""

    weights: np.ndarray
    rewards: np.ndarray
    capacity: float

    def __post_init__(self) -> None:
        weights = np.asarray(self.weights, dtype=float)
        rewards = np.asarray(self.rewards, dtype=float)
        capacity = float(self.capacity)
        if weights.ndim != 1 or rewards.ndim != 1:
            raise ValidationError("weights and rewards must be one-dimensional")
        if weights.shape != rewards.shape:
            raise ValidationError(
                f"{weights.size} weights but {rewards.size} rewards"
            )
        if not (
            bool(np.all(np.isfinite(weights)))
            and bool(np.all(np.isfinite(rewards)))
            and math.isfinite(capacity)
        ):
            raise ValidationError("weights, rewards and capacity must be finite")
        if bool(np.any(weights < 0)) or bool(np.any(rewards < 0)) or capacity < 0:
            raise ValidationError("weights, rewards and capacity must be non-negative")
        weights = weights.copy()
        rewards = rewards.copy()
        weights.flags.writeable = False
        rewards.flags.writeable = False
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "rewards", rewards)
        object.__setattr__(self, "capacity", capacity)

    @property
    def size(self) -> int:
        return int(self.weights.size)


def as_plan(selection, n: int) -> np.ndarray:
    """Validate a 0/1 selection vector of length ``n`` and return it as int64."""
    plan = np.asarray(selection)
    if plan.ndim != 1 or plan.size != n:
        raise ValidationError(f"plan must be a length-{n} vector, got shape {plan.shape}")
    as_int = plan.astype(np.int64)
    if bool(np.any((as_int != 0) & (as_int != 1))) or bool(np.any(as_int != plan)):
        raise ValidationError("plan entries must be 0 or 1")
    return as_int


def feasible(selection, instance: KnapsackInstance) -> bool:
    """True when the selected weight does not exceed the capacity."""
    plan = as_plan(selection, instance.size)
    return float(plan @ instance.weights) <= instance.capacity


def plan_value(selection, rewards) -> float:
    rewards = np.asarray(rewards, dtype=float)
    plan = as_plan(selection, rewards.size)
    return float(plan @ rewards)


def solve_knapsack(
    instance: KnapsackInstance,
    *,
    weight_scale: float = 1.0,
    method: str = "auto",
) -> tuple[np.ndarray, float]:
    """Return an optimal selection and its value for a 0/1 knapsack.

    ``weight_scale`` multiplies the weights before the integrality check that
    decides dynamic-programming eligibility; leave it at 1 when the weights
    are already integers.  ``method`` forces one of the two strategies, mostly
    useful for cross-testing them against each other.
    """
    if method not in _METHODS:
        raise ValidationError(f"method must be one of {_METHODS}, got {method!r}")
    if not math.isfinite(weight_scale) or weight_scale <= 0:
        raise ValidationError("weight_scale must be a positive finite number")
    n = instance.size
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0.0

    scaled = instance.weights * weight_scale
    rounded = np.rint(scaled)
    integral = bool(np.all(np.abs(scaled - rounded) <= _INTEGRAL_ATOL))
    if method == "dp" and not integral:
        raise ValidationError("dp method requires integral scaled weights")

    plan: np.ndarray | None = None
    if integral and method != "branch_and_bound":
        int_weights = rounded.astype(np.int64)
        cap = int(math.floor(instance.capacity * weight_scale + _INTEGRAL_ATOL))
        cap = min(cap, int(int_weights.sum()))
        if method == "dp" or (n + 1) * (cap + 1) <= _DP_CELL_LIMIT:
            plan = _solve_dp(int_weights, instance.rewards, cap)
    if plan is None:
        plan = _solve_branch_and_bound(instance)
    return plan, float(plan @ instance.rewards)


def brute_force_knapsack(instance: KnapsackInstance) -> tuple[np.ndarray, float]:
    """Independent oracle: enumerate every subset (capped at 25 items).

    Among maximal-value feasible subsets the lexicographically smallest
    selection vector wins, matching the solver's tie-break.
    """
    n = instance.size
    if n > BRUTE_FORCE_MAX_ITEMS:
        raise SizeLimitError(
            f"brute force enumeration capped at {BRUTE_FORCE_MAX_ITEMS} items, got {n}"
        )
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0.0

    # Selection vectors ordered lexicographically = counters with item 0 as
    # the most significant bit; np.argmax keeps the first (smallest) winner.
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    chunk = 1 << 16
    best_value = -np.inf
    best_bits = np.zeros(n, dtype=np.int64)
    for start in range(0, total, chunk):
        ks = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (ks[:, None] >> shifts[None, :]) & 1
        load = bits @ instance.weights
        value = np.where(load <= instance.capacity, bits @ instance.rewards, -np.inf)
        idx = int(np.argmax(value))
        if value[idx] > best_value:
            best_value = float(value[idx])
            best_bits = bits[idx].copy()
    return best_bits, float(best_bits @ instance.rewards)


def _solve_dp(int_weights: np.ndarray, rewards: np.ndarray, cap: int) -> np.ndarray:
    """Suffix dp over integer capacities, then a lexicographic walk.

    ``dp[i][c]`` is the optimum over items ``i..n-1`` with capacity ``c``.
    Because each row is an elementwise max of values from the next row, the
    reconstruction comparison ``dp[i+1][c] >= dp[i][c]`` is exact even for
    float rewards: skipping item ``i`` is optimal iff the max picked the
    skip branch, and ties prefer skipping (the lexicographically smaller
    choice).
    """
    n = int_weights.size
    dp = np.zeros((n + 1, cap + 1))
    for i in range(n - 1, -1, -1):
        nxt = dp[i + 1]
        w = int(int_weights[i])
        if w > cap:
            dp[i] = nxt
            continue
        take = np.full(cap + 1, -np.inf)
        take[w:] = nxt[: cap + 1 - w] + rewards[i]
        dp[i] = np.maximum(nxt, take)

    selection = np.zeros(n, dtype=np.int64)
    c = cap
    for i in range(n):
        if dp[i + 1][c] >= dp[i][c]:
            continue
        selection[i] = 1
        c -= int(int_weights[i])
    return selection


def _solve_branch_and_bound(instance: KnapsackInstance) -> np.ndarray:
    """Depth-first search in index order, zero branch first.

    Completions are therefore visited in lexicographic order, so the first
    plan reaching the best value is the lexicographically smallest optimum
    and subtrees whose fractional bound cannot strictly improve it are safe
    to prune.
    """
    weights = instance.weights
    rewards = instance.rewards
    capacity = instance.capacity
    n = instance.size

    if float(weights.sum()) <= capacity:
        # Everything fits: take exactly the positive-reward items.
        return (rewards > 0).astype(np.int64)

    exact = bool(
        np.all(weights == np.rint(weights))
        and np.all(rewards == np.rint(rewards))
        and capacity == math.floor(capacity)
    )

    ratio = np.zeros(n)
    positive = weights > 0
    ratio[positive] = rewards[positive] / weights[positive]
    ratio[~positive] = np.where(rewards[~positive] > 0, np.inf, 0.0)
    order = np.argsort(-ratio, kind="stable")

    def slack(value: float) -> float:
        if exact:
            return 0.0
        return _REL_TOL * max(1.0, abs(value))

    def bound(i: int, cap_left: float, value: float) -> float:
        b = value
        c = cap_left
        for k in order:
            if k < i:
                continue
            if ratio[k] <= 0:
                break
            w = weights[k]
            if w <= c:
                c -= w
                b += rewards[k]
            else:
                b += rewards[k] * (c / w)
                break
        return b

    selection = np.zeros(n, dtype=np.int64)
    best = selection.copy()
    best_value = 0.0

    def visit(i: int, cap_left: float, value: float) -> None:
        nonlocal best, best_value
        if value > best_value + slack(best_value):
            best_value = value
            best = selection.copy()
        if i == n:
            return
        if bound(i, cap_left, value) <= best_value + slack(best_value):
            return
        visit(i + 1, cap_left, value)
        w = weights[i]
        if w <= cap_left:
            selection[i] = 1
            visit(i + 1, cap_left - w, value + rewards[i])
            selection[i] = 0

    visit(0, capacity, 0.0)
    return best
