"""Two-player knapsack duel: re-weight the shared rewards, then solve.

An attacker picks exploits to maximize the value of items the defender left
uncovered; the defender picks patches to cover what the attacker goes after.
Both best responses and both expected-value variants reduce to a single
knapsack solve after rescaling the reward vector, so they inherit the
solver's exactness and its deterministic tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .knapsack import KnapsackInstance, as_plan, solve_knapsack


@dataclass(frozen=True)
class DuelInstance:
    """Paired attacker/defender weights over shared rewards, two budgets."""

    attacker_weights: np.ndarray
    defender_weights: np.ndarray
    rewards: np.ndarray
    attacker_budget: float
    defender_budget: float

    def __post_init__(self) -> None:
        aw = np.asarray(self.attacker_weights, dtype=float)
        dw = np.asarray(self.defender_weights, dtype=float)
        rw = np.asarray(self.rewards, dtype=float)
        wa = float(self.attacker_budget)
        wd = float(self.defender_budget)
        if aw.ndim != 1 or dw.ndim != 1 or rw.ndim != 1:
            raise ValidationError("weights and rewards must be one-dimensional")
        if not (aw.size == dw.size == rw.size):
            raise ValidationError("attacker weights, defender weights and rewards must share a length")
        for arr in (aw, dw, rw):
            if not bool(np.all(np.isfinite(arr))):
                raise ValidationError("duel parameters must be finite")
            if bool(np.any(arr < 0)):
                raise ValidationError("duel parameters must be non-negative")
        if not (math.isfinite(wa) and math.isfinite(wd)) or wa < 0 or wd < 0:
            raise ValidationError("budgets must be non-negative finite numbers")
        for arr in (aw, dw, rw):
            arr.flags.writeable = False
        object.__setattr__(self, "attacker_weights", aw)
        object.__setattr__(self, "defender_weights", dw)
        object.__setattr__(self, "rewards", rw)
        object.__setattr__(self, "attacker_budget", wa)
        object.__setattr__(self, "defender_budget", wd)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DuelInstance):
            return NotImplemented
        return (
            np.array_equal(self.attacker_weights, other.attacker_weights)
            and np.array_equal(self.defender_weights, other.defender_weights)
            and np.array_equal(self.rewards, other.rewards)
            and self.attacker_budget == other.attacker_budget
            and self.defender_budget == other.defender_budget
        )

    @property
    def size(self) -> int:
        return int(self.rewards.size)


def as_belief(probabilities, n: int) -> np.ndarray:
    """Validate per-item probabilities in [0, 1] (marginals, no sum constraint)."""
    belief = np.asarray(probabilities, dtype=float)
    if belief.ndim != 1 or belief.size != n:
        raise ValidationError(f"belief must be a length-{n} vector, got shape {belief.shape}")
    if not bool(np.all(np.isfinite(belief))):
        raise ValidationError("belief entries must be finite")
    if bool(np.any(belief < 0)) or bool(np.any(belief > 1)):
        raise ValidationError("belief entries must lie in [0, 1]")
    return belief


def attacker_reward(xi, zeta, rewards) -> float:
    """Value of exploited items the defender did not cover."""
    rewards = np.asarray(rewards, dtype=float)
    if rewards.ndim != 1:
        raise ValidationError("rewards must be one-dimensional")
    xi = as_plan(xi, rewards.size)
    zeta = as_plan(zeta, rewards.size)
    return float((xi * (1 - zeta)) @ rewards)


def defender_payoff(xi, zeta, rewards) -> float:
    """The duel is zero-sum: the defender loses exactly what the attacker gains."""
    return -attacker_reward(xi, zeta, rewards)


def best_response_attacker(duel: DuelInstance, zeta) -> np.ndarray:
    """Optimal exploit plan against a fixed patch plan: avoid covered items."""
    zeta = as_plan(zeta, duel.size)
    h = (1 - zeta) * duel.rewards
    plan, _ = solve_knapsack(
        KnapsackInstance(duel.attacker_weights, h, duel.attacker_budget)
    )
    return plan


def best_response_defender(duel: DuelInstance, xi) -> np.ndarray:
    """Optimal patch plan against a fixed exploit plan: cover what is targeted."""
    xi = as_plan(xi, duel.size)
    h = xi * duel.rewards
    plan, _ = solve_knapsack(
        KnapsackInstance(duel.defender_weights, h, duel.defender_budget)
    )
    return plan


def expected_optimal_attacker(duel: DuelInstance, p) -> np.ndarray:
    """Maximize expected uncovered value given per-item patch probabilities ``p``."""
    p = as_belief(p, duel.size)
    h = (1 - p) * duel.rewards
    plan, _ = solve_knapsack(
        KnapsackInstance(duel.attacker_weights, h, duel.attacker_budget)
    )
    return plan


def expected_optimal_defender(duel: DuelInstance, q) -> np.ndarray:
    """Maximize expected covered value given per-item exploit probabilities ``q``."""
    q = as_belief(q, duel.size)
    h = q * duel.rewards
    plan, _ = solve_knapsack(
        KnapsackInstance(duel.defender_weights, h, duel.defender_budget)
    )
    return plan
