"""Per-step planning policies shared by the simulator and the server AI.

A policy turns the current duel reduction plus the opponent's committed
action history into a selection over the reduction's items.  The candidate
item set itself encodes what the planner is allowed to see: the live
exploitability matrix for an omniscient planner, or a static scan
inventory for an attacker who cannot observe patch status.
"""

from __future__ import annotations

from typing import AbstractSet, Sequence

import numpy as np

from .dueling import (
    best_response_attacker,
    best_response_defender,
    expected_optimal_attacker,
    expected_optimal_defender,
)
from .errors import ValidationError
from .netgame import ATTACKER, DEFENDER, DuelReduction
from .sampling import shuffled_indices

POLICIES = ("random", "greedy", "best-response", "expected-optimal")
# The omniscient variant plans a true best response on the live state and
# therefore breaks the patch-privacy rule; it exists for testing only.
AI_POLICIES = POLICIES + ("omniscient-debug",)

Cells = AbstractSet[tuple[int, int]]


def history_vector(
    coords: Sequence[tuple[int, int]], last_actions: Cells | None, default: int
) -> np.ndarray:
    """Opponent's last committed plan as a 0/1 vector over current items.

    Cells drop out of the contested set once they are patched or their node
    flips, so a plan from last step may not touch the current items at all;
    that carries no information and falls back to the role's prior.  An
    explicitly empty plan (the opponent passed) is a real signal and maps
    to the zero vector.
    """
    if last_actions is None:
        return np.full(len(coords), default, dtype=np.int64)
    vec = np.array([1 if cell in last_actions else 0 for cell in coords], dtype=np.int64)
    if last_actions and not vec.any():
        return np.full(len(coords), default, dtype=np.int64)
    return vec


def belief_vector(
    coords: Sequence[tuple[int, int]], history: Sequence[Cells], default: float
) -> np.ndarray:
    """Per-item empirical action frequency over the committed history.

    Falls back to the default belief when the opponent has acted but none
    of its actions map onto the current contested set (stale signal).
    """
    if not history:
        return np.full(len(coords), default)
    counts = np.array(
        [sum(1 for actions in history if cell in actions) for cell in coords],
        dtype=float,
    )
    if not counts.any() and any(len(actions) for actions in history):
        return np.full(len(coords), default)
    return counts / len(history)


def policy_plan(
    policy: str,
    role: int,
    reduction: DuelReduction,
    opponent_history: Sequence[Cells] = (),
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Select items for one side of the duel according to a named policy.

    Defaults when there is no history yet: a defender plans against an
    all-out attack (threat everywhere), an attacker plans as if nothing
    were patched; assuming certain patching everywhere would zero every
    expected reward and leave the attacker permanently idle.
    """
    if policy not in AI_POLICIES:
        raise ValidationError(f"unknown policy {policy!r}; choose from {AI_POLICIES}")
    if role not in (DEFENDER, ATTACKER):
        raise ValidationError(f"role must be DEFENDER or ATTACKER, got {role}")
    duel = reduction.duel
    n = reduction.size
    if n == 0:
        return np.zeros(0, dtype=np.int64)

    weights = duel.defender_weights if role == DEFENDER else duel.attacker_weights
    budget = duel.defender_budget if role == DEFENDER else duel.attacker_budget

    if policy == "random":
        if rng is None:
            raise ValidationError("random policy needs a seeded generator")
        selection = np.zeros(n, dtype=np.int64)
        remaining = budget
        for k in shuffled_indices(rng, n):
            if weights[k] <= remaining:
                selection[k] = 1
                remaining -= weights[k]
        return selection

    if policy == "greedy":
        ratio = np.where(weights > 0, duel.rewards / np.where(weights > 0, weights, 1.0), np.inf)
        selection = np.zeros(n, dtype=np.int64)
        remaining = budget
        for k in np.argsort(-ratio, kind="stable"):
            if duel.rewards[k] <= 0:
                break
            if weights[k] <= remaining:
                selection[k] = 1
                remaining -= weights[k]
        return selection

    coords = reduction.coords
    last = opponent_history[-1] if opponent_history else None
    if policy in ("best-response", "omniscient-debug"):
        if role == DEFENDER:
            xi = history_vector(coords, last, default=1)
            return best_response_defender(duel, xi)
        zeta = history_vector(coords, last, default=0)
        return best_response_attacker(duel, zeta)

    # expected-optimal
    if role == DEFENDER:
        q = belief_vector(coords, opponent_history, default=1.0)
        return expected_optimal_defender(duel, q)
    p = belief_vector(coords, opponent_history, default=0.0)
    return expected_optimal_attacker(duel, p)
