"""Cross-best-response dynamics over a duel and their analysis.

Each side repeatedly best-responds to the other's previous move.  The state
space is finite and both best responses are deterministic, so the sequence
of strategy pairs is eventually periodic; the helpers here detect that
cycle, average it into empirical action frequencies, tabulate payoffs over
the strategies discovered along the way, and bracket the value of the
resulting finite zero-sum matrix game.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass

import numpy as np

from .dueling import (
    DuelInstance,
    attacker_reward,
    best_response_attacker,
    best_response_defender,
)
from .errors import ValidationError
from .knapsack import as_plan
from .sampling import new_generator, shuffled_indices

TERMINATED_CYCLE = "cycle_found"
TERMINATED_MAX = "max_steps"


@dataclass
class FictitiousPlayTrace:
    """Ordered (patch plan, exploit plan) pairs with cycle annotation."""

    steps: list[tuple[np.ndarray, np.ndarray]]
    prefix_length: int | None
    cycle_length: int | None
    terminated_by: str

    def __eq__(self, other) -> bool:
        if not isinstance(other, FictitiousPlayTrace):
            return NotImplemented
        if (
            self.prefix_length != other.prefix_length
            or self.cycle_length != other.cycle_length
            or self.terminated_by != other.terminated_by
            or len(self.steps) != len(other.steps)
        ):
            return False
        return all(
            np.array_equal(za, zb) and np.array_equal(xa, xb)
            for (za, xa), (zb, xb) in zip(self.steps, other.steps)
        )


@dataclass
class PayoffMatrix:
    """Attacker payoffs for every (defender strategy, attacker strategy) pair."""

    defender_strategies: list[np.ndarray]
    attacker_strategies: list[np.ndarray]
    payoffs: np.ndarray


@dataclass
class GameValueEstimate:
    """Bounds and a point estimate for the value of a finite zero-sum game."""

    attacker_maximin: float
    defender_minimax: float
    mixed_value: float
    mixed_attacker: np.ndarray
    mixed_defender: np.ndarray
    epsilon: float
    converged: bool
    gap: float
    iterations: int


def _pair_key(zeta, xi) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple(int(b) for b in np.asarray(zeta)),
        tuple(int(b) for b in np.asarray(xi)),
    )


def default_init(duel: DuelInstance) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic starting pair: each side's plain budget-constrained optimum.

    The defender covers as if every item were under attack; the attacker
    targets as if nothing were covered.  (Best-responding to an all-ones
    patch plan would zero the attacker's objective and always return the
    empty plan, so the attacker side responds to all-zeros instead.)
    """
    n = duel.size
    zeta0 = best_response_defender(duel, np.ones(n, dtype=np.int64))
    xi0 = best_response_attacker(duel, np.zeros(n, dtype=np.int64))
    return zeta0, xi0


def random_init(duel: DuelInstance, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Oblivious starting pair: take affordable items in random order."""
    rng = new_generator(seed)
    zeta0 = _random_plan(rng, duel.defender_weights, duel.defender_budget)
    xi0 = _random_plan(rng, duel.attacker_weights, duel.attacker_budget)
    return zeta0, xi0


def _random_plan(rng, weights: np.ndarray, budget: float) -> np.ndarray:
    selection = np.zeros(weights.size, dtype=np.int64)
    remaining = budget
    for k in shuffled_indices(rng, weights.size):
        if weights[k] <= remaining:
            selection[k] = 1
            remaining -= weights[k]
    return selection


def run_fictitious_play(
    duel: DuelInstance,
    init: tuple[np.ndarray, np.ndarray] | None = None,
    max_steps: int = 200,
) -> FictitiousPlayTrace:
    """Iterate cross best responses until a strategy pair repeats.

    ``steps[0]`` is the initial pair; every following pair is
    ``(respond-to-previous-exploits, respond-to-previous-patches)``.  The
    run stops at the first repeated pair or after ``max_steps`` entries.
    """
    if max_steps < 1:
        raise ValidationError("max_steps must be at least 1")
    if init is None:
        init = default_init(duel)
    n = duel.size
    zeta0 = as_plan(init[0], n)
    xi0 = as_plan(init[1], n)
    if float(zeta0 @ duel.defender_weights) > duel.defender_budget:
        raise ValidationError("initial patch plan exceeds the defender budget")
    if float(xi0 @ duel.attacker_weights) > duel.attacker_budget:
        raise ValidationError("initial exploit plan exceeds the attacker budget")

    steps: list[tuple[np.ndarray, np.ndarray]] = [(zeta0, xi0)]
    seen = {_pair_key(zeta0, xi0): 0}
    while len(steps) < max_steps:
        zeta_prev, xi_prev = steps[-1]
        xi_k = best_response_attacker(duel, zeta_prev)
        zeta_k = best_response_defender(duel, xi_prev)
        steps.append((zeta_k, xi_k))
        key = _pair_key(zeta_k, xi_k)
        if key in seen:
            first = seen[key]
            return FictitiousPlayTrace(
                steps=steps,
                prefix_length=first,
                cycle_length=len(steps) - 1 - first,
                terminated_by=TERMINATED_CYCLE,
            )
        seen[key] = len(steps) - 1
    return FictitiousPlayTrace(
        steps=steps, prefix_length=None, cycle_length=None, terminated_by=TERMINATED_MAX
    )


def detect_cycle(steps) -> tuple[int, int] | None:
    """Earliest repeat in a pair sequence as (prefix_length, cycle_length)."""
    seen: dict = {}
    for t, (zeta, xi) in enumerate(steps):
        key = _pair_key(zeta, xi)
        if key in seen:
            return seen[key], t - seen[key]
        seen[key] = t
    return None


def empirical_frequencies(
    trace: FictitiousPlayTrace, window: int | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Per-item action frequencies (patch side, exploit side).

    For a trace that found its cycle the average over one full cycle is the
    exact limit frequency of the eventually periodic sequence.  A trace cut
    off at max_steps only supports an approximate answer, so an explicit
    ``window`` (number of trailing steps to average) must be passed.
    """
    if trace.terminated_by == TERMINATED_CYCLE:
        assert trace.prefix_length is not None and trace.cycle_length is not None
        span = trace.steps[
            trace.prefix_length : trace.prefix_length + trace.cycle_length
        ]
    else:
        if window is None:
            raise ValidationError(
                "trace has no cycle; pass window=<trailing steps> for an approximate average"
            )
        if window < 1:
            raise ValidationError("window must be at least 1")
        span = trace.steps[-window:]
    p = np.mean([zeta for zeta, _ in span], axis=0, dtype=float)
    q = np.mean([xi for _, xi in span], axis=0, dtype=float)
    return p, q


def _dedup(plans) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    seen = set()
    for plan in plans:
        key = tuple(int(b) for b in np.asarray(plan))
        if key not in seen:
            seen.add(key)
            out.append(np.asarray(plan, dtype=np.int64))
    return out


def build_payoff_matrix(defender_strategies, attacker_strategies, rewards) -> PayoffMatrix:
    """All-pairs attacker payoffs; strategies deduplicated in first-seen order."""
    defenders = _dedup(defender_strategies)
    attackers = _dedup(attacker_strategies)
    if not defenders or not attackers:
        raise ValidationError("need at least one strategy per side")
    rewards = np.asarray(rewards, dtype=float)
    zeta_rows = np.stack(defenders)
    xi_rows = np.stack(attackers)
    payoffs = ((1 - zeta_rows) * rewards) @ xi_rows.T
    return PayoffMatrix(defenders, attackers, payoffs)


def payoff_matrix_from_trace(trace: FictitiousPlayTrace, rewards) -> PayoffMatrix:
    return build_payoff_matrix(
        [zeta for zeta, _ in trace.steps],
        [xi for _, xi in trace.steps],
        rewards,
    )


def safety_levels(matrix: PayoffMatrix) -> tuple[float, float]:
    """Guaranteed payoffs from pure strategies: (attacker maximin, defender minimax)."""
    payoffs = matrix.payoffs
    attacker_maximin = float(payoffs.min(axis=0).max())
    defender_minimax = float(payoffs.max(axis=1).min())
    return attacker_maximin, defender_minimax


def matrix_game_value(
    matrix: PayoffMatrix, epsilon: float, max_iterations: int = 100_000
) -> GameValueEstimate:
    """Bracket the mixed value of the sampled game by iterated averaging.

    Alternating best responses against the opponent's empirical mixture
    produce an upper bound (defender side) and a lower bound (attacker
    side) on the game value; iteration stops once the duality gap is at
    most ``epsilon`` or the cap is reached.  The point estimate is clamped
    into the pure-strategy safety bracket, which also contains the true
    value, so the returned estimate always satisfies the sandwich
    ``maximin <= value + eps`` and ``value <= minimax + eps``.  A run that
    hits the cap is flagged via ``converged=False`` with the achieved gap.
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    payoffs = matrix.payoffs
    rows, cols = payoffs.shape
    attacker_maximin, defender_minimax = safety_levels(matrix)

    row_start = int(np.argmin(payoffs.max(axis=1)))
    col_start = int(np.argmax(payoffs.min(axis=0)))
    row_counts = np.zeros(rows)
    col_counts = np.zeros(cols)
    row_counts[row_start] = 1
    col_counts[col_start] = 1
    col_sums = payoffs[row_start].astype(float).copy()  # row mixture @ payoffs
    row_sums = payoffs[:, col_start].astype(float).copy()  # payoffs @ col mixture

    best_upper = defender_minimax
    best_lower = attacker_maximin
    upper_mixture = row_counts.copy()
    lower_mixture = col_counts.copy()

    iterations = 0
    while best_upper - best_lower > epsilon and iterations < max_iterations:
        iterations += 1
        r = int(np.argmin(row_sums))
        row_counts[r] += 1
        col_sums += payoffs[r]
        upper = float(col_sums.max()) / row_counts.sum()
        if upper < best_upper:
            best_upper = upper
            upper_mixture = row_counts.copy()
        c = int(np.argmax(col_sums))
        col_counts[c] += 1
        row_sums += payoffs[:, c]
        lower = float(row_sums.min()) / col_counts.sum()
        if lower > best_lower:
            best_lower = lower
            lower_mixture = col_counts.copy()

    gap = float(best_upper - best_lower)
    lo = max(best_lower, attacker_maximin)
    hi = min(best_upper, defender_minimax)
    value = (lo + hi) / 2.0
    return GameValueEstimate(
        attacker_maximin=attacker_maximin,
        defender_minimax=defender_minimax,
        mixed_value=float(value),
        mixed_attacker=lower_mixture / lower_mixture.sum(),
        mixed_defender=upper_mixture / upper_mixture.sum(),
        epsilon=float(epsilon),
        converged=gap <= epsilon,
        gap=gap,
        iterations=iterations,
    )


def strategy_hash(plan) -> str:
    """Short stable identifier for a 0/1 strategy vector."""
    bits = "".join(str(int(b)) for b in np.asarray(plan))
    return hashlib.sha1(bits.encode("ascii")).hexdigest()[:12]


def payoff_matrix_to_csv(matrix: PayoffMatrix, path) -> None:
    """Write the payoff table with strategy hashes as row/column headers."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["defender\\attacker"]
            + [strategy_hash(xi) for xi in matrix.attacker_strategies]
        )
        for zeta, row in zip(matrix.defender_strategies, matrix.payoffs):
            writer.writerow([strategy_hash(zeta)] + [repr(float(v)) for v in row])
