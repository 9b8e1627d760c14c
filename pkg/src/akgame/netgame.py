"""Dynamic network-control game: state, action validation, step dynamics.

A network is a matrix of exploitability bits (vulnerability x node) plus a
per-node owner, reachability flag and value.  Each step the defender's
patches flip exploitability bits (XOR, so re-applying a patch reverts it),
then the attacker's exploits fire: an exploit against a still-exploitable
bit flips the node's owner starting next step, while one against a covered
bit does nothing.  A scorebot pays each node's value to its owner every
step.  The per-step planning problem reduces to a weighted duel over the
contested (vulnerability, node) cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .dueling import DuelInstance
from .errors import ValidationError
from .knapsack import as_plan

DEFENDER = 0
ATTACKER = 1


def _check_vector(name: str, arr: np.ndarray) -> np.ndarray:
    if arr.ndim != 1:
        raise ValidationError(f"{name} must be one-dimensional")
    if not bool(np.all(np.isfinite(arr))):
        raise ValidationError(f"{name} must be finite")
    if bool(np.any(arr < 0)):
        raise ValidationError(f"{name} must be non-negative")
    return arr


@dataclass(frozen=True)
class VulnCatalog:
    """Static per-vulnerability hazard and cost parameters.

    Patching one instance costs ``patch_base + patch_unit``; deploying one
    exploit costs ``exploit_base + exploit_unit``.  Costs are charged per
    individual (vulnerability, node) action.
    """

    hazard: np.ndarray
    patch_base: np.ndarray
    patch_unit: np.ndarray
    exploit_base: np.ndarray
    exploit_unit: np.ndarray

    def __post_init__(self) -> None:
        arrays = {}
        for name in ("hazard", "patch_base", "patch_unit", "exploit_base", "exploit_unit"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            _check_vector(name, arr)
            arrays[name] = arr
        sizes = {arr.size for arr in arrays.values()}
        if len(sizes) != 1:
            raise ValidationError("catalog parameter vectors must share a length")
        if arrays["hazard"].size < 1:
            raise ValidationError("catalog must describe at least one vulnerability")
        for name, arr in arrays.items():
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, VulnCatalog):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, name), getattr(other, name))
            for name in ("hazard", "patch_base", "patch_unit", "exploit_base", "exploit_unit")
        )

    @property
    def size(self) -> int:
        return int(self.hazard.size)

    @property
    def patch_costs(self) -> np.ndarray:
        return self.patch_base + self.patch_unit

    @property
    def exploit_costs(self) -> np.ndarray:
        return self.exploit_base + self.exploit_unit


@dataclass(frozen=True)
class NetworkState:
    """Mutable-by-step game state: exploitability, ownership, reachability."""

    phi: np.ndarray
    gamma: np.ndarray
    reachable: np.ndarray
    node_values: np.ndarray
    time_step: int = 0

    def __post_init__(self) -> None:
        phi = np.asarray(self.phi, dtype=np.int8).copy()
        gamma = np.asarray(self.gamma, dtype=np.int64).copy()
        reachable = np.asarray(self.reachable, dtype=np.int8).copy()
        node_values = np.asarray(self.node_values, dtype=float).copy()
        if phi.ndim != 2:
            raise ValidationError("phi must be a (vulnerabilities x nodes) matrix")
        nodes = phi.shape[1]
        if gamma.shape != (nodes,) or reachable.shape != (nodes,) or node_values.shape != (nodes,):
            raise ValidationError("per-node vectors must match phi's node count")
        if bool(np.any((phi != 0) & (phi != 1))) or bool(np.any((reachable != 0) & (reachable != 1))):
            raise ValidationError("phi and reachable entries must be 0 or 1")
        _check_vector("node_values", node_values)
        if self.time_step < 0:
            raise ValidationError("time_step must be non-negative")
        for arr in (phi, gamma, reachable, node_values):
            arr.flags.writeable = False
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "reachable", reachable)
        object.__setattr__(self, "node_values", node_values)
        object.__setattr__(self, "time_step", int(self.time_step))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NetworkState):
            return NotImplemented
        return (
            self.time_step == other.time_step
            and np.array_equal(self.phi, other.phi)
            and np.array_equal(self.gamma, other.gamma)
            and np.array_equal(self.reachable, other.reachable)
            and np.array_equal(self.node_values, other.node_values)
        )

    @property
    def vuln_count(self) -> int:
        return int(self.phi.shape[0])

    @property
    def node_count(self) -> int:
        return int(self.phi.shape[1])

    def node_hazard(self, catalog: VulnCatalog) -> np.ndarray:
        """Aggregate hazard per node (column sums weighted by hazard scores)."""
        return catalog.hazard @ self.phi

    def vuln_hazard(self, catalog: VulnCatalog) -> np.ndarray:
        """Aggregate hazard per vulnerability across the network."""
        return catalog.hazard * self.phi.sum(axis=1)

    def total_hazard(self, catalog: VulnCatalog) -> float:
        return float(self.node_hazard(catalog).sum())


def _as_cells(name: str, cells) -> frozenset[tuple[int, int]]:
    out = set()
    for cell in cells:
        pair = tuple(cell)
        if len(pair) != 2:
            raise ValidationError(f"{name} entries must be (vulnerability, node) pairs")
        out.add((int(pair[0]), int(pair[1])))
    return frozenset(out)


@dataclass(frozen=True)
class ActionPlan:
    """One agent's actions for a step: patch cells and/or exploit cells."""

    patches: frozenset[tuple[int, int]] = frozenset()
    exploits: frozenset[tuple[int, int]] = frozenset()
    acting_agent: int = DEFENDER

    def __post_init__(self) -> None:
        object.__setattr__(self, "patches", _as_cells("patches", self.patches))
        object.__setattr__(self, "exploits", _as_cells("exploits", self.exploits))
        object.__setattr__(self, "acting_agent", int(self.acting_agent))

    @property
    def sorted_patches(self) -> list[tuple[int, int]]:
        return sorted(self.patches)

    @property
    def sorted_exploits(self) -> list[tuple[int, int]]:
        return sorted(self.exploits)


@dataclass(frozen=True)
class Budgets:
    """Per-agent per-step spending caps and the shared reward discount."""

    caps: dict[int, float]
    delta: float = 1.0

    def __post_init__(self) -> None:
        caps = {int(agent): float(cap) for agent, cap in dict(self.caps).items()}
        for agent, cap in caps.items():
            if not math.isfinite(cap) or cap < 0:
                raise ValidationError(f"cap for agent {agent} must be non-negative")
        if not (0 < self.delta <= 1):
            raise ValidationError("delta must lie in (0, 1]")
        object.__setattr__(self, "caps", caps)
        object.__setattr__(self, "delta", float(self.delta))

    def cap_for(self, agent: int) -> float:
        try:
            return self.caps[int(agent)]
        except KeyError:
            raise ValidationError(f"no budget cap for agent {agent}") from None


class Transfer(NamedTuple):
    """One node changing owner during a step."""

    node: int
    from_agent: int
    to_agent: int
    value: float


@dataclass(frozen=True)
class Violation:
    """First rule a plan breaks, with the offending cell when there is one."""

    rule: str
    coords: tuple[int, int] | None
    message: str


@dataclass(frozen=True)
class RunStep:
    """Committed plans and resulting transfers for one game step."""

    defender_plan: ActionPlan
    attacker_plan: ActionPlan
    transfers: tuple[Transfer, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "transfers", tuple(Transfer(*t) for t in self.transfers)
        )


def plan_cost(plan: ActionPlan, catalog: VulnCatalog) -> float:
    """Total spend: each action is one unit at its base-plus-unit price."""
    n = catalog.size
    total = 0.0
    for i, _ in plan.patches:
        if not 0 <= i < n:
            raise ValidationError(f"unknown vulnerability index {i}")
        total += float(catalog.patch_base[i] + catalog.patch_unit[i])
    for i, _ in plan.exploits:
        if not 0 <= i < n:
            raise ValidationError(f"unknown vulnerability index {i}")
        total += float(catalog.exploit_base[i] + catalog.exploit_unit[i])
    return total


def validate_plan(
    plan: ActionPlan,
    state: NetworkState,
    catalog: VulnCatalog,
    budgets: Budgets,
    dk_mode: bool = True,
) -> Violation | None:
    """None when the plan is legal, else the first violated rule.

    Checks, in order: cell indices, role purity (in two-sided duel mode the
    defender only patches and the attacker only exploits), patch ownership,
    exploit reachability, and finally the budget cap.
    """
    n = catalog.size
    nodes = state.node_count
    for i, j in plan.sorted_patches + plan.sorted_exploits:
        if not (0 <= i < n and 0 <= j < nodes):
            return Violation("index", (i, j), f"cell ({i}, {j}) is outside the network")
    if dk_mode:
        if plan.acting_agent == DEFENDER and plan.exploits:
            cell = plan.sorted_exploits[0]
            return Violation("role", cell, "defender plans cannot contain exploits")
        if plan.acting_agent == ATTACKER and plan.patches:
            cell = plan.sorted_patches[0]
            return Violation("role", cell, "attacker plans cannot contain patches")
        if plan.acting_agent not in (DEFENDER, ATTACKER):
            return Violation("role", None, f"unknown duel agent {plan.acting_agent}")
    for i, j in plan.sorted_patches:
        if int(state.gamma[j]) != plan.acting_agent:
            return Violation(
                "ownership", (i, j), f"node {j} is not controlled by agent {plan.acting_agent}"
            )
    for i, j in plan.sorted_exploits:
        if not int(state.reachable[j]):
            return Violation("reachability", (i, j), f"node {j} is not reachable")
    cost = plan_cost(plan, catalog)
    cap = budgets.cap_for(plan.acting_agent)
    if cost > cap:
        return Violation("budget", None, f"plan costs {cost}, cap is {cap}")
    return None


def step(
    state: NetworkState,
    defender_plan: ActionPlan,
    attacker_plan: ActionPlan,
    catalog: VulnCatalog,
    budgets: Budgets,
) -> tuple[NetworkState, list[Transfer]]:
    """Apply one simultaneous step: patches first, then exploits.

    An exploit succeeds only if its cell is still exploitable after this
    step's patches landed; success hands the node to the attacker starting
    next step.  Invalid plans raise before anything is applied, so the step
    is atomic and the input state (frozen) is never modified.
    """
    if catalog.size != state.vuln_count:
        raise ValidationError("catalog and state disagree on the vulnerability count")
    for name, plan in (("defender", defender_plan), ("attacker", attacker_plan)):
        violation = validate_plan(plan, state, catalog, budgets)
        if violation is not None:
            raise ValidationError(f"{name} plan invalid ({violation.rule}): {violation.message}")

    phi = state.phi.copy()
    for i, j in defender_plan.sorted_patches:
        phi[i, j] ^= 1

    gamma = state.gamma.copy()
    attacker = attacker_plan.acting_agent
    transfers: list[Transfer] = []
    for i, j in attacker_plan.sorted_exploits:
        if phi[i, j] == 1 and int(gamma[j]) != attacker:
            transfers.append(
                Transfer(
                    node=j,
                    from_agent=int(gamma[j]),
                    to_agent=attacker,
                    value=float(state.node_values[j]),
                )
            )
            gamma[j] = attacker

    new_state = NetworkState(
        phi=phi,
        gamma=gamma,
        reachable=state.reachable,
        node_values=state.node_values,
        time_step=state.time_step + 1,
    )
    return new_state, transfers


def utility(states, agent: int, node_values, delta: float) -> float:
    """Discounted scorebot payout: owned node values summed per recorded step."""
    if not (0 < delta <= 1):
        raise ValidationError("delta must lie in (0, 1]")
    values = np.asarray(node_values, dtype=float)
    total = 0.0
    for state in states:
        owned = values[np.asarray(state.gamma) == agent].sum()
        total += (delta ** state.time_step) * float(owned)
    return total


@dataclass(frozen=True)
class DuelReduction:
    """A duel over contested cells plus the map back to (vulnerability, node)."""

    duel: DuelInstance
    coords: tuple[tuple[int, int], ...]
    multi_vuln_nodes: tuple[int, ...]

    def __eq__(self, other) -> bool:
        if not isinstance(other, DuelReduction):
            return NotImplemented
        return (
            self.duel == other.duel
            and self.coords == other.coords
            and self.multi_vuln_nodes == other.multi_vuln_nodes
        )

    @property
    def size(self) -> int:
        return len(self.coords)


def reduction_from_presence(
    presence: np.ndarray,
    state: NetworkState,
    catalog: VulnCatalog,
    budgets: Budgets,
    defender: int = DEFENDER,
    attacker: int = ATTACKER,
) -> DuelReduction:
    """Build a duel over the cells of ``presence`` on reachable defender nodes.

    ``presence`` is any (vulnerability x node) 0/1 matrix; passing the live
    exploitability matrix gives the true contested game, passing a scan
    inventory gives the view of a player who cannot see patch status.
    Nodes carrying more than one item are flagged: their value backs every
    one of their items, so summed payoffs over-count what a single flip can
    transfer.
    """
    presence = np.asarray(presence)
    if presence.shape != state.phi.shape:
        raise ValidationError("presence matrix must match the state's shape")
    coords: list[tuple[int, int]] = []
    per_node: dict[int, int] = {}
    for j in range(state.node_count):
        if not int(state.reachable[j]) or int(state.gamma[j]) != defender:
            continue
        for i in range(state.vuln_count):
            if presence[i, j]:
                coords.append((i, j))
                per_node[j] = per_node.get(j, 0) + 1
    rewards = np.array([state.node_values[j] for _, j in coords], dtype=float)
    attacker_weights = np.array(
        [catalog.exploit_base[i] + catalog.exploit_unit[i] for i, _ in coords], dtype=float
    )
    defender_weights = np.array(
        [catalog.patch_base[i] + catalog.patch_unit[i] for i, _ in coords], dtype=float
    )
    duel = DuelInstance(
        attacker_weights=attacker_weights,
        defender_weights=defender_weights,
        rewards=rewards,
        attacker_budget=budgets.cap_for(attacker),
        defender_budget=budgets.cap_for(defender),
    )
    multi = tuple(sorted(j for j, count in per_node.items() if count > 1))
    return DuelReduction(duel=duel, coords=tuple(coords), multi_vuln_nodes=multi)


def reduce_to_duel(
    state: NetworkState,
    catalog: VulnCatalog,
    budgets: Budgets,
    defender: int = DEFENDER,
    attacker: int = ATTACKER,
) -> DuelReduction:
    """Per-step duel over currently exploitable cells on contested nodes."""
    return reduction_from_presence(state.phi, state, catalog, budgets, defender, attacker)


def duel_plans_to_actions(
    reduction: DuelReduction,
    zeta,
    xi,
    defender: int = DEFENDER,
    attacker: int = ATTACKER,
) -> tuple[ActionPlan, ActionPlan]:
    """Translate duel-level selections back into network action plans."""
    zeta = as_plan(zeta, reduction.size)
    xi = as_plan(xi, reduction.size)
    patches = {reduction.coords[k] for k in range(reduction.size) if zeta[k]}
    exploits = {reduction.coords[k] for k in range(reduction.size) if xi[k]}
    return (
        ActionPlan(patches=patches, acting_agent=defender),
        ActionPlan(exploits=exploits, acting_agent=attacker),
    )
