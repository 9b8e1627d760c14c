"""Seeded scenario generation and canonical JSON round-tripping.

Generation draws everything from one PCG64 stream (the algorithm name is
recorded in the files) in a fixed documented order, so a seed pins a
scenario bit-for-bit.  Scenarios, duels, play traces and run logs all
serialize to sorted-key JSON documents carrying ``schema_version`` and
``kind`` fields; ``load`` dispatches on ``kind`` and round-trips every
entity exactly.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .dueling import DuelInstance
from .errors import SchemaError, SchemaVersionError, ValidationError
from .fplay import TERMINATED_CYCLE, TERMINATED_MAX, FictitiousPlayTrace
from .netgame import (
    ATTACKER,
    DEFENDER,
    ActionPlan,
    Budgets,
    DuelReduction,
    NetworkState,
    RunStep,
    Transfer,
    VulnCatalog,
    step,
)
from .sampling import new_generator, sample_without_replacement

SCHEMA_VERSION = 1
PRNG_NAME = "pcg64"

NODE_VALUE_MODES = ("constant", "hazard_sum")


@dataclass(frozen=True)
class GenerationParams:
    """Knobs for random scenario generation.

    Ranges are inclusive.  When both ends of a range are integers the draw
    is an integer draw (which keeps the per-step duels on the fast exact
    dynamic-programming path); otherwise values are drawn as uniform reals.
    """

    node_count: int
    vuln_count: int
    vulns_per_node: tuple[int, int] = (0, 10)
    hazard_range: tuple[float, float] = (6.0, 100.0)
    patch_cost_range: tuple[float, float] = (10.0, 100.0)
    exploit_cost_range: tuple[float, float] = (100.0, 700.0)
    budget_attacker: float = 800.0
    budget_defender: float = 800.0
    node_value_mode: str = "constant"
    node_value: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "node_count", int(self.node_count))
        object.__setattr__(self, "vuln_count", int(self.vuln_count))
        lo, hi = (int(v) for v in self.vulns_per_node)
        object.__setattr__(self, "vulns_per_node", (lo, hi))
        for name in ("hazard_range", "patch_cost_range", "exploit_cost_range"):
            a, b = (float(v) for v in getattr(self, name))
            object.__setattr__(self, name, (a, b))
        object.__setattr__(self, "budget_attacker", float(self.budget_attacker))
        object.__setattr__(self, "budget_defender", float(self.budget_defender))
        object.__setattr__(self, "node_value", float(self.node_value))
        object.__setattr__(self, "seed", int(self.seed))

        if self.node_count < 1 or self.vuln_count < 1:
            raise ValidationError("need at least one node and one vulnerability")
        if not (0 <= lo <= hi <= self.vuln_count):
            raise ValidationError(
                f"vulns_per_node range ({lo}, {hi}) must satisfy 0 <= lo <= hi <= {self.vuln_count}"
            )
        for name in ("hazard_range", "patch_cost_range", "exploit_cost_range"):
            a, b = getattr(self, name)
            if not (math.isfinite(a) and math.isfinite(b)) or a < 0 or a > b:
                raise ValidationError(f"{name} must be a non-negative (lo, hi) range")
        if self.budget_attacker < 0 or self.budget_defender < 0:
            raise ValidationError("budgets must be non-negative")
        if self.node_value_mode not in NODE_VALUE_MODES:
            raise ValidationError(f"node_value_mode must be one of {NODE_VALUE_MODES}")
        if self.node_value < 0:
            raise ValidationError("node_value must be non-negative")
        if not (0 <= self.seed < 2**64):
            raise ValidationError("seed must fit in 64 bits")


_PRESETS = {
    # Benchmark network: 100 machines, 70 vulnerability types, up to 10
    # vulnerabilities per machine, flat per-step budgets of 800 a side.
    "paper": GenerationParams(
        node_count=100,
        vuln_count=70,
        vulns_per_node=(0, 10),
        hazard_range=(6.0, 100.0),
        patch_cost_range=(10.0, 100.0),
        exploit_cost_range=(100.0, 700.0),
        budget_attacker=800.0,
        budget_defender=800.0,
        node_value_mode="constant",
        node_value=1.0,
        seed=0,
    ),
}


def preset(name: str, seed: int | None = None) -> GenerationParams:
    """A named generation preset, optionally re-seeded."""
    try:
        params = _PRESETS[name]
    except KeyError:
        raise ValidationError(f"unknown preset {name!r}; choose from {sorted(_PRESETS)}") from None
    if seed is not None:
        params = replace(params, seed=seed)
    return params


def preset_names() -> tuple[str, ...]:
    return tuple(sorted(_PRESETS))


@dataclass
class Scenario:
    """A generated or hand-built game setup."""

    params: GenerationParams | None
    catalog: VulnCatalog
    state: NetworkState
    budgets: Budgets

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.params == other.params
            and self.catalog == other.catalog
            and self.state == other.state
            and self.budgets == other.budgets
        )


def _draw_range(rng, bounds: tuple[float, float], size: int) -> np.ndarray:
    lo, hi = bounds
    if lo == int(lo) and hi == int(hi):
        return rng.integers(int(lo), int(hi) + 1, size=size).astype(float)
    return lo + (hi - lo) * rng.random(size)


def generate(params: GenerationParams) -> Scenario:
    """Draw a scenario from the seeded stream.

    Draw order (pinned): hazards, patch costs, exploit costs, per-node
    vulnerability counts, then each node's vulnerability set.  Generated
    costs land entirely in the base component (flat per-action pricing).
    All nodes start reachable and defender-controlled.
    """
    rng = new_generator(params.seed)
    n = params.vuln_count
    m = params.node_count
    hazards = _draw_range(rng, params.hazard_range, n)
    patch_costs = _draw_range(rng, params.patch_cost_range, n)
    exploit_costs = _draw_range(rng, params.exploit_cost_range, n)
    lo, hi = params.vulns_per_node
    counts = rng.integers(lo, hi + 1, size=m)
    phi = np.zeros((n, m), dtype=np.int8)
    for j in range(m):
        ids = sample_without_replacement(rng, n, int(counts[j]))
        phi[ids, j] = 1

    catalog = VulnCatalog(
        hazard=hazards,
        patch_base=patch_costs,
        patch_unit=np.zeros(n),
        exploit_base=exploit_costs,
        exploit_unit=np.zeros(n),
    )
    if params.node_value_mode == "constant":
        node_values = np.full(m, params.node_value, dtype=float)
    else:
        node_values = (catalog.hazard @ phi).astype(float)
    state = NetworkState(
        phi=phi,
        gamma=np.full(m, DEFENDER, dtype=np.int64),
        reachable=np.ones(m, dtype=np.int8),
        node_values=node_values,
        time_step=0,
    )
    budgets = Budgets(
        caps={DEFENDER: params.budget_defender, ATTACKER: params.budget_attacker},
        delta=1.0,
    )
    return Scenario(params=params, catalog=catalog, state=state, budgets=budgets)


@dataclass
class RunLog:
    """A replayable record of a multi-step game."""

    scenario: Scenario
    config: dict | None
    steps: list[RunStep]
    final_state: NetworkState

    def __eq__(self, other) -> bool:
        if not isinstance(other, RunLog):
            return NotImplemented
        return (
            self.scenario == other.scenario
            and self.config == other.config
            and list(self.steps) == list(other.steps)
            and self.final_state == other.final_state
        )


def replay(run: RunLog) -> NetworkState:
    """Re-apply every logged step from the initial state."""
    state = run.scenario.state
    for logged in run.steps:
        state, _ = step(
            state, logged.defender_plan, logged.attacker_plan, run.scenario.catalog, run.scenario.budgets
        )
    return state


# --- document builders -----------------------------------------------------


def _params_doc(params: GenerationParams) -> dict:
    return {
        "node_count": params.node_count,
        "vuln_count": params.vuln_count,
        "vulns_per_node": list(params.vulns_per_node),
        "hazard_range": list(params.hazard_range),
        "patch_cost_range": list(params.patch_cost_range),
        "exploit_cost_range": list(params.exploit_cost_range),
        "budget_attacker": params.budget_attacker,
        "budget_defender": params.budget_defender,
        "node_value_mode": params.node_value_mode,
        "node_value": params.node_value,
        "seed": params.seed,
    }


def _params_from_doc(doc: dict) -> GenerationParams:
    try:
        return GenerationParams(
            node_count=doc["node_count"],
            vuln_count=doc["vuln_count"],
            vulns_per_node=tuple(doc.get("vulns_per_node", (0, 10))),
            hazard_range=tuple(doc.get("hazard_range", (6.0, 100.0))),
            patch_cost_range=tuple(doc.get("patch_cost_range", (10.0, 100.0))),
            exploit_cost_range=tuple(doc.get("exploit_cost_range", (100.0, 700.0))),
            budget_attacker=doc.get("budget_attacker", 800.0),
            budget_defender=doc.get("budget_defender", 800.0),
            node_value_mode=doc.get("node_value_mode", "constant"),
            node_value=doc.get("node_value", 1.0),
            seed=doc.get("seed", 0),
        )
    except KeyError as exc:
        raise SchemaError(f"generation params missing field {exc}") from None


def _state_doc(state: NetworkState) -> dict:
    return {
        "phi": state.phi.astype(int).tolist(),
        "gamma": state.gamma.astype(int).tolist(),
        "reachable": state.reachable.astype(int).tolist(),
        "node_values": [float(v) for v in state.node_values],
        "time_step": state.time_step,
    }


def _state_from_doc(doc: dict) -> NetworkState:
    return NetworkState(
        phi=np.asarray(doc["phi"], dtype=np.int8),
        gamma=np.asarray(doc["gamma"], dtype=np.int64),
        reachable=np.asarray(doc["reachable"], dtype=np.int8),
        node_values=np.asarray(doc["node_values"], dtype=float),
        time_step=int(doc["time_step"]),
    )


def _scenario_body(scenario: Scenario) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "scenario",
        "prng": PRNG_NAME,
        "params": _params_doc(scenario.params) if scenario.params is not None else None,
        "catalog": {
            "hazard": [float(v) for v in scenario.catalog.hazard],
            "patch_base": [float(v) for v in scenario.catalog.patch_base],
            "patch_unit": [float(v) for v in scenario.catalog.patch_unit],
            "exploit_base": [float(v) for v in scenario.catalog.exploit_base],
            "exploit_unit": [float(v) for v in scenario.catalog.exploit_unit],
        },
        "state": _state_doc(scenario.state),
        "budgets": {
            "caps": {str(agent): float(cap) for agent, cap in sorted(scenario.budgets.caps.items())},
            "delta": scenario.budgets.delta,
        },
    }


def _scenario_from_doc(doc: dict) -> Scenario:
    try:
        catalog_doc = doc["catalog"]
        catalog = VulnCatalog(
            hazard=np.asarray(catalog_doc["hazard"], dtype=float),
            patch_base=np.asarray(catalog_doc["patch_base"], dtype=float),
            patch_unit=np.asarray(catalog_doc["patch_unit"], dtype=float),
            exploit_base=np.asarray(catalog_doc["exploit_base"], dtype=float),
            exploit_unit=np.asarray(catalog_doc["exploit_unit"], dtype=float),
        )
        state = _state_from_doc(doc["state"])
        budgets_doc = doc["budgets"]
        budgets = Budgets(
            caps={int(agent): float(cap) for agent, cap in budgets_doc["caps"].items()},
            delta=float(budgets_doc.get("delta", 1.0)),
        )
        params_doc = doc.get("params")
        params = _params_from_doc(params_doc) if params_doc is not None else None
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"scenario document malformed: {exc!r}") from None
    return Scenario(params=params, catalog=catalog, state=state, budgets=budgets)


def _duel_body(reduction: DuelReduction) -> dict:
    duel = reduction.duel
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "duel",
        "attacker_weights": [float(v) for v in duel.attacker_weights],
        "defender_weights": [float(v) for v in duel.defender_weights],
        "rewards": [float(v) for v in duel.rewards],
        "attacker_budget": duel.attacker_budget,
        "defender_budget": duel.defender_budget,
        "coords": [list(cell) for cell in reduction.coords],
        "multi_vuln_nodes": list(reduction.multi_vuln_nodes),
    }


def _duel_from_doc(doc: dict) -> DuelReduction:
    try:
        duel = DuelInstance(
            attacker_weights=np.asarray(doc["attacker_weights"], dtype=float),
            defender_weights=np.asarray(doc["defender_weights"], dtype=float),
            rewards=np.asarray(doc["rewards"], dtype=float),
            attacker_budget=float(doc["attacker_budget"]),
            defender_budget=float(doc["defender_budget"]),
        )
        coords = tuple((int(i), int(j)) for i, j in doc.get("coords") or [])
        multi = tuple(int(j) for j in doc.get("multi_vuln_nodes") or [])
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"duel document malformed: {exc!r}") from None
    return DuelReduction(duel=duel, coords=coords, multi_vuln_nodes=multi)


def wrap_duel(duel: DuelInstance) -> DuelReduction:
    """Give a bare duel identity coordinates so it can be saved."""
    coords = tuple((k, k) for k in range(duel.size))
    return DuelReduction(duel=duel, coords=coords, multi_vuln_nodes=())


def _trace_body(trace: FictitiousPlayTrace, duel: DuelInstance | None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "trace",
        "duel": None
        if duel is None
        else {
            "attacker_weights": [float(v) for v in duel.attacker_weights],
            "defender_weights": [float(v) for v in duel.defender_weights],
            "rewards": [float(v) for v in duel.rewards],
            "attacker_budget": duel.attacker_budget,
            "defender_budget": duel.defender_budget,
        },
        "steps": [
            [[int(b) for b in zeta], [int(b) for b in xi]] for zeta, xi in trace.steps
        ],
        "prefix_length": trace.prefix_length,
        "cycle_length": trace.cycle_length,
        "terminated_by": trace.terminated_by,
    }


def _trace_from_doc(doc: dict) -> tuple[FictitiousPlayTrace, DuelInstance | None]:
    try:
        steps = [
            (np.asarray(zeta, dtype=np.int64), np.asarray(xi, dtype=np.int64))
            for zeta, xi in doc["steps"]
        ]
        terminated = doc["terminated_by"]
        if terminated not in (TERMINATED_CYCLE, TERMINATED_MAX):
            raise SchemaError(f"unknown terminated_by value {terminated!r}")
        prefix = doc.get("prefix_length")
        cycle = doc.get("cycle_length")
        trace = FictitiousPlayTrace(
            steps=steps,
            prefix_length=None if prefix is None else int(prefix),
            cycle_length=None if cycle is None else int(cycle),
            terminated_by=terminated,
        )
        duel_doc = doc.get("duel")
        duel = None
        if duel_doc is not None:
            duel = DuelInstance(
                attacker_weights=np.asarray(duel_doc["attacker_weights"], dtype=float),
                defender_weights=np.asarray(duel_doc["defender_weights"], dtype=float),
                rewards=np.asarray(duel_doc["rewards"], dtype=float),
                attacker_budget=float(duel_doc["attacker_budget"]),
                defender_budget=float(duel_doc["defender_budget"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"trace document malformed: {exc!r}") from None
    return trace, duel


def _plan_doc(plan: ActionPlan) -> dict:
    return {
        "acting_agent": plan.acting_agent,
        "patches": [list(cell) for cell in plan.sorted_patches],
        "exploits": [list(cell) for cell in plan.sorted_exploits],
    }


def _plan_from_doc(doc: dict) -> ActionPlan:
    return ActionPlan(
        patches={(int(i), int(j)) for i, j in doc.get("patches", [])},
        exploits={(int(i), int(j)) for i, j in doc.get("exploits", [])},
        acting_agent=int(doc.get("acting_agent", DEFENDER)),
    )


def _run_body(run: RunLog) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "run",
        "scenario": _scenario_body(run.scenario),
        "config": run.config,
        "steps": [
            {
                "defender_plan": _plan_doc(logged.defender_plan),
                "attacker_plan": _plan_doc(logged.attacker_plan),
                "transfers": [
                    [t.node, t.from_agent, t.to_agent, t.value] for t in logged.transfers
                ],
            }
            for logged in run.steps
        ],
        "final_state": _state_doc(run.final_state),
    }


def _run_from_doc(doc: dict) -> RunLog:
    try:
        scenario = _scenario_from_doc(doc["scenario"])
        steps = [
            RunStep(
                defender_plan=_plan_from_doc(entry["defender_plan"]),
                attacker_plan=_plan_from_doc(entry["attacker_plan"]),
                transfers=tuple(
                    Transfer(int(n), int(f), int(t), float(v))
                    for n, f, t, v in entry.get("transfers", [])
                ),
            )
            for entry in doc["steps"]
        ]
        final_state = _state_from_doc(doc["final_state"])
        config = doc.get("config")
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"run document malformed: {exc!r}") from None
    return RunLog(scenario=scenario, config=config, steps=steps, final_state=final_state)


# --- save/load --------------------------------------------------------------


def canonical_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, allow_nan=False) + "\n"


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(canonical_json(_scenario_body(scenario)))


def save_duel(reduction: DuelReduction | DuelInstance, path) -> None:
    if isinstance(reduction, DuelInstance):
        reduction = wrap_duel(reduction)
    Path(path).write_text(canonical_json(_duel_body(reduction)))


def save_trace(trace: FictitiousPlayTrace, path, duel: DuelInstance | None = None) -> None:
    Path(path).write_text(canonical_json(_trace_body(trace, duel)))


def save_run(run: RunLog, path) -> None:
    Path(path).write_text(canonical_json(_run_body(run)))


def save(entity, path) -> None:
    """Write any supported entity; the file records its own kind."""
    if isinstance(entity, Scenario):
        save_scenario(entity, path)
    elif isinstance(entity, (DuelReduction, DuelInstance)):
        save_duel(entity, path)
    elif isinstance(entity, FictitiousPlayTrace):
        save_trace(entity, path)
    elif isinstance(entity, RunLog):
        save_run(entity, path)
    else:
        raise ValidationError(f"cannot serialize {type(entity).__name__}")


def parse_document(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(
            f"malformed JSON at byte offset {exc.pos}: {exc.msg}"
        ) from None
    if not isinstance(doc, dict):
        raise SchemaError("top-level JSON value must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"unsupported schema_version {version!r}; this build reads version {SCHEMA_VERSION}"
        )
    return doc


def load(path):
    """Read any supported entity, dispatching on the document's kind.

    Returns a ``Scenario``, ``DuelReduction``, ``(trace, duel-or-None)``
    pair, or ``RunLog``.
    """
    doc = parse_document(Path(path).read_text())
    kind = doc.get("kind")
    if kind == "scenario":
        return _scenario_from_doc(doc)
    if kind == "duel":
        return _duel_from_doc(doc)
    if kind == "trace":
        return _trace_from_doc(doc)
    if kind == "run":
        return _run_from_doc(doc)
    raise SchemaError(f"unknown document kind {kind!r}")


def load_scenario(path) -> Scenario:
    entity = load(path)
    if not isinstance(entity, Scenario):
        raise SchemaError(f"{path} does not hold a scenario")
    return entity


def load_duel(path) -> DuelReduction:
    entity = load(path)
    if not isinstance(entity, DuelReduction):
        raise SchemaError(f"{path} does not hold a duel")
    return entity


def load_trace(path) -> tuple[FictitiousPlayTrace, DuelInstance | None]:
    entity = load(path)
    if not (isinstance(entity, tuple) and isinstance(entity[0], FictitiousPlayTrace)):
        raise SchemaError(f"{path} does not hold a trace")
    return entity


def load_run(path) -> RunLog:
    entity = load(path)
    if not isinstance(entity, RunLog):
        raise SchemaError(f"{path} does not hold a run log")
    return entity
