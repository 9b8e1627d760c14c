"""HTTP/JSON service hosting live game sessions against an AI opponent.

One human plays attacker or defender per session; the AI side plans from
the human's committed history only, never from the pending plan, so both
sides effectively commit simultaneously.  Responses are filtered by role:
the attacker can scan components, costs, ownership and reachability but
never sees exploitability/patch bits (``phi``), which appear only in the
defender's view of their own nodes.

Endpoints (JSON in/out, errors as ``{code, message, violation?}``):

    GET  /health
    POST /sessions                {role, ai_policy, seed?, scenario?}
    GET  /sessions/{id}/state
    POST /sessions/{id}/plan      {actions: {patches?, exploits?}}
    POST /sessions/{id}/step
    POST /sessions/{id}/whatif    {plan: {...}, opponent: "ai" | {...}}
    GET  /sessions/{id}/advice
    GET  /sessions/{id}/run
"""

from __future__ import annotations

import json
import logging
import re
import threading
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .errors import SchemaError, ValidationError
from .netgame import (
    ATTACKER,
    DEFENDER,
    ActionPlan,
    NetworkState,
    RunStep,
    plan_cost,
    reduce_to_duel,
    reduction_from_presence,
    step,
    utility,
    validate_plan,
)
from .policies import AI_POLICIES, belief_vector, policy_plan
from .scenario import RunLog, Scenario, _run_body, _scenario_from_doc

log = logging.getLogger("akgame.server")

ROLES = ("defender", "attacker")


@dataclass
class Session:
    """One live game: scenario copy, current state, pending plan, run log."""

    session_id: str
    scenario: Scenario
    human_role: str
    ai_policy: str
    seed: int
    state: NetworkState = field(init=False)
    inventory: np.ndarray = field(init=False)
    pending: ActionPlan | None = None
    human_history: list[frozenset] = field(default_factory=list)
    ai_history: list[frozenset] = field(default_factory=list)
    steps: list[RunStep] = field(default_factory=list)
    states: list[NetworkState] = field(default_factory=list)
    scores: dict[int, float] = field(default_factory=lambda: {DEFENDER: 0.0, ATTACKER: 0.0})
    lock: threading.Lock = field(default_factory=threading.Lock)

    def __post_init__(self) -> None:
        self.state = self.scenario.state
        # A scan shows which components sit on each node but not their patch
        # status; the initial exploitability matrix is that inventory.
        self.inventory = np.asarray(self.scenario.state.phi).copy()
        self.states = [self.state]

    @property
    def human_agent(self) -> int:
        return DEFENDER if self.human_role == "defender" else ATTACKER

    @property
    def ai_agent(self) -> int:
        return ATTACKER if self.human_role == "defender" else DEFENDER


class ApiError(Exception):
    def __init__(self, status: int, message: str, violation: str | None = None):
        super().__init__(message)
        self.status = status
        self.message = message
        self.violation = violation

    def body(self) -> dict:
        doc = {"code": self.status, "message": self.message}
        if self.violation:
            doc["violation"] = self.violation
        return doc


class ServerApp:
    """Routing and session logic, separated from the socket layer."""

    def __init__(self, scenario: Scenario):
        self.default_scenario = scenario
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    # -- session plumbing --

    def _session(self, session_id: str) -> Session:
        with self._lock:
            session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, f"unknown session {session_id}")
        return session

    def _copy_scenario(self, scenario: Scenario) -> Scenario:
        return Scenario(
            params=scenario.params,
            catalog=scenario.catalog,
            state=scenario.state,
            budgets=scenario.budgets,
        )

    # -- handlers --

    def create_session(self, body: dict) -> tuple[int, dict]:
        if not isinstance(body, dict):
            raise ApiError(400, "request body must be a JSON object")
        role = body.get("role")
        if role not in ROLES:
            raise ApiError(400, f"role must be one of {ROLES}")
        ai_policy = body.get("ai_policy", "best-response")
        if ai_policy not in AI_POLICIES:
            raise ApiError(422, f"unknown ai_policy {ai_policy!r}; choose from {AI_POLICIES}")
        seed = body.get("seed", 0)
        if not isinstance(seed, int) or seed < 0:
            raise ApiError(400, "seed must be a non-negative integer")
        scenario_doc = body.get("scenario")
        if scenario_doc is not None:
            try:
                scenario = _scenario_from_doc(scenario_doc)
            except SchemaError as exc:
                raise ApiError(400, f"bad inline scenario: {exc}") from None
        else:
            scenario = self._copy_scenario(self.default_scenario)
        reduction = reduce_to_duel(scenario.state, scenario.catalog, scenario.budgets)
        if reduction.size == 0:
            raise ApiError(422, "degenerate scenario: no contested cells to play for")
        session = Session(
            session_id=uuid.uuid4().hex,
            scenario=scenario,
            human_role=role,
            ai_policy=ai_policy,
            seed=seed,
        )
        with self._lock:
            self.sessions[session.session_id] = session
        return 201, {"session_id": session.session_id, "role": role, "ai_policy": ai_policy}

    def get_state(self, session_id: str) -> tuple[int, dict]:
        session = self._session(session_id)
        with session.lock:
            return 200, self._visible_state(session)

    def post_plan(self, session_id: str, body: dict) -> tuple[int, dict]:
        session = self._session(session_id)
        plan = self._parse_plan(session, body.get("actions"))
        with session.lock:
            cost = plan_cost(plan, session.scenario.catalog)
            violation = validate_plan(
                plan, session.state, session.scenario.catalog, session.scenario.budgets
            )
            cap = session.scenario.budgets.cap_for(session.human_agent)
            if violation is not None:
                return 200, {
                    "ok": False,
                    "violation": violation.rule,
                    "coords": list(violation.coords) if violation.coords else None,
                    "message": violation.message,
                    "cost": cost,
                    "remaining": cap - cost,
                }
            session.pending = plan
            return 200, {"ok": True, "cost": cost, "remaining": cap - cost}

    def post_step(self, session_id: str) -> tuple[int, dict]:
        session = self._session(session_id)
        with session.lock:
            if session.pending is None:
                raise ApiError(409, "no pending plan to commit this step")
            ai_plan = self._ai_plan(session)
            human_plan = session.pending
            if session.human_role == "defender":
                defender_plan, attacker_plan = human_plan, ai_plan
            else:
                defender_plan, attacker_plan = ai_plan, human_plan
            new_state, transfers = step(
                session.state,
                defender_plan,
                attacker_plan,
                session.scenario.catalog,
                session.scenario.budgets,
            )
            for t in transfers:
                session.scores[t.to_agent] += t.value
                session.scores[t.from_agent] -= t.value
            session.steps.append(
                RunStep(
                    defender_plan=defender_plan,
                    attacker_plan=attacker_plan,
                    transfers=tuple(transfers),
                )
            )
            session.human_history.append(
                frozenset(human_plan.patches if session.human_role == "defender" else human_plan.exploits)
            )
            session.ai_history.append(
                frozenset(ai_plan.exploits if session.human_role == "defender" else ai_plan.patches)
            )
            session.state = new_state
            session.states.append(new_state)
            session.pending = None
            doc = {
                "step": new_state.time_step,
                "transfers": self._transfer_docs(transfers),
                "scores": self._score_doc(session),
                "utilities": self._utility_doc(session),
                "state": self._visible_state(session),
            }
            if session.human_role == "defender":
                # The defender observes attempted exploits against its own
                # network; the attacker must not observe patch actions.
                doc["ai_plan"] = {"exploits": [list(c) for c in ai_plan.sorted_exploits]}
            return 200, doc

    def post_whatif(self, session_id: str, body: dict) -> tuple[int, dict]:
        session = self._session(session_id)
        candidate = self._parse_plan(session, body.get("plan"))
        opponent_spec = body.get("opponent", "ai")
        with session.lock:
            violation = validate_plan(
                candidate, session.state, session.scenario.catalog, session.scenario.budgets
            )
            if violation is not None:
                return 200, {
                    "ok": False,
                    "non_binding": True,
                    "violation": violation.rule,
                    "message": violation.message,
                }
            if opponent_spec == "ai":
                opponent = self._ai_plan(session)
            else:
                opponent = self._parse_plan(session, opponent_spec, agent=session.ai_agent)
                opp_violation = validate_plan(
                    opponent, session.state, session.scenario.catalog, session.scenario.budgets
                )
                if opp_violation is not None:
                    return 200, {
                        "ok": False,
                        "non_binding": True,
                        "violation": opp_violation.rule,
                        "message": f"assumed opponent plan: {opp_violation.message}",
                    }
            if session.human_role == "defender":
                defender_plan, attacker_plan = candidate, opponent
            else:
                defender_plan, attacker_plan = opponent, candidate
            # step() is functional over a frozen state, so the session is
            # untouched by construction.
            preview_state, transfers = step(
                session.state,
                defender_plan,
                attacker_plan,
                session.scenario.catalog,
                session.scenario.budgets,
            )
            delta = {DEFENDER: 0.0, ATTACKER: 0.0}
            for t in transfers:
                delta[t.to_agent] += t.value
                delta[t.from_agent] -= t.value
            return 200, {
                "ok": True,
                "non_binding": True,
                "transfers": self._transfer_docs(transfers),
                "score_delta": {
                    "defender": delta[DEFENDER],
                    "attacker": delta[ATTACKER],
                },
                "time_step_preview": preview_state.time_step,
            }

    def get_advice(self, session_id: str) -> tuple[int, dict]:
        session = self._session(session_id)
        with session.lock:
            reduction = self._reduction_for(session, session.human_agent, session.human_role)
            if session.human_role == "defender":
                belief = belief_vector(reduction.coords, session.ai_history, default=1.0)
                selection = policy_plan(
                    "expected-optimal", DEFENDER, reduction, session.ai_history
                )
                expected = belief * reduction.duel.rewards
                weights = reduction.duel.defender_weights
                plan_doc = {
                    "patches": [
                        list(reduction.coords[k]) for k in range(reduction.size) if selection[k]
                    ]
                }
            else:
                belief = belief_vector(reduction.coords, session.ai_history, default=0.0)
                selection = policy_plan(
                    "expected-optimal", ATTACKER, reduction, session.ai_history
                )
                expected = (1 - belief) * reduction.duel.rewards
                weights = reduction.duel.attacker_weights
                plan_doc = {
                    "exploits": [
                        list(reduction.coords[k]) for k in range(reduction.size) if selection[k]
                    ]
                }
            rationale = [
                {
                    "vuln": int(reduction.coords[k][0]),
                    "node": int(reduction.coords[k][1]),
                    "opponent_frequency": float(belief[k]),
                    "expected_value": float(expected[k]),
                    "weight": float(weights[k]),
                    "selected": bool(selection[k]),
                }
                for k in range(reduction.size)
            ]
            return 200, {
                "plan": plan_doc,
                "rationale": rationale,
                "belief_source": "history" if session.ai_history else "default",
            }

    def get_run(self, session_id: str) -> tuple[int, dict]:
        session = self._session(session_id)
        with session.lock:
            run = RunLog(
                scenario=session.scenario,
                config={
                    "human_role": session.human_role,
                    "ai_policy": session.ai_policy,
                    "seed": session.seed,
                },
                steps=list(session.steps),
                final_state=session.state,
            )
            return 200, _run_body(run)

    # -- internals --

    def _reduction_for(self, session: Session, agent: int, role: str):
        scenario = session.scenario
        if role == "defender":
            # Defenders see their own exploitability bits.
            return reduce_to_duel(session.state, scenario.catalog, scenario.budgets)
        # Attackers plan from the scan inventory: components, not patch bits.
        return reduction_from_presence(
            session.inventory, session.state, scenario.catalog, scenario.budgets
        )

    def _ai_plan(self, session: Session) -> ActionPlan:
        role = "attacker" if session.ai_agent == ATTACKER else "defender"
        if session.ai_policy == "omniscient-debug":
            reduction = reduce_to_duel(
                session.state, session.scenario.catalog, session.scenario.budgets
            )
        else:
            reduction = self._reduction_for(session, session.ai_agent, role)
        rng = None
        if session.ai_policy == "random":
            # Derived from (session seed, committed step count) only, so the
            # plan stays a pure function of committed history.
            seq = np.random.SeedSequence(entropy=(session.seed, len(session.steps)))
            rng = np.random.Generator(np.random.PCG64(seq))
        selection = policy_plan(
            session.ai_policy, session.ai_agent, reduction, session.human_history, rng=rng
        )
        cells = {reduction.coords[k] for k in range(reduction.size) if selection[k]}
        if session.ai_agent == DEFENDER:
            return ActionPlan(patches=cells, acting_agent=DEFENDER)
        return ActionPlan(exploits=cells, acting_agent=ATTACKER)

    def _parse_plan(self, session: Session, doc, agent: int | None = None) -> ActionPlan:
        if doc is None or not isinstance(doc, dict):
            raise ApiError(400, "plan body must be an object with patches/exploits lists")
        agent = session.human_agent if agent is None else agent
        try:
            patches = {(int(i), int(j)) for i, j in doc.get("patches", [])}
            exploits = {(int(i), int(j)) for i, j in doc.get("exploits", [])}
            return ActionPlan(patches=patches, exploits=exploits, acting_agent=agent)
        except (TypeError, ValueError, ValidationError) as exc:
            raise ApiError(400, f"bad plan: {exc}") from None

    def _transfer_docs(self, transfers) -> list[dict]:
        return [
            {
                "node": t.node,
                "from_agent": t.from_agent,
                "to_agent": t.to_agent,
                "value": t.value,
            }
            for t in transfers
        ]

    def _score_doc(self, session: Session) -> dict:
        return {
            "defender": session.scores[DEFENDER],
            "attacker": session.scores[ATTACKER],
        }

    def _utility_doc(self, session: Session) -> dict:
        values = session.scenario.state.node_values
        delta = session.scenario.budgets.delta
        return {
            "defender": utility(session.states, DEFENDER, values, delta),
            "attacker": utility(session.states, ATTACKER, values, delta),
        }

    def _visible_state(self, session: Session) -> dict:
        scenario = session.scenario
        state = session.state
        catalog = scenario.catalog
        doc = {
            "session_id": session.session_id,
            "role": session.human_role,
            "ai_policy": session.ai_policy,
            "time_step": state.time_step,
            "budgets": {
                "defender": scenario.budgets.cap_for(DEFENDER),
                "attacker": scenario.budgets.cap_for(ATTACKER),
                "delta": scenario.budgets.delta,
            },
            "catalog": {
                "hazard": [float(v) for v in catalog.hazard],
                "patch_cost": [float(v) for v in catalog.patch_costs],
                "exploit_cost": [float(v) for v in catalog.exploit_costs],
            },
            "nodes": [
                {
                    "node": j,
                    "value": float(state.node_values[j]),
                    "reachable": int(state.reachable[j]),
                    "owner": "defender" if int(state.gamma[j]) == DEFENDER else "attacker",
                    "components": [
                        int(i)
                        for i in range(state.vuln_count)
                        if session.inventory[i, j]
                    ],
                }
                for j in range(state.node_count)
            ],
            "scores": self._score_doc(session),
            "utilities": self._utility_doc(session),
            "pending": session.pending is not None,
        }
        if session.human_role == "defender":
            doc["phi"] = {
                str(j): [int(b) for b in state.phi[:, j]]
                for j in range(state.node_count)
                if int(state.gamma[j]) == session.human_agent
            }
        return doc

    # -- dispatch --

    _SESSION_ROUTE = re.compile(r"^/sessions/([0-9a-f]+)/(state|plan|step|whatif|advice|run)$")

    def dispatch(self, method: str, path: str, body: dict | None) -> tuple[int, dict]:
        try:
            if method == "GET" and path == "/health":
                return 200, {"status": "ok", "sessions": len(self.sessions)}
            if method == "POST" and path == "/sessions":
                return self.create_session(body or {})
            match = self._SESSION_ROUTE.match(path)
            if match:
                session_id, action = match.groups()
                if method == "GET" and action == "state":
                    return self.get_state(session_id)
                if method == "POST" and action == "plan":
                    return self.post_plan(session_id, body or {})
                if method == "POST" and action == "step":
                    return self.post_step(session_id)
                if method == "POST" and action == "whatif":
                    return self.post_whatif(session_id, body or {})
                if method == "GET" and action == "advice":
                    return self.get_advice(session_id)
                if method == "GET" and action == "run":
                    return self.get_run(session_id)
            raise ApiError(404, f"no route for {method} {path}")
        except ApiError as exc:
            return exc.status, exc.body()
        except ValidationError as exc:
            return 400, {"code": 400, "message": str(exc)}


class _Handler(BaseHTTPRequestHandler):
    server_version = "akgame/0.1"

    def log_message(self, fmt, *args):  # route through logging, not stderr
        log.debug("%s %s", self.address_string(), fmt % args)

    def _body(self) -> dict | None:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return None
        raw = self.rfile.read(length)
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, f"request body is not valid JSON: {exc.msg}") from None

    def _respond(self, status: int, doc: dict) -> None:
        payload = json.dumps(doc).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _handle(self, method: str) -> None:
        try:
            body = self._body()
        except ApiError as exc:
            self._respond(exc.status, exc.body())
            return
        status, doc = self.server.app.dispatch(method, self.path, body)  # type: ignore[attr-defined]
        self._respond(status, doc)

    def do_GET(self) -> None:
        self._handle("GET")

    def do_POST(self) -> None:
        self._handle("POST")


class GameServer(ThreadingHTTPServer):
    """Threaded HTTP server bound to a scenario; port 0 picks a free port."""

    daemon_threads = True

    def __init__(self, scenario: Scenario, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.app = ServerApp(scenario)
