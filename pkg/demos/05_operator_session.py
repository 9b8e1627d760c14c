"""A scripted operator session against the AI opponent.
=======================================================

The same request/response flow the browser console uses, driven in-process:
create a session, inspect the role-filtered state, validate a plan against
the budget, preview a step without committing, then commit it for real.
"""

import json

from akgame import generate, preset
from akgame.gameserver import ServerApp

app = ServerApp(generate(preset("paper", seed=1)))

status, doc = app.dispatch(
    "POST", "/sessions", {"role": "defender", "ai_policy": "best-response"}
)
sid = doc["session_id"]
print(f"created session {sid[:8]}… as defender vs best-response AI ({status})")

_, view = app.dispatch("GET", f"/sessions/{sid}/state", None)
print(f"time step {view['time_step']}, budget {view['budgets']['defender']:g}, "
      f"{len(view['nodes'])} nodes, phi visible for {len(view['phi'])} owned nodes")

# Ask for advice, then try to overspend on purpose.
_, advice = app.dispatch("GET", f"/sessions/{sid}/advice", None)
recommended = advice["plan"]["patches"]
print(f"advice recommends {len(recommended)} patches "
      f"(belief source: {advice['belief_source']})")

everything = [[c, n["node"]] for n in view["nodes"] for c in n["components"]]
_, rejected = app.dispatch("POST", f"/sessions/{sid}/plan", {"actions": {"patches": everything}})
print(f"patching everything: ok={rejected['ok']} violation={rejected.get('violation')} "
      f"(cost {rejected['cost']:g})")

# Preview the recommended plan against the AI, then commit it.
_, preview = app.dispatch(
    "POST", f"/sessions/{sid}/whatif", {"plan": {"patches": recommended}, "opponent": "ai"}
)
print(f"what-if preview: {len(preview['transfers'])} transfers predicted")

app.dispatch("POST", f"/sessions/{sid}/plan", {"actions": {"patches": recommended}})
_, outcome = app.dispatch("POST", f"/sessions/{sid}/step", None)
print(f"committed step {outcome['step']}: {len(outcome['transfers'])} transfers, "
      f"scores {outcome['scores']}")
assert outcome["transfers"] == preview["transfers"], "preview must match the committed step"

# The attacker role never sees exploitability bits.
status, doc = app.dispatch("POST", "/sessions", {"role": "attacker", "ai_policy": "expected-optimal"})
_, attacker_view = app.dispatch("GET", f"/sessions/{doc['session_id']}/state", None)
print("attacker view mentions phi:", "phi" in json.dumps(attacker_view))
