"""Drive the HTTP advisor end to end without leaving the process.

Uses the in-process test client so no port is needed; `ff-advisor serve`
exposes exactly the same app over a socket.  Demonstrates creating a
session, recording rounds, querying what-ifs, undoing, and exporting a
replayable log.

Run: python3 demos/http_advisor.py
"""

import json

from fastapi.testclient import TestClient

from ffcombat.service import create_app, replay_log
from ffcombat.solver import TableStore

store = TableStore()
client = TestClient(create_app(store))

print("service:", client.get("/").json())

created = client.post(
    "/sessions",
    json={
        "hero": {"skill": 12, "stamina": 24, "luck": 12},
        "opponent": {"skill": 15, "stamina": 22},
    },
).json()
sid = created["session_id"]
print(f"created session {sid}")
print("  initial v_p:", created["advice"]["v_p"])
print("  use luck on win:", created["advice"]["use_luck_on_win"],
      " on loss:", created["advice"]["use_luck_on_loss"])

for body in [
    {"outcome": "win", "luck_used": True, "luck_test_success": True},
    {"outcome": "loss", "luck_used": True, "luck_test_success": False},
    {"outcome": "win", "luck_used": False},
]:
    payload = client.post(f"/sessions/{sid}/rounds", json=body).json()
    state = payload["state"]
    print(
        f"after {body['outcome']:4s}: s_h={state['s_h']} s_o={state['s_o']} "
        f"l={state['l']}  v_p={payload['advice']['v_p']:.6f}"
    )

print()
print("what-if grid from the current state")
for outcome in ("win", "loss"):
    for flag in ("false", "true"):
        branch = client.get(
            f"/sessions/{sid}/what-if?outcome={outcome}&use_luck={flag}"
        ).json()["what_if"]
        print(f"  {outcome:4s} use_luck={flag:5s} -> {branch['v_p']:.6f}")

print()
print("illegal moves are rejected, not applied:")
bad = client.post(
    f"/sessions/{sid}/rounds",
    json={"outcome": "draw", "luck_used": True, "luck_test_success": True},
)
print(f"  luck on a draw -> {bad.status_code}: {bad.json()['detail']}")

client.post(f"/sessions/{sid}/undo")
print()
log = client.get(f"/sessions/{sid}/log").json()
print("after undo the log holds", len(log["rounds"]), "rounds")
print("exported log:")
print(json.dumps(log["rounds"], indent=2))
rebuilt = replay_log(log, store)
print(
    "replaying it lands on the same state:",
    (rebuilt.state.s_h, rebuilt.state.s_o, rebuilt.state.l)
    == (log["state"]["s_h"], log["state"]["s_o"], log["state"]["l"]),
)
