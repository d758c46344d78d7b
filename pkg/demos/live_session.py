"""Track a combat round by round and watch the advice evolve.

A skill 12 hero with 24 stamina and 12 luck faces a skill 15, 22 stamina
opponent.  Each recorded round updates the victory probability and the
luck recommendation; one round is undone to show the replay guarantee.

Run: python3 demos/live_session.py
"""

from ffcombat import CombatantStats, CombatSession
from ffcombat.engine import RoundOutcome

RECOMMENDATION = {
    (True, True): "gamble on either outcome",
    (False, True): "gamble only after a lost round",
    (True, False): "gamble only after a won round",
    (False, False): "hold your luck",
}


def show(session, note):
    state = session.state
    advice = session.advice()
    line = f"  s_h={state.s_h:2d} s_o={state.s_o:2d} l={state.l:2d}"
    if state.ongoing:
        line += f"  v_p={advice.v_p:.6f}"
        line += f"  {RECOMMENDATION[(advice.use_luck_on_win, advice.use_luck_on_loss)]}"
    else:
        line += "  victory!" if state.hero_won else "  defeat"
    print(f"{note:28s}{line}")


session = CombatSession.start(
    hero=CombatantStats(skill=12, stamina=24, luck=12),
    opponent=CombatantStats(skill=15, stamina=22),
)
show(session, "start (White Dragon odds)")

script = [
    ("round 1: win, luck fails", RoundOutcome.WIN, True, False),
    ("round 2: loss, luck holds", RoundOutcome.LOSS, True, True),
    ("round 3: draw", RoundOutcome.DRAW, False, None),
    ("round 4: loss, no luck", RoundOutcome.LOSS, False, None),
    ("round 5: win, luck holds", RoundOutcome.WIN, True, True),
]
for note, outcome, used, success in script:
    session.record_round(outcome, used, success)
    show(session, note)

print()
print("undoing round 5")
session.undo()
show(session, "back to after round 4")

print()
print("what-if from here: probability after each outcome/decision pair")
for outcome in (RoundOutcome.WIN, RoundOutcome.LOSS):
    for use_luck in (False, True):
        v = session.what_if(outcome, use_luck)
        decision = "use luck" if use_luck else "plain"
        print(f"  {outcome.value:4s} + {decision:8s} -> {v:.6f}")

print()
print("replaying the full log reproduces the live state exactly:",
      session.replayed_state() == session.state)
