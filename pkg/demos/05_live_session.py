"""The same protocol, suspended between questions: this is what the HTTP
session service does with human participants.

Run:  python3 demos/05_live_session.py
"""

from fractions import Fraction as F

from faircake import Answer, Stepper, dc_secret_program, pieces_of, UNIT
from faircake.allocation import assign_program

# Two guests. The protocol suspends on one question at a time; nothing
# happens until the addressed guest responds.
stepper = Stepper(dc_secret_program(UNIT, (1, 2)))

print("partition phase:")
while not stepper.finished:
    query = stepper.outstanding
    print(f"  -> guest {query.agent}: mark the point where [{query.piece.lo}, "
          f"{query.piece.hi}] splits at {query.fraction} of its value to you")
    # Our "humans" here both happen to value the cake uniformly.
    value = query.piece.lo + query.fraction * (query.piece.hi - query.piece.lo)
    print(f"  <- guest {query.agent} answers {value}")
    stepper.step(Answer(query, value))

tree = stepper.result
pieces = pieces_of(tree)
print("\npieces:", [f"[{p.lo}, {p.hi}]" for p in pieces])

# The never-queried participant picks piece 2; resolving the rest may ask
# a few eval questions (none are needed in this particular case).
choice = 2
print(f"\nthe secret participant picks piece {choice}")
assignment = Stepper(assign_program(tree, choice))
while not assignment.finished:
    query = assignment.outstanding
    print(f"  -> guest {query.agent}: how much is [{query.interval.lo}, "
          f"{query.interval.hi}] worth to you, out of 1?")
    value = query.interval.hi - query.interval.lo
    print(f"  <- guest {query.agent} answers {value}")
    assignment.step(Answer(query, value))

for agent, piece in sorted(assignment.result.items()):
    print(f"  guest {agent} receives piece {piece} = [{pieces[piece-1].lo}, {pieces[piece-1].hi}]")

print("""
to run this over HTTP with a browser console for each participant:

    uvicorn faircake.service:app --port 8000
    cd frontend && npm install && npm run dev

then create a session and share the per-participant links it prints.""")
