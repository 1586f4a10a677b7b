"""Four guests split a cake into five pieces without a single question to
the birthday kid, who will nevertheless pick first.

Run:  python3 demos/02_partition_without_the_birthday_kid.py
"""

from faircake import (
    Transcript,
    UNIT,
    dc_secret,
    pieces_of,
    queries_to,
    random_valuation,
    simulated_endpoints,
)

# Guests 1..4 have (seeded) private measures. There is no entry for the
# birthday kid anywhere: the roster of queryable agents simply does not
# contain them, so a query to them is not even representable.
guests = {i: random_valuation(seed=40 + i, segments=4) for i in (1, 2, 3, 4)}
transcript = Transcript(guests)
tree = dc_secret(UNIT, tuple(guests), simulated_endpoints(guests), transcript)

print("pieces:")
for i, piece in enumerate(pieces_of(tree), start=1):
    print(f"  {i}: [{piece.lo}, {piece.hi}]  (length {piece.length})")

print("\nwho was asked what:")
for line in transcript.export_lines():
    print(" ", line)

print("\nqueries per participant:")
for agent in (1, 2, 3, 4):
    print(f"  guest {agent}: {queries_to(transcript, agent)}")
print(f"  birthday kid: {queries_to(transcript, 5)}  <- always zero")
print(f"\ncut queries total: {transcript.count('cut')} "
      f"(the count depends only on the number of guests, never on their answers)")
