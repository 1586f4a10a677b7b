"""How agent preferences are represented: exact piecewise-constant measures.

Run:  python3 demos/01_exact_measures.py
"""

from fractions import Fraction as F

from faircake import (
    Interval,
    UNIT,
    cut_point,
    eval_measure,
    random_valuation,
    validate_valuation,
)

# A measure is a density over [0,1]: breakpoints plus one height per
# segment. This one packs everything into the left half of the cake.
left_heavy = validate_valuation(["0", "1/2", "1"], ["2", "0"])
print("left-heavy density:", left_heavy.to_json())

# Evaluations are exact. No floats are involved anywhere.
piece = Interval(F(0), F(1, 6))
print(f"value of [0, 1/6]  = {eval_measure(left_heavy, piece)}   (exactly 1/3)")
print(f"value of the cake  = {eval_measure(left_heavy, UNIT)}   (probability measure)")
print(f"value of a point   = {eval_measure(left_heavy, Interval(F(1,3), F(1,3)))}   (non-atomic)")

# Cuts invert the measure: find the leftmost point y so that [start, y]
# is worth exactly the target.
y = cut_point(left_heavy, F(0), F(1, 3))
print(f"\ncut for mass 1/3 from 0 lands at {y}")
print(f"check: value of [0, {y}] = {eval_measure(left_heavy, Interval(F(0), y))}")

# Zero-density stretches are legal; the leftmost rule keeps cuts unique.
print(f"cut for the full mass lands at {cut_point(left_heavy, F(0), F(1))}, not 1,")
print("because everything right of 1/2 is worthless to this agent.")

# Seeded random measures are exact too, and always total exactly 1.
v = random_valuation(seed=7, segments=5)
print(f"\nseeded random measure: total = {eval_measure(v, UNIT)}")
print("breakpoints:", [str(b) for b in v.breakpoints])
print("heights:    ", [str(h) for h in v.heights])
