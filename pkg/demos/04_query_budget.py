"""Query accounting: measured counts match the closed recurrence exactly
and stay inside the n*log(n)-shaped ceiling.

Run:  python3 demos/04_query_budget.py
"""

from faircake import (
    Transcript,
    UNIT,
    assign_given_choice,
    dc_secret,
    predicted_cut_count,
    query_budget,
    random_valuation,
    simulated_endpoints,
)

print(f"{'n':>5} {'cuts':>7} {'predicted':>9} {'evals':>6} {'total':>7} {'budget':>7}")
for n in (1, 2, 3, 4, 8, 16, 33, 64, 100):
    guests = {i: random_valuation(seed=n * 31 + i, segments=3) for i in range(1, n + 1)}
    transcript = Transcript(guests)
    endpoints = simulated_endpoints(guests)
    tree = dc_secret(UNIT, tuple(guests), endpoints, transcript)
    cuts = transcript.count("cut")
    assert cuts == predicted_cut_count(n)

    # resolving one first pick costs some eval queries on top
    assign_given_choice(tree, 1, endpoints, transcript)
    total = len(transcript)
    assert total <= query_budget(n)
    print(
        f"{n:>5} {cuts:>7} {predicted_cut_count(n):>9} "
        f"{transcript.count('eval'):>6} {total:>7} {query_budget(n):>7}"
    )

print("\nthe partition phase issues cut queries only; the recurrence")
print("C(1)=1, C(even n)=n+C(n-1), C(odd n)=n+2*C((n-1)/2) is exact.")
