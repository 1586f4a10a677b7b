from __future__ import annotations

from fractions import Fraction

import pytest

from faircake import (
    Transcript,
    UNIT,
    Valuation,
    dc_secret,
    random_valuation,
    simulated_endpoints,
    uniform_valuation,
)


def riemann_mass(v: Valuation, lo: Fraction, hi: Fraction, step: float = 1e-6) -> float:
    """Independent numerical oracle: midpoint Riemann sum of the density.

    Deliberately float-based and ignorant of eval_measure's segment walk.
    """
    def density(x: float) -> float:
        for k in range(len(v.heights)):
            if float(v.breakpoints[k]) <= x < float(v.breakpoints[k + 1]):
                return float(v.heights[k])
        return float(v.heights[-1]) if x >= float(v.breakpoints[-1]) else 0.0

    a, b = float(lo), float(hi)
    n = max(1, round((b - a) / step))
    h = (b - a) / n
    return sum(density(a + (i + 0.5) * h) for i in range(n)) * h


def seeded_valuations(n: int, seed: int, segments: int = 4) -> dict[int, Valuation]:
    """One deterministic valuation per agent id 1..n."""
    return {i: random_valuation(seed * 1000 + i, segments) for i in range(1, n + 1)}


def run_dc(n: int, seed: int, segments: int = 4):
    """Full seeded partition run; returns (tree, valuations, transcript)."""
    valuations = seeded_valuations(n, seed, segments)
    transcript = Transcript(valuations.keys())
    tree = dc_secret(UNIT, tuple(valuations), simulated_endpoints(valuations), transcript)
    return tree, valuations, transcript


@pytest.fixture
def uniform():
    return uniform_valuation()


@pytest.fixture
def left_heavy():
    """Density 2 on [0,1/2], 0 on [1/2,1]."""
    return Valuation(
        (Fraction(0), Fraction(1, 2), Fraction(1)),
        (Fraction(2), Fraction(0)),
    )
