"""Exact valuation measures on the unit interval.

A valuation is a non-atomic probability measure on [0,1], represented as a
piecewise-constant density with rational breakpoints and heights. Every
operation here is exact: values are `fractions.Fraction` throughout and no
float ever enters a computation. Floats/decimals are rejected at the
parsing boundary so that serialized artifacts round-trip bit-exactly.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InfeasibleCutError, ValuationError

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(raw: str | int) -> Fraction:
    """Parse an exact rational from `"p/q"`, `"p"`, or a plain int.

    Decimal literals (`"0.5"`, `1.5`, scientific notation) are rejected:
    accepting them silently would break the exactness contract of every
    stored artifact.
    """
    if isinstance(raw, bool):
        raise DomainError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str) and _RATIONAL_RE.match(raw):
        return Fraction(raw)
    raise DomainError(f"not an exact rational (use 'p/q' or integer): {raw!r}")


def format_rational(x: Fraction) -> str:
    """Render a Fraction as `"p/q"`, or `"p"` when the denominator is 1."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, order=True)
class Interval:
    """A closed subinterval of [0,1]; `lo == hi` is a legal empty piece."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if not (ZERO <= self.lo <= self.hi <= ONE):
            raise DomainError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> dict[str, str]:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    @classmethod
    def from_json(cls, data: dict) -> "Interval":
        return cls(parse_rational(data["lo"]), parse_rational(data["hi"]))


UNIT = Interval(ZERO, ONE)


@dataclass(frozen=True)
class Valuation:
    """Piecewise-constant probability density on [0,1].

    `breakpoints` is strictly increasing from 0 to 1; `heights[k]` is the
    density on [breakpoints[k], breakpoints[k+1]]. Total mass is exactly 1,
    so the measure is non-atomic by construction. Instances are immutable
    and safe to share; construct via `validate_valuation` unless the data
    is already known-good.
    """

    breakpoints: tuple[Fraction, ...]
    heights: tuple[Fraction, ...]

    def to_json(self) -> dict[str, list[str]]:
        return {
            "breakpoints": [format_rational(b) for b in self.breakpoints],
            "heights": [format_rational(h) for h in self.heights],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Valuation":
        return validate_valuation(data["breakpoints"], data["heights"])


def uniform_valuation() -> Valuation:
    """The Lebesgue measure on [0,1]."""
    return Valuation((ZERO, ONE), (ONE,))


def validate_valuation(
    breakpoints: list[Fraction | str | int], heights: list[Fraction | str | int]
) -> Valuation:
    """Check all valuation invariants, returning the validated Valuation.

    Raises ValuationError listing every violation (index and offending
    value) rather than stopping at the first.
    """
    violations: list[str] = []
    bps: list[Fraction] = []
    hts: list[Fraction] = []
    for i, raw in enumerate(breakpoints):
        try:
            bps.append(raw if isinstance(raw, Fraction) else parse_rational(raw))
        except DomainError as e:
            violations.append(f"breakpoint {i}: {e}")
    for i, raw in enumerate(heights):
        try:
            hts.append(raw if isinstance(raw, Fraction) else parse_rational(raw))
        except DomainError as e:
            violations.append(f"height {i}: {e}")
    if violations:
        raise ValuationError(violations)

    if len(bps) < 2:
        violations.append(f"need at least 2 breakpoints, got {len(bps)}")
    if len(hts) != len(bps) - 1:
        violations.append(
            f"expected {len(bps) - 1} heights for {len(bps)} breakpoints, got {len(hts)}"
        )
    if bps and bps[0] != 0:
        violations.append(f"first breakpoint must be 0, got {bps[0]}")
    if bps and bps[-1] != 1:
        violations.append(f"last breakpoint must be 1, got {bps[-1]}")
    for i in range(1, len(bps)):
        if bps[i] <= bps[i - 1]:
            violations.append(
                f"breakpoints must be strictly increasing: index {i} has {bps[i]}"
            )
    for i, h in enumerate(hts):
        if h < 0:
            violations.append(f"height {i} is negative: {h}")
    if not violations:
        mass = sum(
            (hts[k] * (bps[k + 1] - bps[k]) for k in range(len(hts))), ZERO
        )
        if mass != 1:
            violations.append(f"total mass must be 1, got {mass}")
    if violations:
        raise ValuationError(violations)
    return Valuation(tuple(bps), tuple(hts))


def eval_measure(v: Valuation, iv: Interval) -> Fraction:
    """Exact mass of `iv` under `v` (the eval query an agent answers)."""
    total = ZERO
    for k in range(len(v.heights)):
        seg_lo, seg_hi = v.breakpoints[k], v.breakpoints[k + 1]
        overlap_lo = max(seg_lo, iv.lo)
        overlap_hi = min(seg_hi, iv.hi)
        if overlap_hi > overlap_lo:
            total += v.heights[k] * (overlap_hi - overlap_lo)
    return total


def cut_point(v: Valuation, start: Fraction, target: Fraction) -> Fraction:
    """Leftmost y with mass([start, y]) == target (the cut query).

    The leftmost rule makes y unique even across zero-density segments,
    which keeps whole protocol runs reproducible.
    """
    if not (ZERO <= start <= ONE):
        raise DomainError(f"cut start {start} outside [0,1]")
    if target < 0:
        raise DomainError(f"cut target {target} is negative")
    remaining = eval_measure(v, Interval(start, ONE))
    if target > remaining:
        raise InfeasibleCutError(target, remaining)
    if target == 0:
        return start
    acc = ZERO
    for k in range(len(v.heights)):
        seg_lo, seg_hi = v.breakpoints[k], v.breakpoints[k + 1]
        lo = max(seg_lo, start)
        if lo >= seg_hi:
            continue
        seg_mass = v.heights[k] * (seg_hi - lo)
        if acc + seg_mass >= target:
            # target is reached inside this segment; height must be > 0
            # here because seg_mass > 0 was needed to close the gap
            return lo + (target - acc) / v.heights[k]
        acc += seg_mass
    raise InfeasibleCutError(target, acc)  # unreachable given the guard


def random_valuation(seed: int, segments: int) -> Valuation:
    """Deterministic random piecewise-constant probability measure.

    Breakpoints land on a grid of denominator 8*segments; integer segment
    weights (occasionally zero, never all zero) are normalized exactly so
    total mass is 1. One segment always yields the uniform valuation.
    """
    if segments < 1:
        raise DomainError(f"segments must be >= 1, got {segments}")
    if segments == 1:
        return uniform_valuation()
    rng = random.Random(seed)
    grid = 8 * segments
    interior = sorted(rng.sample(range(1, grid), segments - 1))
    bps = [ZERO] + [Fraction(p, grid) for p in interior] + [ONE]
    # weight 0 happens 1/8 of the time: zero-density stretches exercise
    # the leftmost-cut rule and degenerate pieces downstream
    weights = [0 if rng.randrange(8) == 0 else rng.randint(1, 8)
               for _ in range(segments)]
    if not any(weights):
        weights[rng.randrange(segments)] = 1
    total = sum(
        (Fraction(w) * (bps[k + 1] - bps[k]) for k, w in enumerate(weights)),
        ZERO,
    )
    heights = tuple(Fraction(w) / total for w in weights)
    return Valuation(tuple(bps), heights)


def load_valuation(data: dict) -> Valuation:
    """Validate a parsed JSON object with `breakpoints`/`heights` fields."""
    if not isinstance(data, dict) or "breakpoints" not in data or "heights" not in data:
        raise ValuationError(["expected an object with 'breakpoints' and 'heights'"])
    return validate_valuation(data["breakpoints"], data["heights"])


def dump_valuations(agents: list[Valuation], secret: Valuation | None = None) -> str:
    """Serialize a set of agent valuations (plus optional secret) to JSON."""
    doc: dict = {"agents": [v.to_json() for v in agents]}
    if secret is not None:
        doc["secret"] = secret.to_json()
    return json.dumps(doc, indent=2) + "\n"


def load_valuations(text: str) -> tuple[list[Valuation], Valuation | None]:
    """Parse a valuations document: `{"agents": [...], "secret": {...}?}`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValuationError([f"invalid JSON: {e}"]) from e
    if not isinstance(doc, dict) or "agents" not in doc:
        raise ValuationError(["expected an object with an 'agents' list"])
    agents = [load_valuation(item) for item in doc["agents"]]
    secret = load_valuation(doc["secret"]) if doc.get("secret") is not None else None
    return agents, secret
