"""Exception hierarchy shared across the package."""

from __future__ import annotations

from fractions import Fraction


class FairCakeError(Exception):
    """Base class for all package errors."""


class DomainError(FairCakeError, ValueError):
    """An argument is outside its mathematical domain."""


class InfeasibleCutError(DomainError):
    """A cut target exceeds the mass remaining to the right of the start.

    Carries the remaining mass so callers can report how far off the
    request was.
    """

    def __init__(self, target: Fraction, remaining: Fraction):
        self.target = target
        self.remaining = remaining
        super().__init__(
            f"cut target {target} exceeds remaining mass {remaining}"
        )


class ValuationError(FairCakeError, ValueError):
    """A raw valuation violates one or more invariants.

    `violations` lists human-readable messages, each naming the index and
    offending value.
    """

    def __init__(self, violations: list[str]):
        self.violations = violations
        super().__init__("; ".join(violations))


class RoutingError(FairCakeError, KeyError):
    """A query was addressed to an agent with no endpoint or outside the
    transcript roster."""


class ProtocolViolation(FairCakeError):
    """An endpoint returned an answer violating the answer invariants."""

    def __init__(self, agent: int, message: str):
        self.agent = agent
        super().__init__(f"agent {agent}: {message}")


class StepperError(FairCakeError):
    """An answer was fed to a stepper that is not expecting it."""


class ScaleGuardError(FairCakeError):
    """A brute-force oracle was asked to run beyond its size guard."""


class StructuralError(FairCakeError, ValueError):
    """An allocation is structurally invalid (not a bijection onto the
    non-chosen pieces)."""
