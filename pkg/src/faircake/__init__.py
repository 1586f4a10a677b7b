"""Proportional cake-cutting that keeps one participant's preferences secret.

n queried agents partition [0,1] into n+1 connected pieces using only
eval/cut queries among themselves; an extra participant who was never
queried picks any piece first, and the remaining pieces can always be
assigned so every queried agent receives at least 1/(n+1) of the cake by
their own measure. All arithmetic is exact rational.
"""

from .errors import (
    DomainError,
    FairCakeError,
    InfeasibleCutError,
    ProtocolViolation,
    RoutingError,
    ScaleGuardError,
    StepperError,
    StructuralError,
    ValuationError,
)
from .measures import (
    Interval,
    UNIT,
    Valuation,
    cut_point,
    eval_measure,
    format_rational,
    parse_rational,
    random_valuation,
    uniform_valuation,
    validate_valuation,
)
from .rw import (
    Answer,
    Cut,
    Eval,
    Query,
    SimulatedAgent,
    Stepper,
    Transcript,
    dispatch,
    queries_to,
    run_program,
    simulated_endpoints,
)
from .protocol import (
    EvenNode,
    Leaf1,
    OddNode,
    PartitionTree,
    agents_of,
    dc_secret,
    dc_secret_program,
    even_paz,
    pieces_of,
    predicted_cut_count,
    query_budget,
    tree_depth,
    tree_from_json,
    tree_to_json,
)
from .allocation import (
    Allocation,
    ProportionalityReport,
    allocation_csv,
    allocation_table,
    assign_given_choice,
    enumerate_acceptable_matchings,
    max_matching_allocation,
    secret_best_piece,
    verify_proportional,
)

__all__ = [
    "Allocation",
    "Answer",
    "Cut",
    "DomainError",
    "Eval",
    "EvenNode",
    "FairCakeError",
    "InfeasibleCutError",
    "Interval",
    "Leaf1",
    "OddNode",
    "PartitionTree",
    "ProportionalityReport",
    "ProtocolViolation",
    "Query",
    "RoutingError",
    "ScaleGuardError",
    "SimulatedAgent",
    "Stepper",
    "StepperError",
    "StructuralError",
    "Transcript",
    "UNIT",
    "Valuation",
    "ValuationError",
    "agents_of",
    "allocation_csv",
    "allocation_table",
    "assign_given_choice",
    "cut_point",
    "dc_secret",
    "dc_secret_program",
    "dispatch",
    "enumerate_acceptable_matchings",
    "eval_measure",
    "even_paz",
    "format_rational",
    "max_matching_allocation",
    "parse_rational",
    "pieces_of",
    "predicted_cut_count",
    "queries_to",
    "query_budget",
    "random_valuation",
    "run_program",
    "secret_best_piece",
    "simulated_endpoints",
    "tree_depth",
    "tree_from_json",
    "tree_to_json",
    "uniform_valuation",
    "validate_valuation",
    "verify_proportional",
]

__version__ = "0.1.0"
