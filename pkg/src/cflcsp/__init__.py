"""Decentralized constraint satisfaction.

A CSP solver in which every variable hosts an independent learning agent
whose only input per round is one bit: whether all clauses it participates
in are currently satisfied. Includes encoders for graph coloring,
channel-dependent interference, transmission scheduling, spectrum
assignment and inter-session network coding, random k-SAT generation and
DIMACS interchange, centralized random-walk baselines, convergence bound
calculators, and a reproducible benchmark harness.
"""

from .baseline import WalkResult, schoening_walk, walksat
from .core import (
    Clause,
    CspInstance,
    ParseError,
    ParticipationReport,
    disjoint_union,
    evaluate_clause,
    instance_from_json,
    instance_to_json,
    is_solution,
    local_signal,
    local_signals,
    validate_participation,
)
from .engine import (
    CAP_EXCEEDED,
    DEFAULT_CAP,
    SOLVED,
    AgentState,
    CflEngine,
    CflParams,
    EngineFault,
    RoundReport,
    RunResult,
    TraceRound,
    default_params,
    format_trace_line,
    gamma,
    run_many,
    convergence_bound_log,
)
from .gf2 import gf2_solve, xor_rows

__all__ = [
    "AgentState",
    "CAP_EXCEEDED",
    "CflEngine",
    "CflParams",
    "Clause",
    "CspInstance",
    "DEFAULT_CAP",
    "EngineFault",
    "ParseError",
    "ParticipationReport",
    "RoundReport",
    "RunResult",
    "SOLVED",
    "TraceRound",
    "WalkResult",
    "default_params",
    "disjoint_union",
    "evaluate_clause",
    "format_trace_line",
    "gamma",
    "gf2_solve",
    "instance_from_json",
    "instance_to_json",
    "is_solution",
    "local_signal",
    "local_signals",
    "run_many",
    "schoening_walk",
    "convergence_bound_log",
    "validate_participation",
    "walksat",
    "xor_rows",
]

__version__ = "0.1.0"
