"""Centralized stochastic local search baselines for k-SAT instances.

Both walks start from a uniformly random assignment and repeatedly pick a
uniformly random unsatisfied clause, then flip exactly one variable of that
clause per iteration. They require binary domains and ksat clauses only.
Satisfied-literal counts are maintained incrementally so a flip costs time
proportional to the flipped variable's clause occurrences.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .core import KSAT, CspInstance

SOLVED = "solved"
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class WalkResult:
    outcome: str
    flips: int
    assignment: tuple[int, ...]

    @property
    def solved(self) -> bool:
        return self.outcome == SOLVED


class _WalkState:
    """Assignment plus per-clause satisfied-literal counters and unsat set."""

    def __init__(self, instance: CspInstance, rng: random.Random, initial: Sequence[int] | None):
        if instance.uniform_domain() != 2 or any(c.kind != KSAT for c in instance.clauses):
            raise ValueError("walk baselines need a binary instance with ksat clauses only")
        self.instance = instance
        n = instance.num_variables
        if initial is None:
            self.values = [rng.randint(1, 2) for _ in range(n)]
        else:
            if len(initial) != n or any(v not in (1, 2) for v in initial):
                raise ValueError("initial assignment must assign 1 or 2 to every variable")
            self.values = list(initial)
        # occurrences[v] = [(clause_id, negated), ...]
        self.occurrences: list[list[tuple[int, bool]]] = [[] for _ in range(n)]
        self.sat_count = [0] * instance.num_clauses
        for cid, clause in enumerate(instance.clauses):
            for v, neg in zip(clause.scope, clause.negated):
                self.occurrences[v].append((cid, neg))
                if (self.values[v] == 2) != neg:
                    self.sat_count[cid] += 1
        self.unsat = [cid for cid, k in enumerate(self.sat_count) if k == 0]
        self.unsat_pos = {cid: i for i, cid in enumerate(self.unsat)}

    def _lit_true(self, v: int, neg: bool) -> bool:
        return (self.values[v] == 2) != neg

    def flip(self, v: int) -> None:
        self.values[v] = 3 - self.values[v]
        for cid, neg in self.occurrences[v]:
            if self._lit_true(v, neg):
                self.sat_count[cid] += 1
                if self.sat_count[cid] == 1:
                    pos = self.unsat_pos.pop(cid)
                    last = self.unsat.pop()
                    if last != cid:
                        self.unsat[pos] = last
                        self.unsat_pos[last] = pos
            else:
                self.sat_count[cid] -= 1
                if self.sat_count[cid] == 0:
                    self.unsat_pos[cid] = len(self.unsat)
                    self.unsat.append(cid)

    def break_count(self, v: int) -> int:
        """Clauses that would become unsatisfied if v were flipped."""
        return sum(
            1
            for cid, neg in self.occurrences[v]
            if self.sat_count[cid] == 1 and self._lit_true(v, neg)
        )


def schoening_walk(
    instance: CspInstance,
    seed: int,
    cap: int,
    initial: Sequence[int] | None = None,
    flip_log: list[int] | None = None,
) -> WalkResult:
    """Random walk: flip a uniformly random variable of a random unsatisfied clause."""
    rng = random.Random(seed)
    state = _WalkState(instance, rng, initial)
    flips = 0
    while state.unsat:
        if flips >= cap:
            return WalkResult(CAP_EXCEEDED, flips, tuple(state.values))
        clause = instance.clauses[state.unsat[rng.randrange(len(state.unsat))]]
        v = clause.scope[rng.randrange(len(clause.scope))]
        if flip_log is not None:
            flip_log.append(v)
        state.flip(v)
        flips += 1
    return WalkResult(SOLVED, flips, tuple(state.values))


def walksat(
    instance: CspInstance,
    seed: int,
    cap: int,
    noise: float = 0.5,
    initial: Sequence[int] | None = None,
    flip_log: list[int] | None = None,
) -> WalkResult:
    """Noise/greedy walk: random variable with probability noise, else one of
    the minimum-break-count variables of the chosen clause (ties uniform)."""
    if not 0.0 <= noise <= 1.0:
        raise ValueError("noise must be in [0, 1]")
    rng = random.Random(seed)
    state = _WalkState(instance, rng, initial)
    flips = 0
    while state.unsat:
        if flips >= cap:
            return WalkResult(CAP_EXCEEDED, flips, tuple(state.values))
        clause = instance.clauses[state.unsat[rng.randrange(len(state.unsat))]]
        if rng.random() < noise:
            v = clause.scope[rng.randrange(len(clause.scope))]
        else:
            breaks = [state.break_count(w) for w in clause.scope]
            best = min(breaks)
            ties = [w for w, c in zip(clause.scope, breaks) if c == best]
            v = ties[rng.randrange(len(ties))]
        if flip_log is not None:
            flip_log.append(v)
        state.flip(v)
        flips += 1
    return WalkResult(SOLVED, flips, tuple(state.values))
