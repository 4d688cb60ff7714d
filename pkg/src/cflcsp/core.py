"""Finite-domain CSP model: variables, clauses, participation sets, satisfaction.

Variables are indexed 0..N-1 and take integer values in {1..D_i}. A clause
is a pure predicate over an explicit scope of variables; an instance is
immutable after construction, so every operation here is safe to call
concurrently.

A variable's participation set lists the clauses whose outcome it can
influence. Encoders declare these sets constructively; `validate_participation`
checks the declarations against the semantic definition by brute force on
small instances.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Sequence

from . import gf2

# Clause kind tags. They drive serialization and the engine's vectorized
# evaluation paths; "custom" clauses carry an opaque callable and cannot
# be serialized.
KSAT = "ksat"
NOT_EQUAL = "not-equal"
NOT_EQUAL_ON_CHANNEL = "not-equal-on-channel"
CHANNEL_BAND = "channel-band"
GF2_REALIZABILITY = "gf2-realizability"
CUSTOM = "custom"

CLAUSE_KINDS = (
    KSAT,
    NOT_EQUAL,
    NOT_EQUAL_ON_CHANNEL,
    CHANNEL_BAND,
    GF2_REALIZABILITY,
    CUSTOM,
)

JSON_FORMAT = "csp-instance"
JSON_VERSION = 1


class ParseError(ValueError):
    """Malformed input text; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Gf2Payload:
    """Realizability data for a coding clause.

    Scope convention: scope[0] is the clause's own edge variable, the rest
    are upstream edge variables. Each upstream value v contributes the row
    v-1 (as a bitmask over flows); `fixed_rows` are contributed by feeds
    whose row does not depend on any variable. The clause holds when
    `target` (or the own variable's row, if target is None) is an XOR
    combination of the available rows.
    """

    num_flows: int
    fixed_rows: tuple[int, ...]
    target: int | None  # None: target is the own variable's row

    def __post_init__(self):
        if self.num_flows < 1:
            raise ValueError("num_flows must be >= 1")
        limit = 1 << self.num_flows
        for row in self.fixed_rows:
            if not 0 <= row < limit:
                raise ValueError(f"fixed row {row} out of range for {self.num_flows} flows")
        if self.target is not None and not 0 <= self.target < limit:
            raise ValueError(f"target {self.target} out of range for {self.num_flows} flows")


@dataclass(frozen=True)
class Clause:
    """A boolean predicate over an ordered, duplicate-free variable scope."""

    scope: tuple[int, ...]
    kind: str
    negated: tuple[bool, ...] | None = None  # ksat: per-literal negation
    channel: int | None = None  # not-equal-on-channel
    min_separation: int | None = None  # channel-band; scope[0] is the owner
    gf2: Gf2Payload | None = None
    predicate: Callable[[tuple[int, ...]], bool] | None = None  # custom only

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        if not self.scope:
            raise ValueError("clause scope must be non-empty")
        if len(set(self.scope)) != len(self.scope):
            raise ValueError("clause scope contains duplicate variables")
        if self.kind == KSAT:
            if self.negated is None or len(self.negated) != len(self.scope):
                raise ValueError("ksat clause needs one negation flag per scope variable")
            object.__setattr__(self, "negated", tuple(bool(b) for b in self.negated))
        elif self.kind == NOT_EQUAL:
            if len(self.scope) != 2:
                raise ValueError("not-equal clause scope must have exactly 2 variables")
        elif self.kind == NOT_EQUAL_ON_CHANNEL:
            if len(self.scope) != 2 or self.channel is None or self.channel < 1:
                raise ValueError("not-equal-on-channel clause needs a 2-variable scope and a channel >= 1")
        elif self.kind == CHANNEL_BAND:
            if self.min_separation is None or self.min_separation < 1:
                raise ValueError("channel-band clause needs min_separation >= 1")
        elif self.kind == GF2_REALIZABILITY:
            if self.gf2 is None:
                raise ValueError("gf2-realizability clause needs a payload")
        elif self.kind == CUSTOM:
            if self.predicate is None:
                raise ValueError("custom clause needs a predicate callable")
        else:
            raise ValueError(f"unknown clause kind {self.kind!r}")

    def evaluate(self, values: Sequence[int]) -> bool:
        """Apply the predicate to the scope's value tuple."""
        if len(values) != len(self.scope):
            raise ValueError("value tuple length must match the clause scope")
        if self.kind == KSAT:
            # Binary domain: 1 is false, 2 is true.
            return any((v == 2) != neg for v, neg in zip(values, self.negated))
        if self.kind == NOT_EQUAL:
            return values[0] != values[1]
        if self.kind == NOT_EQUAL_ON_CHANNEL:
            return not (values[0] == self.channel and values[1] == self.channel)
        if self.kind == CHANNEL_BAND:
            v0 = values[0]
            return all(abs(v0 - vj) >= self.min_separation for vj in values[1:])
        if self.kind == GF2_REALIZABILITY:
            rows = [v - 1 for v in values[1:]] + list(self.gf2.fixed_rows)
            target = (values[0] - 1) if self.gf2.target is None else self.gf2.target
            return gf2.solvable_masks(rows, target)
        return bool(self.predicate(tuple(values)))


@dataclass(frozen=True)
class CspInstance:
    """An immutable CSP: domains, clauses and declared participation sets."""

    num_variables: int
    domain_sizes: tuple[int, ...]
    clauses: tuple[Clause, ...]
    participation: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = self.num_variables
        if n < 1:
            raise ValueError("an instance needs at least one variable")
        if len(self.domain_sizes) != n:
            raise ValueError("domain_sizes length must equal num_variables")
        if any(d < 1 for d in self.domain_sizes):
            raise ValueError("every domain size must be >= 1")
        for cid, clause in enumerate(self.clauses):
            for v in clause.scope:
                if not 0 <= v < n:
                    raise ValueError(f"clause {cid} references variable {v} outside 0..{n - 1}")
        if len(self.participation) != n:
            raise ValueError("participation must list one clause set per variable")
        m = len(self.clauses)
        for v, ms in enumerate(self.participation):
            for cid in ms:
                if not 0 <= cid < m:
                    raise ValueError(f"participation of variable {v} references missing clause {cid}")
        # Every scope member must have declared the clause (supersets allowed).
        for cid, clause in enumerate(self.clauses):
            for v in clause.scope:
                if cid not in self.participation[v]:
                    raise ValueError(
                        f"variable {v} is in the scope of clause {cid} but does not declare it"
                    )

    @classmethod
    def build(
        cls,
        num_variables: int,
        domain_size: int | Sequence[int],
        clauses: Iterable[Clause],
        participation: Sequence[Iterable[int]] | None = None,
    ) -> "CspInstance":
        """Construct an instance; participation defaults to scope membership."""
        if isinstance(domain_size, int):
            domains = (domain_size,) * num_variables
        else:
            domains = tuple(domain_size)
        clauses = tuple(clauses)
        if participation is None:
            sets: list[set[int]] = [set() for _ in range(num_variables)]
            for cid, clause in enumerate(clauses):
                for v in clause.scope:
                    if not 0 <= v < num_variables:
                        raise ValueError(f"clause {cid} references variable {v}")
                    sets[v].add(cid)
            part = tuple(tuple(sorted(s)) for s in sets)
        else:
            part = tuple(tuple(sorted(set(ms))) for ms in participation)
        return cls(num_variables, domains, clauses, part)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def uniform_domain(self) -> int | None:
        """The shared domain size, or None if variables differ."""
        first = self.domain_sizes[0]
        return first if all(d == first for d in self.domain_sizes) else None


def check_assignment(instance: CspInstance, x: Sequence[int]) -> None:
    """Raise ValueError unless x is a well-formed assignment for instance."""
    if len(x) != instance.num_variables:
        raise ValueError(
            f"assignment has {len(x)} values, instance has {instance.num_variables} variables"
        )
    for i, (v, d) in enumerate(zip(x, instance.domain_sizes)):
        if not 1 <= v <= d:
            raise ValueError(f"value {v} of variable {i} outside 1..{d}")


def evaluate_clause(instance: CspInstance, clause_id: int, x: Sequence[int]) -> bool:
    """Evaluate one clause under assignment x."""
    if not 0 <= clause_id < instance.num_clauses:
        raise ValueError(f"clause id {clause_id} outside 0..{instance.num_clauses - 1}")
    check_assignment(instance, x)
    clause = instance.clauses[clause_id]
    return clause.evaluate(tuple(x[v] for v in clause.scope))


def local_signal(instance: CspInstance, var_id: int, x: Sequence[int]) -> bool:
    """One-bit feedback for a variable: all declared clauses satisfied.

    A variable that participates in no clause is always satisfied.
    """
    if not 0 <= var_id < instance.num_variables:
        raise ValueError(f"variable id {var_id} outside 0..{instance.num_variables - 1}")
    check_assignment(instance, x)
    return all(
        instance.clauses[m].evaluate(tuple(x[v] for v in instance.clauses[m].scope))
        for m in instance.participation[var_id]
    )


def local_signals(instance: CspInstance, x: Sequence[int]) -> tuple[bool, ...]:
    """All per-variable feedback bits under assignment x."""
    check_assignment(instance, x)
    clause_sat = [
        c.evaluate(tuple(x[v] for v in c.scope)) for c in instance.clauses
    ]
    return tuple(
        all(clause_sat[m] for m in instance.participation[i])
        for i in range(instance.num_variables)
    )


def is_solution(instance: CspInstance, x: Sequence[int]) -> bool:
    """True when every clause of the instance is satisfied by x."""
    check_assignment(instance, x)
    return all(c.evaluate(tuple(x[v] for v in c.scope)) for c in instance.clauses)


@dataclass(frozen=True)
class ParticipationReport:
    """Result of checking declared participation against semantic influence.

    missing: (variable, clause) pairs where the variable can influence the
        clause but does not declare it (an encoder bug).
    inert: declared pairs the variable cannot actually influence (harmless
        over-declaration, reported as warnings).
    """

    missing: tuple[tuple[int, int], ...]
    inert: tuple[tuple[int, int], ...]
    evaluations: int

    @property
    def ok(self) -> bool:
        return not self.missing


def validate_participation(
    instance: CspInstance, max_evaluations: int = 1 << 20
) -> ParticipationReport:
    """Brute-force check of participation declarations on small instances.

    A variable participates in a clause when changing its value can flip the
    clause for at least one assignment of the other scope variables. Only
    scope members can influence a clause, so enumeration is per-clause over
    the scope's domain product. Instances whose enumeration would exceed
    max_evaluations predicate calls are refused.
    """
    total = 0
    missing: list[tuple[int, int]] = []
    inert: list[tuple[int, int]] = []
    declared_sets = [set(ms) for ms in instance.participation]
    for cid, clause in enumerate(instance.clauses):
        size = 1
        for v in clause.scope:
            size *= instance.domain_sizes[v]
        total += size
        if total > max_evaluations:
            raise ValueError(
                f"participation check needs more than {max_evaluations} evaluations; "
                "raise max_evaluations for larger instances"
            )
        domains = [range(1, instance.domain_sizes[v] + 1) for v in clause.scope]
        table = {vals: clause.evaluate(vals) for vals in product(*domains)}
        for pos, v in enumerate(clause.scope):
            influences = False
            seen: dict[tuple[int, ...], bool] = {}
            for vals, out in table.items():
                ctx = vals[:pos] + vals[pos + 1 :]
                prev = seen.setdefault(ctx, out)
                if prev != out:
                    influences = True
                    break
            if influences and cid not in declared_sets[v]:
                missing.append((v, cid))
            elif not influences and cid in declared_sets[v]:
                inert.append((v, cid))
    # Declared participation outside the clause scope can never matter.
    for v, ms in enumerate(declared_sets):
        for cid in ms:
            if v not in instance.clauses[cid].scope:
                inert.append((v, cid))
    return ParticipationReport(tuple(sorted(missing)), tuple(sorted(inert)), total)


def disjoint_union(
    instances: Sequence[CspInstance],
) -> tuple[CspInstance, tuple[int, ...]]:
    """Combine independent instances over disjoint variables.

    Returns the combined instance and the variable offset of each input.
    """
    if not instances:
        raise ValueError("need at least one instance")
    offsets = []
    domains: list[int] = []
    clauses: list[Clause] = []
    participation: list[tuple[int, ...]] = []
    clause_off = 0
    for inst in instances:
        off = len(domains)
        offsets.append(off)
        domains.extend(inst.domain_sizes)
        for clause in inst.clauses:
            clauses.append(
                Clause(
                    scope=tuple(v + off for v in clause.scope),
                    kind=clause.kind,
                    negated=clause.negated,
                    channel=clause.channel,
                    min_separation=clause.min_separation,
                    gf2=clause.gf2,
                    predicate=clause.predicate,
                )
            )
        for ms in inst.participation:
            participation.append(tuple(m + clause_off for m in ms))
        clause_off += inst.num_clauses
    combined = CspInstance(len(domains), tuple(domains), tuple(clauses), tuple(participation))
    return combined, tuple(offsets)


def _clause_to_json(clause: Clause) -> dict:
    doc: dict = {"kind": clause.kind, "scope": list(clause.scope)}
    if clause.kind == KSAT:
        doc["negated"] = [bool(b) for b in clause.negated]
    elif clause.kind == NOT_EQUAL_ON_CHANNEL:
        doc["channel"] = clause.channel
    elif clause.kind == CHANNEL_BAND:
        doc["min_separation"] = clause.min_separation
    elif clause.kind == GF2_REALIZABILITY:
        doc["num_flows"] = clause.gf2.num_flows
        doc["fixed_rows"] = list(clause.gf2.fixed_rows)
        doc["target"] = clause.gf2.target
    elif clause.kind == CUSTOM:
        raise ValueError("custom clauses are not serializable")
    return doc


def _clause_from_json(doc: dict, index: int) -> Clause:
    try:
        kind = doc["kind"]
        scope = tuple(int(v) for v in doc["scope"])
        if kind == KSAT:
            return Clause(scope, KSAT, negated=tuple(bool(b) for b in doc["negated"]))
        if kind == NOT_EQUAL:
            return Clause(scope, NOT_EQUAL)
        if kind == NOT_EQUAL_ON_CHANNEL:
            return Clause(scope, NOT_EQUAL_ON_CHANNEL, channel=int(doc["channel"]))
        if kind == CHANNEL_BAND:
            return Clause(scope, CHANNEL_BAND, min_separation=int(doc["min_separation"]))
        if kind == GF2_REALIZABILITY:
            payload = Gf2Payload(
                num_flows=int(doc["num_flows"]),
                fixed_rows=tuple(int(r) for r in doc["fixed_rows"]),
                target=None if doc["target"] is None else int(doc["target"]),
            )
            return Clause(scope, GF2_REALIZABILITY, gf2=payload)
    except KeyError as exc:
        raise ParseError(f"clause {index}: missing field {exc}") from exc
    raise ParseError(f"clause {index}: unknown kind {kind!r}")


def instance_to_json(instance: CspInstance, indent: int | None = None) -> str:
    """Serialize an instance to the versioned JSON document format."""
    doc = {
        "format": JSON_FORMAT,
        "version": JSON_VERSION,
        "num_variables": instance.num_variables,
        "domain_sizes": list(instance.domain_sizes),
        "clauses": [_clause_to_json(c) for c in instance.clauses],
        "participation": [list(ms) for ms in instance.participation],
    }
    return json.dumps(doc, indent=indent)


def instance_from_json(text: str) -> CspInstance:
    """Parse the versioned JSON document format back into an instance."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}", line=exc.lineno) from exc
    if not isinstance(doc, dict) or doc.get("format") != JSON_FORMAT:
        raise ParseError(f"not a {JSON_FORMAT} document")
    if doc.get("version") != JSON_VERSION:
        raise ParseError(f"unsupported version {doc.get('version')!r}")
    try:
        num_variables = int(doc["num_variables"])
        domains = doc["domain_sizes"]
        clauses = [_clause_from_json(c, i) for i, c in enumerate(doc["clauses"])]
        participation = doc.get("participation")
    except KeyError as exc:
        raise ParseError(f"missing field {exc}") from exc
    if isinstance(domains, int):
        domain_sizes: int | list[int] = domains
    else:
        domain_sizes = [int(d) for d in domains]
    part = None
    if participation is not None:
        part = [tuple(int(m) for m in ms) for ms in participation]
    try:
        return CspInstance.build(num_variables, domain_sizes, clauses, part)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
