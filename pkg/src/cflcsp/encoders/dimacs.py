"""DIMACS CNF interchange for k-SAT instances.

Grammar: optional 'c' comment lines, one 'p cnf <vars> <clauses>' header,
then whitespace-separated signed literals with each clause terminated by 0.
Clauses may span lines. Emission is canonical: header plus one clause per
line, so emit(parse(text)) == emit(parse(emit(parse(text)))).
"""

from __future__ import annotations

from ..core import KSAT, Clause, CspInstance, ParseError


def parse_dimacs(text: str) -> CspInstance:
    """Parse DIMACS CNF text into a binary-domain instance."""
    num_vars: int | None = None
    num_clauses: int | None = None
    header_line = 0
    clauses: list[Clause] = []
    literals: list[int] = []
    clause_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if num_vars < 1 or num_clauses < 0:
                raise ParseError(f"malformed header {line!r}", lineno)
            header_line = lineno
            continue
        if num_vars is None:
            raise ParseError(f"clause data before header: {line!r}", lineno)
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(f"invalid literal {token!r}", lineno) from None
            if lit == 0:
                if not literals:
                    raise ParseError("empty clause", lineno)
                scope = tuple(abs(l) - 1 for l in literals)
                if len(set(scope)) != len(scope):
                    raise ParseError("variable repeated within a clause", clause_line)
                clauses.append(
                    Clause(scope, KSAT, negated=tuple(l < 0 for l in literals))
                )
                literals = []
            else:
                if not literals:
                    clause_line = lineno
                if abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} out of range 1..{num_vars}", lineno)
                literals.append(lit)

    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if literals:
        raise ParseError("unterminated clause at end of input", clause_line)
    if len(clauses) != num_clauses:
        raise ParseError(
            f"header declares {num_clauses} clauses but {len(clauses)} found",
            header_line,
        )
    return CspInstance.build(num_vars, 2, clauses)


def emit_dimacs(instance: CspInstance) -> str:
    """Render a k-SAT instance as canonical DIMACS CNF text."""
    if instance.uniform_domain() != 2 or any(
        c.kind != KSAT for c in instance.clauses
    ):
        raise ValueError("only binary instances with ksat clauses can be emitted as DIMACS")
    lines = [f"p cnf {instance.num_variables} {instance.num_clauses}"]
    for clause in instance.clauses:
        lits = (
            str(-(v + 1)) if neg else str(v + 1)
            for v, neg in zip(clause.scope, clause.negated)
        )
        lines.append(" ".join(lits) + " 0")
    return "\n".join(lines) + "\n"
