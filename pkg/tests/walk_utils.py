"""Shared walk-baseline fixture and its exact Markov-chain oracle."""

import itertools
from fractions import Fraction

from cflcsp.core import KSAT, Clause, CspInstance, is_solution


def clause(*literals):
    # positive literal i means variable i-1 true
    return Clause(
        tuple(abs(l) - 1 for l in literals),
        KSAT,
        negated=tuple(l < 0 for l in literals),
    )


# (x1 or x2) and (not x1 or x2) and (x1 or not x2): unique solution (T, T)
FIXTURE = CspInstance.build(2, 2, [clause(1, 2), clause(-1, 2), clause(1, -2)])


def expected_flips_exact(instance) -> Fraction:
    """Absorption time of the walk's Markov chain from a uniform start.

    Enumerates the full assignment space, builds the one-flip transition
    law exactly as the walk defines it (uniform unsatisfied clause, then
    uniform variable in its scope) and solves the linear system over the
    rationals by Gaussian elimination.
    """
    n = instance.num_variables
    states = list(itertools.product((1, 2), repeat=n))
    transient = [s for s in states if not is_solution(instance, s)]
    t_index = {s: i for i, s in enumerate(transient)}
    size = len(transient)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    rhs = [Fraction(1)] * size
    for s in transient:
        i = t_index[s]
        matrix[i][i] += 1
        unsat = [
            c
            for c in range(instance.num_clauses)
            if not instance.clauses[c].evaluate(
                tuple(s[v] for v in instance.clauses[c].scope)
            )
        ]
        p_clause = Fraction(1, len(unsat))
        for c in unsat:
            scope = instance.clauses[c].scope
            p_var = p_clause * Fraction(1, len(scope))
            for v in scope:
                nxt = list(s)
                nxt[v] = 3 - nxt[v]
                key = tuple(nxt)
                if key in t_index:
                    matrix[i][t_index[key]] -= p_var
    for col in range(size):
        pivot = next(r for r in range(col, size) if matrix[r][col] != 0)
        matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = 1 / matrix[col][col]
        matrix[col] = [m * inv for m in matrix[col]]
        rhs[col] *= inv
        for r in range(size):
            if r != col and matrix[r][col] != 0:
                f = matrix[r][col]
                matrix[r] = [a - f * b for a, b in zip(matrix[r], matrix[col])]
                rhs[r] -= f * rhs[col]
    total = sum(rhs[t_index[s]] for s in transient)
    return total / len(states)
