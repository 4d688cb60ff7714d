"""Random k-SAT instance generation.

Variables are binary (domain value 1 is false, 2 is true); each clause is a
disjunction of k literals over distinct variables.
"""

from __future__ import annotations

import numpy as np

from ..core import KSAT, Clause, CspInstance


def clauses_for_ratio(n: int, r: float) -> int:
    """Clause count for a density r = M/N, rounded to the nearest integer."""
    return round(r * n)


def random_ksat(
    n: int, m: int, k: int, seed: int, distinct_clauses: bool = False
) -> CspInstance:
    """Draw m clauses uniformly at random over n binary variables.

    Each clause picks k distinct variables without replacement and negates
    each independently with probability 1/2. Duplicate clauses are allowed
    (matching the uniform drawing model) unless distinct_clauses is set.
    """
    if k < 1 or k > n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if m < 0:
        raise ValueError("clause count must be >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    clauses: list[Clause] = []
    seen: set[frozenset[int]] = set()
    while len(clauses) < m:
        scope = rng.choice(n, size=k, replace=False)
        negated = rng.random(k) < 0.5
        if distinct_clauses:
            signature = frozenset(
                (v + 1) * (-1 if neg else 1) for v, neg in zip(scope, negated)
            )
            if signature in seen:
                continue
            seen.add(signature)
        clauses.append(
            Clause(tuple(int(v) for v in scope), KSAT, negated=tuple(bool(b) for b in negated))
        )
    return CspInstance.build(n, 2, clauses)
