"""The per-variable learning rule and its random streams.

Everything in this module sees only what a single decentralized agent may
see: its own probability vector, its own sampled value, one satisfied bit
and its own random stream. Nothing here imports or inspects instances,
clauses or other agents.

An agent keeps a distribution p over its D values. After sampling value v:

  satisfied:    p becomes the point mass on v.
  unsatisfied:  p[j] = (1-b) * p[j] + a/Z  for j == v,
                p[j] = (1-b) * p[j] + b/Z  otherwise,  Z = D - 1 + a/b.

The unsatisfied rule maps a distribution to a distribution exactly, since
(1-b) + (a + (D-1) b)/Z = 1; the implementation never renormalizes, so any
drift is a bug and is asserted against elsewhere.

Random streams are counter-based: the uniform consumed by agent i in round
t is a pure function of (key_i, t), with key_i derived from the run's
master seed. Every agent consumes exactly one uniform per round (a
satisfied agent's draw is determined by its point mass anyway), so results
do not depend on evaluation order or batching.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

_MASK64 = (1 << 64) - 1
_PHI = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_U53 = 2.0**-53


def _mix64(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


def stream_keys(master_seed: int, count: int) -> np.ndarray:
    """Derive one independent stream key per agent from a master seed."""
    base = master_seed % (1 << 64)
    idx = np.arange(1, count + 1, dtype=np.uint64)
    return _mix64(np.uint64(base) + idx * np.uint64(_PHI))


def round_uniforms(keys: np.ndarray, t: int) -> np.ndarray:
    """Uniform [0,1) draw for round t from every agent stream."""
    step = ((t + 1) * _PHI) & _MASK64
    z = _mix64(keys + np.uint64(step))
    return (z >> np.uint64(11)) * _U53


def round_uniforms_block(keys: np.ndarray, t0: int, count: int) -> np.ndarray:
    """Draws for rounds t0..t0+count-1, shape (count, len(keys)).

    Row r equals round_uniforms(keys, t0 + r); blocking only amortizes the
    mixing cost.
    """
    steps = np.array(
        [((t0 + r + 1) * _PHI) & _MASK64 for r in range(count)], dtype=np.uint64
    )
    z = _mix64(keys[None, :] + steps[:, None])
    return (z >> np.uint64(11)) * _U53


def uniform_at(master_seed: int, agent_index: int, t: int) -> float:
    """Scalar reference for a single agent's round-t draw."""
    keys = stream_keys(master_seed, agent_index + 1)
    return float(round_uniforms(keys[agent_index : agent_index + 1], t)[0])


def sample_index(p: Sequence[float], u: float) -> int:
    """Value index drawn from distribution p using uniform u (reference)."""
    cum = 0.0
    for j, pj in enumerate(p):
        cum += pj
        if u < cum:
            return j
    return len(p) - 1


def update_distribution(
    p: Sequence[float], value_index: int, satisfied: bool, a: float, b: float
) -> list[float]:
    """One update of a single agent's distribution (reference)."""
    d = len(p)
    if satisfied:
        out = [0.0] * d
        out[value_index] = 1.0
        return out
    z = (d - 1) + a / b
    coef = 1.0 - b
    add_self = a / z
    add_other = b / z
    return [
        coef * pj + (add_self if j == value_index else add_other)
        for j, pj in enumerate(p)
    ]


def sample_columns(p: np.ndarray, u: np.ndarray, dom_minus1: np.ndarray) -> np.ndarray:
    """Vectorized sampling; matches sample_index bit for bit.

    p is (N, Dmax) with zero-padded columns past each agent's domain;
    dom_minus1 clips agents whose cumulative sum falls short of u by
    rounding error.
    """
    n, dmax = p.shape
    if dmax == 1:
        return np.zeros(n, dtype=np.int64)
    cum = p[:, 0].copy()
    idx = (u >= cum).astype(np.int64)
    for j in range(1, dmax - 1):
        cum += p[:, j]
        idx += u >= cum
    return np.minimum(idx, dom_minus1, out=idx)


def advance_probabilities(
    p: np.ndarray,
    value_index: np.ndarray,
    satisfied: np.ndarray,
    coef: float,
    add_other: np.ndarray,
    add_self: np.ndarray,
    rows: np.ndarray | None = None,
) -> None:
    """Vectorized update of all agent rows in place.

    add_other is (N, Dmax) premasked so padded columns stay exactly zero;
    add_self is (N,). Satisfied rows become exact point masses (0.0/1.0),
    so reselection of an absorbed assignment is bit-exact. rows, when
    given, must be arange(len(p)) (callers precompute it).
    """
    if rows is None:
        rows = np.arange(p.shape[0])
    self_old = p[rows, value_index]
    p *= coef
    p += add_other
    p[rows, value_index] = coef * self_old + add_self
    sat_rows = np.flatnonzero(satisfied)
    if sat_rows.size:
        p[sat_rows] = 0.0
        p[sat_rows, value_index[sat_rows]] = 1.0
