"""Synchronous multi-agent solver engine and its convergence bound calculators.

One learning agent (see `agents`) is attached to every variable. A round is:

  1. every agent samples its value from its current distribution;
  2. all clauses are evaluated jointly on the sampled assignment and each
     agent receives its one-bit signal;
  3. every agent updates its distribution from that bit alone.

The harness detects global satisfaction for measurement only; agents never
receive anything beyond their own signal bit. The stopping time tau is the
index of the first round whose sampled assignment satisfies every clause
(rounds count from 0). Once that happens every agent holds a point mass,
so the assignment is reproduced exactly forever.

Instances are compiled to flat arrays grouped by clause kind so a round is
a fixed small number of numpy operations. `run_many` executes independent
(instance, seed) runs side by side; each run's agents draw from streams
keyed by its own seed, so batched results are identical to standalone runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import agents
from .core import (
    CHANNEL_BAND,
    KSAT,
    NOT_EQUAL,
    NOT_EQUAL_ON_CHANNEL,
    Clause,
    CspInstance,
)

SOLVED = "solved"
CAP_EXCEEDED = "cap-exceeded"

DEFAULT_CAP = 10_000_000

# Parameter defaults: a = b, with b chosen per problem family.
_FAMILY_B = {
    "ksat3": 0.2,
    "ksat4": 0.1,
    "ksat5": 0.05,
    "coloring": 0.1,
    "wireless": 0.1,
    "spectrum": 0.1,
    "scheduling": 0.1,
    "coding": 0.1,
}


class EngineFault(RuntimeError):
    """Internal consistency failure (e.g. probability mass drifted)."""


@dataclass(frozen=True)
class CflParams:
    """Design parameters: a is the aversion to a failed value, b the
    forgetting rate. Both must lie in (0, 1]."""

    a: float
    b: float

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"parameter a must be in (0, 1], got {self.a}")
        if not 0.0 < self.b <= 1.0:
            raise ValueError(f"parameter b must be in (0, 1], got {self.b}")


def default_params(family: str, k: int | None = None) -> CflParams:
    """Per-family default parameters (a = b)."""
    key = family
    if family == "ksat":
        key = f"ksat{k}" if k in (3, 4, 5) else "ksat4"
    b = _FAMILY_B.get(key, 0.1)
    return CflParams(b, b)


def gamma(params: CflParams, domain_size: int) -> float:
    """Entrywise floor on non-point-mass probabilities: min(a,b)/(D-1+a/b)."""
    if domain_size < 1:
        raise ValueError("domain_size must be >= 1")
    return min(params.a, params.b) / (domain_size - 1 + params.a / params.b)


def convergence_bound_log(N: int, gamma_value: float, epsilon: float, kind: str) -> float:
    """Natural log of the iteration bound that holds with probability 1-epsilon.

    kind "general" uses exponent N(N+1)/2, kind "coloring" the tighter 2N.
    Returned in log space; the raw bound overflows for modest N.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if not 0.0 < gamma_value < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1)")
    if kind == "general":
        exponent = N * (N + 1) / 2.0
    elif kind == "coloring":
        exponent = 2.0 * N
    else:
        raise ValueError(f"kind must be 'general' or 'coloring', got {kind!r}")
    return math.log(N) + exponent * math.log(1.0 / gamma_value) + math.log(math.log(1.0 / epsilon))


@dataclass(frozen=True)
class AgentState:
    """Snapshot of one agent: distribution, last sampled value, lock status."""

    p: tuple[float, ...]
    value: int | None
    point_mass: bool


@dataclass(frozen=True)
class TraceRound:
    t: int
    unsat_count: int
    signal_bits: int  # bit i set = variable i satisfied


@dataclass(frozen=True)
class RoundReport:
    t: int
    assignment: tuple[int, ...]
    signals: tuple[bool, ...]
    solved: bool


@dataclass(frozen=True)
class RunResult:
    outcome: str
    tau: int | None
    assignment: tuple[int, ...] | None
    rounds: int
    trace: tuple[TraceRound, ...] | None = None

    @property
    def solved(self) -> bool:
        return self.outcome == SOLVED


def format_trace_line(rec: TraceRound, num_variables: int) -> str:
    """Line-delimited trace record: round, unsatisfied count, signal bitset."""
    width = max(1, (num_variables + 3) // 4)
    return f"{rec.t} {rec.unsat_count} {rec.signal_bits:0{width}x}"


# ---------------------------------------------------------------------------
# Instance compilation


class _Compiled:
    """Flat, variable-relative arrays for one instance, grouped by clause kind."""

    def __init__(self, instance: CspInstance):
        self.instance = instance
        self.num_vars = instance.num_variables
        self.num_clauses = instance.num_clauses
        self.domains = np.asarray(instance.domain_sizes, dtype=np.int64)

        ks_vars: list[int] = []
        ks_neg: list[bool] = []
        ks_len: list[int] = []
        ks_pos: list[int] = []
        ne_u: list[int] = []
        ne_v: list[int] = []
        ne_pos: list[int] = []
        nc_u: list[int] = []
        nc_v: list[int] = []
        nc_c: list[int] = []
        nc_pos: list[int] = []
        bd_owner: list[int] = []
        bd_nbr: list[int] = []
        bd_sep: list[int] = []
        bd_len: list[int] = []
        bd_pos: list[int] = []
        py: list[tuple[int, Clause, np.ndarray]] = []

        for cid, clause in enumerate(instance.clauses):
            if clause.kind == KSAT:
                ks_vars.extend(clause.scope)
                ks_neg.extend(clause.negated)
                ks_len.append(len(clause.scope))
                ks_pos.append(cid)
            elif clause.kind == NOT_EQUAL:
                ne_u.append(clause.scope[0])
                ne_v.append(clause.scope[1])
                ne_pos.append(cid)
            elif clause.kind == NOT_EQUAL_ON_CHANNEL:
                nc_u.append(clause.scope[0])
                nc_v.append(clause.scope[1])
                nc_c.append(clause.channel)
                nc_pos.append(cid)
            elif clause.kind == CHANNEL_BAND:
                owner = clause.scope[0]
                for nbr in clause.scope[1:]:
                    bd_owner.append(owner)
                    bd_nbr.append(nbr)
                    bd_sep.append(clause.min_separation)
                bd_len.append(len(clause.scope) - 1)
                bd_pos.append(cid)
            else:  # gf2-realizability, custom: per-clause evaluation
                py.append((cid, clause, np.asarray(clause.scope, dtype=np.int64)))

        self.ks_vars = np.asarray(ks_vars, dtype=np.int64)
        self.ks_neg = np.asarray(ks_neg, dtype=bool)
        self.ks_len = np.asarray(ks_len, dtype=np.int64)
        self.ks_pos = np.asarray(ks_pos, dtype=np.int64)
        self.ne_u = np.asarray(ne_u, dtype=np.int64)
        self.ne_v = np.asarray(ne_v, dtype=np.int64)
        self.ne_pos = np.asarray(ne_pos, dtype=np.int64)
        self.nc_u = np.asarray(nc_u, dtype=np.int64)
        self.nc_v = np.asarray(nc_v, dtype=np.int64)
        self.nc_c = np.asarray(nc_c, dtype=np.int32)
        self.nc_pos = np.asarray(nc_pos, dtype=np.int64)
        self.bd_owner = np.asarray(bd_owner, dtype=np.int64)
        self.bd_nbr = np.asarray(bd_nbr, dtype=np.int64)
        self.bd_sep = np.asarray(bd_sep, dtype=np.int32)
        self.bd_len = np.asarray(bd_len, dtype=np.int64)
        self.bd_pos = np.asarray(bd_pos, dtype=np.int64)
        self.py_clauses = py

        self.part_idx = np.asarray(
            [m for ms in instance.participation for m in ms], dtype=np.int64
        )
        self.part_len = np.asarray(
            [len(ms) for ms in instance.participation], dtype=np.int64
        )
        derived = [set() for _ in range(instance.num_variables)]
        for cid, clause in enumerate(instance.clauses):
            for v in clause.scope:
                derived[v].add(cid)
        self.part_is_scope = all(
            tuple(sorted(s)) == ms for s, ms in zip(derived, instance.participation)
        )


class _Segments:
    """reduceat-based AND/OR over variable-length segments of a byte buffer.

    The buffer must have one sentinel byte past `total`; reduceat indices of
    empty segments are capped there and their output overwritten.
    """

    def __init__(self, starts: np.ndarray, total: int, empty_value: int):
        self.empty_value = empty_value
        self.empty = starts[:-1] == starts[1:]
        self.idx = np.minimum(starts[:-1], total)
        self.count = len(starts) - 1

    def reduce_all(self, buf: np.ndarray) -> np.ndarray:
        if self.count == 0:
            return np.empty(0, dtype=np.uint8)
        out = np.minimum.reduceat(buf, self.idx)
        if self.empty.any():
            out[self.empty] = self.empty_value
        return out

    def reduce_any(self, buf: np.ndarray) -> np.ndarray:
        if self.count == 0:
            return np.empty(0, dtype=np.uint8)
        out = np.maximum.reduceat(buf, self.idx)
        if self.empty.any():
            out[self.empty] = self.empty_value
        return out


def _starts_from_lengths(lengths: np.ndarray) -> np.ndarray:
    starts = np.zeros(len(lengths) + 1, dtype=np.int64)
    np.cumsum(lengths, out=starts[1:])
    return starts


class _BatchState:
    """Agent arrays plus assembled clause arrays for one or more sub-runs."""

    def __init__(self, subs: list[tuple[_Compiled, int]], params: CflParams):
        self.subs = subs
        self.params = params
        self._assemble()

    # -- construction -----------------------------------------------------

    def _assemble(self) -> None:
        comps = [c for c, _ in self.subs]
        self.var_starts = _starts_from_lengths(
            np.asarray([c.num_vars for c in comps], dtype=np.int64)
        )
        self.clause_starts = _starts_from_lengths(
            np.asarray([c.num_clauses for c in comps], dtype=np.int64)
        )
        self.num_vars = int(self.var_starts[-1])
        self.num_clauses = int(self.clause_starts[-1])

        self.domains = np.concatenate([c.domains for c in comps])
        self.dom_minus1 = self.domains - 1
        dmax = int(self.domains.max())
        self.dmax = dmax

        a, b = self.params.a, self.params.b
        z = (self.domains - 1).astype(np.float64) + a / b
        self.coef = 1.0 - b
        self.add_self = a / z
        col = np.arange(dmax, dtype=np.int64)
        mask = col[None, :] < self.domains[:, None]
        self.add_other = np.where(mask, (b / z)[:, None], 0.0)
        self.domain_mask = mask

        def cat(parts: list[np.ndarray], off: np.ndarray | None = None) -> np.ndarray:
            if not parts:
                return np.empty(0, dtype=np.int64)
            if off is None:
                return np.concatenate(parts)
            return np.concatenate([p + o for p, o in zip(parts, off)])

        voff = self.var_starts[:-1]
        coff = self.clause_starts[:-1]

        self.ks_vars = cat([c.ks_vars for c in comps], voff)
        self.ks_neg = (
            np.concatenate([c.ks_neg for c in comps])
            if any(c.ks_neg.size for c in comps)
            else np.empty(0, dtype=bool)
        )
        self.ks_pos = cat([c.ks_pos for c in comps], coff)
        ks_len = cat([c.ks_len for c in comps])
        self.ks_seg = _Segments(_starts_from_lengths(ks_len), len(self.ks_vars), 0)
        # Sentinel byte past the data must be the reduction's identity:
        # reduceat's final segment extends to the end of the buffer.
        self.ks_buf = np.zeros(len(self.ks_vars) + 1, dtype=bool)

        self.ne_u = cat([c.ne_u for c in comps], voff)
        self.ne_v = cat([c.ne_v for c in comps], voff)
        self.ne_pos = cat([c.ne_pos for c in comps], coff)

        self.nc_u = cat([c.nc_u for c in comps], voff)
        self.nc_v = cat([c.nc_v for c in comps], voff)
        self.nc_c = (
            np.concatenate([c.nc_c for c in comps])
            if any(c.nc_c.size for c in comps)
            else np.empty(0, dtype=np.int32)
        )
        self.nc_pos = cat([c.nc_pos for c in comps], coff)

        self.bd_owner = cat([c.bd_owner for c in comps], voff)
        self.bd_nbr = cat([c.bd_nbr for c in comps], voff)
        self.bd_sep = (
            np.concatenate([c.bd_sep for c in comps])
            if any(c.bd_sep.size for c in comps)
            else np.empty(0, dtype=np.int32)
        )
        self.bd_pos = cat([c.bd_pos for c in comps], coff)
        bd_len = cat([c.bd_len for c in comps])
        self.bd_seg = _Segments(_starts_from_lengths(bd_len), len(self.bd_owner), 1)
        self.bd_buf = np.ones(len(self.bd_owner) + 1, dtype=bool)

        self.py_clauses = []
        for (comp, _), vo, co in zip(self.subs, voff, coff):
            for cid, clause, scope in comp.py_clauses:
                self.py_clauses.append((int(cid + co), clause, scope + vo))

        self.part_idx = cat([c.part_idx for c in comps], coff)
        part_len = cat([c.part_len for c in comps])
        self.part_seg = _Segments(_starts_from_lengths(part_len), len(self.part_idx), 1)
        self.part_buf = np.ones(len(self.part_idx) + 1, dtype=np.uint8)

        self.sub_seg = _Segments(self.clause_starts, self.num_clauses, 1)
        self.clause_buf = np.ones(self.num_clauses + 1, dtype=np.uint8)

        self.rows = np.arange(self.num_vars)
        self._ublock: np.ndarray | None = None
        self._ublock_t0 = 0

        # Fast paths. Per-clause OR via many-segment reduceat is slow; with a
        # uniform literal width the literals live in a (k, M) matrix and the
        # OR is k-1 contiguous row operations. Per-variable signals can be
        # scattered from the unsatisfied clause list (cost shrinks as the
        # batch converges) whenever declared participation is exactly scope
        # membership and every clause kind keeps fixed-width member arrays.
        ks_widths = {int(w) for comp in comps for w in np.unique(comp.ks_len)}
        self.ks_matrix: np.ndarray | None = None
        self.ks_neg_matrix: np.ndarray | None = None
        if self.ks_pos.size and len(ks_widths) == 1:
            k = ks_widths.pop()
            self.ks_matrix = np.ascontiguousarray(
                self.ks_vars.reshape(-1, k).T
            )
            self.ks_neg_matrix = np.ascontiguousarray(self.ks_neg.reshape(-1, k).T)
        self.bd_pairwise = bool(self.bd_pos.size) and bool((bd_len == 1).all())
        self._ks_sat: np.ndarray | None = None
        self._ne_sat: np.ndarray | None = None
        self._nc_sat: np.ndarray | None = None
        self._bd_sat: np.ndarray | None = None
        self.fast_signals = (
            all(comp.part_is_scope for comp in comps)
            and (not self.bd_pos.size or self.bd_pairwise)
            and not self.py_clauses
            and (not self.ks_pos.size or self.ks_matrix is not None)
        )

    @classmethod
    def fresh(cls, subs: list[tuple[_Compiled, int]], params: CflParams) -> "_BatchState":
        state = cls(subs, params)
        state.keys = np.concatenate(
            [agents.stream_keys(seed, comp.num_vars) for comp, seed in subs]
        )
        state.P = np.zeros((state.num_vars, state.dmax), dtype=np.float64)
        state.P[state.domain_mask] = np.repeat(
            1.0 / state.domains.astype(np.float64), state.domains
        )
        state.point_mass = np.zeros(state.num_vars, dtype=bool)
        state.x_last = np.zeros(state.num_vars, dtype=np.int32)
        return state

    def compact(self, keep: Sequence[int]) -> "_BatchState":
        """New state containing only the listed sub-runs, agent state preserved."""
        new = _BatchState([self.subs[i] for i in keep], self.params)
        sel = np.concatenate(
            [np.arange(self.var_starts[i], self.var_starts[i + 1]) for i in keep]
        )
        new.keys = self.keys[sel]
        # Column count may shrink when the widest-domain sub left the batch.
        new.P = np.ascontiguousarray(self.P[sel][:, : new.dmax])
        new.point_mass = self.point_mass[sel]
        new.x_last = self.x_last[sel]
        return new

    # -- one synchronous round ---------------------------------------------

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        """All clause bits under sampled assignment x (values are 1-based)."""
        buf = self.clause_buf
        if self.ks_pos.size:
            # Gather byte-wide truth values instead of the assignment itself.
            truth = x == 2
            if self.ks_matrix is not None:
                lit = truth[self.ks_matrix] != self.ks_neg_matrix
                sat = lit[0].copy()
                for j in range(1, lit.shape[0]):
                    sat |= lit[j]
                self._ks_sat = sat
                buf[self.ks_pos] = sat
            else:
                np.not_equal(truth[self.ks_vars], self.ks_neg, out=self.ks_buf[:-1])
                buf[self.ks_pos] = self.ks_seg.reduce_any(self.ks_buf)
        if self.ne_pos.size:
            self._ne_sat = x[self.ne_u] != x[self.ne_v]
            buf[self.ne_pos] = self._ne_sat
        if self.nc_pos.size:
            self._nc_sat = ~((x[self.nc_u] == self.nc_c) & (x[self.nc_v] == self.nc_c))
            buf[self.nc_pos] = self._nc_sat
        if self.bd_pos.size:
            if self.bd_pairwise:
                self._bd_sat = (
                    np.abs(x[self.bd_owner] - x[self.bd_nbr]) >= self.bd_sep
                )
                buf[self.bd_pos] = self._bd_sat
            else:
                np.greater_equal(
                    np.abs(x[self.bd_owner] - x[self.bd_nbr]),
                    self.bd_sep,
                    out=self.bd_buf[:-1],
                )
                buf[self.bd_pos] = self.bd_seg.reduce_all(self.bd_buf)
        for cid, clause, scope in self.py_clauses:
            buf[cid] = clause.evaluate(tuple(int(v) for v in x[scope]))
        return buf

    def _signals_fast(self) -> np.ndarray:
        """Per-variable bits by scattering the unsatisfied clauses' scopes."""
        var_sat = np.ones(self.num_vars, dtype=bool)
        if self._ks_sat is not None and self._ks_sat.size:
            bad = np.flatnonzero(~self._ks_sat)
            if bad.size:
                var_sat[self.ks_matrix[:, bad].ravel()] = False
        if self._ne_sat is not None and self._ne_sat.size:
            bad = np.flatnonzero(~self._ne_sat)
            if bad.size:
                var_sat[self.ne_u[bad]] = False
                var_sat[self.ne_v[bad]] = False
        if self._nc_sat is not None and self._nc_sat.size:
            bad = np.flatnonzero(~self._nc_sat)
            if bad.size:
                var_sat[self.nc_u[bad]] = False
                var_sat[self.nc_v[bad]] = False
        if self._bd_sat is not None and self._bd_sat.size:
            bad = np.flatnonzero(~self._bd_sat)
            if bad.size:
                var_sat[self.bd_owner[bad]] = False
                var_sat[self.bd_nbr[bad]] = False
        return var_sat

    _UBLOCK = 32

    def _uniforms(self, t: int) -> np.ndarray:
        block = self._ublock
        if block is None or not (self._ublock_t0 <= t < self._ublock_t0 + len(block)):
            block = agents.round_uniforms_block(self.keys, t, self._UBLOCK)
            self._ublock = block
            self._ublock_t0 = t
        return block[t - self._ublock_t0]

    def do_round(self, t: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Sample, evaluate jointly, update. Returns (x, var_sat, sub_solved)."""
        u = self._uniforms(t)
        x0 = agents.sample_columns(self.P, u, self.dom_minus1)
        x = (x0 + 1).astype(np.int32)
        buf = self.evaluate(x)
        if self.fast_signals:
            var_sat = self._signals_fast()
        else:
            self.part_buf[: self.part_idx.size] = buf[self.part_idx]
            var_sat = self.part_seg.reduce_all(self.part_buf).view(bool)
        sub_ok = self.sub_seg.reduce_all(buf)
        agents.advance_probabilities(
            self.P, x0, var_sat, self.coef, self.add_other, self.add_self, self.rows
        )
        self.point_mass = var_sat
        self.x_last = x
        return x, var_sat, sub_ok

    def check_drift(self, tolerance: float = 1e-9) -> None:
        drift = np.abs(self.P.sum(axis=1) - 1.0).max() if self.num_vars else 0.0
        if drift > tolerance:
            raise EngineFault(f"probability mass drifted by {drift:.3e}")

    def sub_assignment(self, i: int) -> tuple[int, ...]:
        lo, hi = int(self.var_starts[i]), int(self.var_starts[i + 1])
        return tuple(int(v) for v in self.x_last[lo:hi])


class CflEngine:
    """Single-instance solver state: build with an instance, params and seed.

    The engine is single-owner mutable; distinct engines are independent.
    Identical (instance, params, seed) always reproduce the same rounds.
    """

    def __init__(self, instance: CspInstance, params: CflParams, seed: int):
        if any(d < 1 for d in instance.domain_sizes):
            raise ValueError("all domains must have at least one value")
        self.instance = instance
        self.params = params
        self.seed = seed
        self.t = 0
        self._tau: int | None = None
        self._state = _BatchState.fresh([(_Compiled(instance), seed)], params)
        self._last_signals: tuple[bool, ...] | None = None

    # -- views --------------------------------------------------------------

    @property
    def round(self) -> int:
        return self.t

    @property
    def tau(self) -> int | None:
        return self._tau

    @property
    def assignment(self) -> tuple[int, ...] | None:
        if self.t == 0:
            return None
        return tuple(int(v) for v in self._state.x_last)

    @property
    def signals(self) -> tuple[bool, ...] | None:
        return self._last_signals

    def probabilities(self) -> np.ndarray:
        """Copy of the (N, Dmax) probability matrix; padded columns are zero."""
        return self._state.P.copy()

    def point_mass_flags(self) -> np.ndarray:
        return self._state.point_mass.copy()

    def agent_states(self) -> list[AgentState]:
        out = []
        for i in range(self.instance.num_variables):
            d = self.instance.domain_sizes[i]
            p = tuple(float(v) for v in self._state.P[i, :d])
            value = int(self._state.x_last[i]) if self.t > 0 else None
            out.append(AgentState(p, value, bool(self._state.point_mass[i])))
        return out

    # -- dynamics -------------------------------------------------------------

    def step(self) -> RoundReport:
        """One synchronous round; returns what the round sampled and signalled."""
        t = self.t
        x, var_sat, sub_ok = self._state.do_round(t)
        self._state.check_drift()
        self.t = t + 1
        solved = bool(sub_ok[0])
        if solved and self._tau is None:
            self._tau = t
        self._last_signals = tuple(bool(s) for s in var_sat)
        return RoundReport(
            t=t,
            assignment=tuple(int(v) for v in x),
            signals=self._last_signals,
            solved=solved,
        )

    def run(self, cap: int = DEFAULT_CAP, trace: bool = False, check_every: int = 64) -> RunResult:
        """Round until the sampled assignment satisfies every clause or t = cap.

        cap is the total number of rounds this engine may have executed; a
        cap-exceeded result leaves the state intact, so calling run again
        with a larger cap resumes the search.
        """
        if cap < 1:
            raise ValueError("cap must be >= 1")
        records: list[TraceRound] = []
        if self._tau is not None:
            return RunResult(SOLVED, self._tau, self.assignment, self.t, tuple(records) if trace else None)
        state = self._state
        while self.t < cap:
            t = self.t
            x, var_sat, sub_ok = state.do_round(t)
            self.t = t + 1
            if trace:
                bits = 0
                for i, s in enumerate(var_sat):
                    if s:
                        bits |= 1 << i
                records.append(TraceRound(t, int(len(var_sat) - var_sat.sum()), bits))
            if self.t % check_every == 0:
                state.check_drift()
            if sub_ok[0]:
                self._tau = t
                self._last_signals = tuple(bool(s) for s in var_sat)
                return RunResult(
                    SOLVED, t, tuple(int(v) for v in x), self.t, tuple(records) if trace else None
                )
        state.check_drift()
        return RunResult(
            CAP_EXCEEDED,
            None,
            self.assignment,
            self.t,
            tuple(records) if trace else None,
        )

    def replace_instance(self, instance: CspInstance) -> None:
        """Swap the clause structure under the live agents.

        Variable count and domains must match. Agents keep their current
        distributions; if the new clauses break the absorbed assignment the
        affected agents will leave their point mass and search resumes.
        """
        if instance.num_variables != self.instance.num_variables:
            raise ValueError("replacement instance must keep the variable count")
        if instance.domain_sizes != self.instance.domain_sizes:
            raise ValueError("replacement instance must keep the domains")
        old = self._state
        self.instance = instance
        self._state = _BatchState([(_Compiled(instance), self.seed)], self.params)
        self._state.keys = old.keys
        self._state.P = old.P
        self._state.point_mass = old.point_mass
        self._state.x_last = old.x_last
        self._tau = None


def run_many(
    tasks: Sequence[tuple[CspInstance, int]],
    params: CflParams,
    cap: int = DEFAULT_CAP,
    compact_every: int = 512,
    check_every: int = 256,
) -> list[RunResult]:
    """Run independent (instance, seed) pairs side by side.

    Results are identical to running each task in its own engine: agent
    streams are keyed by each task's seed, not by batch position. Solved
    runs are removed from the working arrays periodically so stragglers do
    not pay for finished work.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if not tasks:
        return []
    compiled = [(_Compiled(inst), seed) for inst, seed in tasks]
    state = _BatchState.fresh(compiled, params)
    original = list(range(len(tasks)))
    results: list[RunResult | None] = [None] * len(tasks)
    solved_local: set[int] = set()
    t = 0
    while t < cap and len(solved_local) < len(original):
        _, _, sub_ok = state.do_round(t)
        for i in np.flatnonzero(sub_ok):
            i = int(i)
            if i not in solved_local:
                solved_local.add(i)
                results[original[i]] = RunResult(
                    SOLVED, t, state.sub_assignment(i), t + 1
                )
        t += 1
        if t % check_every == 0:
            state.check_drift()
        if solved_local and t % compact_every == 0 and len(solved_local) < len(original):
            keep = [i for i in range(len(original)) if i not in solved_local]
            state = state.compact(keep)
            original = [original[i] for i in keep]
            solved_local = set()
    state.check_drift()
    if len(solved_local) < len(original):
        for i in range(len(original)):
            if i not in solved_local:
                results[original[i]] = RunResult(
                    CAP_EXCEEDED, None, state.sub_assignment(i), cap
                )
    return results  # type: ignore[return-value]
