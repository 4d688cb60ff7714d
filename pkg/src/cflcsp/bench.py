"""Seeded experiment harness: sweeps, stopping-time statistics, CSV emission.

Every seed is derived from the master seed and the record's coordinates, so
a sweep is reproducible record for record no matter how the work is split
across processes. Records are emitted in canonical order (grid point, then
solver, then trial). Wall times are recorded only on request because they
would break byte-identical reruns.

Quantiles use the nearest-rank convention: the q-quantile of n values is
the value at 1-based rank ceil(q * n). Runs that hit the iteration cap are
censored: they sit above every solved value, and any quantile whose rank
lands on them is reported as censored ("> cap") rather than numeric.
"""

from __future__ import annotations

import hashlib
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import baseline
from .encoders.ksat import clauses_for_ratio, random_ksat
from .encoders.spectrum import (
    DEFAULT_BAND_RULES,
    DEFAULT_CHANNEL_COUNT,
    BandRule,
    Deployment,
    spectrum_instance,
)
from .engine import CflEngine, CflParams, default_params, run_many

CSV_HEADER = "family,n,m,k,D,solver,a,b,seed,outcome,tau,normalized_tau,wall_ms"


def derive_seed(*parts) -> int:
    """Stable 64-bit seed from a master seed and arbitrary labels."""
    digest = hashlib.sha256(":".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _grid(start: float, stop: float, step: float) -> tuple[float, ...]:
    out = []
    v = start
    while v <= stop + 1e-9:
        out.append(round(v, 10))
        v += step
    return tuple(out)


# Named sweep presets. The desk variants shrink the grids to n <= 200,
# 200 trials per point and a 1e6-round cap; the full variants restore the
# 1000-trial, 1e7-cap scale. Explicit CLI flags override preset values.
PRESETS: dict[str, dict] = {
    "k3-desk": dict(k=3, n_values=(100,), r_values=_grid(2.0, 4.2, 0.2), trials=200, cap=1_000_000),
    "k3-full": dict(k=3, n_values=(100,), r_values=_grid(2.0, 4.2, 0.2), trials=1000, cap=10_000_000),
    "k4-desk": dict(k=4, n_values=(100,), r_values=_grid(5.0, 9.9, 0.7), trials=200, cap=1_000_000),
    "k4-full": dict(k=4, n_values=(100,), r_values=_grid(5.0, 9.9, 0.35), trials=1000, cap=10_000_000),
    "k5-desk": dict(k=5, n_values=(100,), r_values=_grid(12.0, 21.0, 1.5), trials=200, cap=1_000_000),
    "k5-full": dict(k=5, n_values=(100,), r_values=_grid(12.0, 21.1, 0.7), trials=1000, cap=10_000_000),
    "k3-size-desk": dict(k=3, n_values=(50, 100, 200), r_values=(4.0,), trials=200, cap=1_000_000),
    "k3-size-full": dict(k=3, n_values=(50, 100, 200, 500, 1000), r_values=(4.0,), trials=1000, cap=10_000_000),
}


@dataclass(frozen=True)
class TrialRecord:
    family: str
    n: int
    m: int
    k: int | None
    D: int
    solver: str
    a: float | None
    b: float | None
    seed: int
    outcome: str
    tau: int | None
    normalized_tau: float | None
    wall_ms: float | None = None


@dataclass(frozen=True)
class SolverSpec:
    """A solver to run in a sweep; a/b apply to cfl, noise to walksat."""

    name: str
    a: float | None = None
    b: float | None = None
    noise: float = 0.5

    def __post_init__(self):
        if self.name not in ("cfl", "schoening", "walksat"):
            raise ValueError(f"unknown solver {self.name!r}")

    @property
    def label(self) -> str:
        return self.name

    def cfl_params(self, family: str, k: int | None) -> CflParams:
        if self.a is not None and self.b is not None:
            return CflParams(self.a, self.b)
        base = default_params(family, k)
        return CflParams(self.a or base.a, self.b or base.b)


@dataclass(frozen=True)
class SweepConfig:
    """Grid sweep over random k-SAT: n and density r, per-solver trials."""

    n_values: tuple[int, ...]
    r_values: tuple[float, ...]
    solvers: tuple[SolverSpec, ...]
    trials: int
    cap: int
    master_seed: int
    k: int = 3
    family: str = "ksat"
    record_timings: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.n_values or not self.r_values or not self.solvers:
            raise ValueError("grid and solver list must be non-empty")

    @property
    def points(self) -> list[tuple[int, float]]:
        return [(n, r) for n in self.n_values for r in self.r_values]


def _run_chunk(
    cfg: SweepConfig, point_index: int, solver_index: int, lo: int, hi: int
) -> list[TrialRecord]:
    """Records for trials lo..hi-1 of one (grid point, solver) pair.

    Every record is a pure function of its coordinates, so chunk boundaries
    (and therefore the jobs setting) cannot change the output.
    """
    n, r = cfg.points[point_index]
    m = clauses_for_ratio(n, r)
    solver = cfg.solvers[solver_index]
    trials = range(lo, hi)
    instances = [
        random_ksat(n, m, cfg.k, derive_seed(cfg.master_seed, "inst", point_index, trial))
        for trial in trials
    ]
    seeds = [
        derive_seed(cfg.master_seed, "run", solver.label, point_index, trial)
        for trial in trials
    ]
    records = []
    if solver.name == "cfl":
        params = solver.cfl_params(cfg.family, cfg.k)
        if cfg.record_timings:
            outcomes = []
            for inst, seed in zip(instances, seeds):
                start = time.perf_counter()
                res = CflEngine(inst, params, seed).run(cfg.cap)
                outcomes.append((res, (time.perf_counter() - start) * 1e3))
        else:
            outcomes = [
                (res, None)
                for res in run_many(list(zip(instances, seeds)), params, cfg.cap)
            ]
        for seed, (res, wall) in zip(seeds, outcomes):
            records.append(
                TrialRecord(
                    cfg.family, n, m, cfg.k, 2, solver.label, params.a, params.b,
                    seed, res.outcome, res.tau,
                    None if res.tau is None else res.tau / n, wall,
                )
            )
    else:
        for inst, seed in zip(instances, seeds):
            start = time.perf_counter()
            if solver.name == "walksat":
                res = baseline.walksat(inst, seed, cfg.cap, noise=solver.noise)
            else:
                res = baseline.schoening_walk(inst, seed, cfg.cap)
            wall = (time.perf_counter() - start) * 1e3 if cfg.record_timings else None
            flips = res.flips if res.solved else None
            records.append(
                TrialRecord(
                    cfg.family, n, m, cfg.k, 2, solver.label, None, None,
                    seed, res.outcome, flips,
                    None if flips is None else flips / n, wall,
                )
            )
    return records


def run_sweep(cfg: SweepConfig, jobs: int = 1, skip: int = 0) -> list[TrialRecord]:
    """All trial records in canonical order: grid point, then solver, then trial.

    skip drops the first `skip` records (resume support); whole chunks that
    fall inside the skipped prefix are not recomputed. With jobs > 1 the
    trials of each point are split across workers; the output is identical
    either way.
    """
    per_chunk = cfg.trials if jobs <= 1 else max(1, -(-cfg.trials // (jobs * 4)))
    chunks: list[tuple[int, int, int, int]] = []
    for p in range(len(cfg.points)):
        for s in range(len(cfg.solvers)):
            for lo in range(0, cfg.trials, per_chunk):
                chunks.append((p, s, lo, min(lo + per_chunk, cfg.trials)))
    produced_before = 0
    needed = []
    for p, s, lo, hi in chunks:
        base = (p * len(cfg.solvers) + s) * cfg.trials
        if base + hi > skip:
            needed.append((p, s, lo, hi))
        else:
            produced_before += hi - lo
    if jobs > 1 and len(needed) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_chunk, [cfg] * len(needed), *zip(*needed)))
    else:
        results = [_run_chunk(cfg, *chunk) for chunk in needed]
    records: list[TrialRecord] = []
    for recs in results:
        records.extend(recs)
    drop = skip - produced_before
    return records[drop:] if drop > 0 else records


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def records_to_csv(records: Iterable[TrialRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                _fmt(v)
                for v in (
                    r.family, r.n, r.m, r.k, r.D, r.solver, r.a, r.b,
                    r.seed, r.outcome, r.tau, r.normalized_tau, r.wall_ms,
                )
            )
        )
    return "\n".join(lines) + "\n"


def write_csv(records: Iterable[TrialRecord], path: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(records_to_csv(records))


@dataclass(frozen=True)
class PointSummary:
    runs: int
    solved: int
    success_rate: float
    median: float | None
    median_censored: bool
    q05: float | None
    q05_censored: bool
    q95: float | None
    q95_censored: bool
    mean_solved: float | None

    def describe_median(self, cap: int | None = None) -> str:
        if self.median_censored:
            return f"> {cap}" if cap is not None else "censored"
        return repr(self.median)


def _quantile(sorted_solved: list[float], total: int, q: float) -> tuple[float | None, bool]:
    rank = max(1, math.ceil(q * total))
    if rank > len(sorted_solved):
        return None, True  # rank lands on a censored run
    return sorted_solved[rank - 1], False


def summarize_values(values: Sequence[float | None]) -> PointSummary:
    """Stats over one point's trial values; None marks a censored run."""
    if not values:
        raise ValueError("no records to summarize")
    total = len(values)
    solved = sorted(v for v in values if v is not None)
    median, med_c = _quantile(solved, total, 0.5)
    q05, q05_c = _quantile(solved, total, 0.05)
    q95, q95_c = _quantile(solved, total, 0.95)
    return PointSummary(
        runs=total,
        solved=len(solved),
        success_rate=len(solved) / total,
        median=median,
        median_censored=med_c,
        q05=q05,
        q05_censored=q05_c,
        q95=q95,
        q95_censored=q95_c,
        mean_solved=(sum(solved) / len(solved)) if solved else None,
    )


def group_key(record: TrialRecord) -> tuple:
    return (record.family, record.n, record.m, record.k, record.D, record.solver)


def summarize(
    records: Sequence[TrialRecord], normalized: bool = False
) -> dict[tuple, PointSummary]:
    """Per-point summaries keyed by (family, n, m, k, D, solver)."""
    groups: dict[tuple, list[float | None]] = {}
    for r in records:
        value = r.normalized_tau if normalized else r.tau
        groups.setdefault(group_key(r), []).append(
            None if value is None else float(value)
        )
    return {key: summarize_values(vals) for key, vals in groups.items()}


def ccdf(records: Sequence[TrialRecord]) -> list[tuple[int, float]]:
    """Empirical survival series: (threshold, fraction of runs with tau > threshold).

    Censored runs exceeded the cap and count as above every threshold.
    """
    taus = [r.tau for r in records if r.tau is not None]
    censored = sum(1 for r in records if r.tau is None)
    if not taus:
        raise ValueError("ccdf needs at least one solved record")
    total = len(taus) + censored
    thresholds = sorted({0, *taus})
    series = []
    for t in thresholds:
        above = sum(1 for v in taus if v > t) + censored
        series.append((t, above / total))
    return series


@dataclass(frozen=True)
class CaseStudyResult:
    records: tuple[TrialRecord, ...]
    summary: PointSummary
    channel_map: tuple[int, ...] | None


def case_study(
    dep: Deployment,
    trials: int,
    seed: int,
    params: CflParams | None = None,
    cap: int = 100_000,
    rules: Sequence[BandRule] = DEFAULT_BAND_RULES,
    channels: int = DEFAULT_CHANNEL_COUNT,
) -> CaseStudyResult:
    """Repeated solver runs on one spectrum-assignment deployment.

    Returns per-run records, raw-iteration summary statistics, and the
    channel map found by the last solved run.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    params = params or CflParams(0.1, 0.1)
    instance = spectrum_instance(dep, rules, channels)
    n = len(dep)
    seeds = [derive_seed(seed, "case", trial) for trial in range(trials)]
    results = run_many([(instance, s) for s in seeds], params, cap)
    records = []
    channel_map = None
    for run_seed, res in zip(seeds, results):
        records.append(
            TrialRecord(
                "spectrum", n, instance.num_clauses, None, channels, "cfl",
                params.a, params.b, run_seed, res.outcome, res.tau,
                None if res.tau is None else res.tau / n, None,
            )
        )
        if res.solved:
            channel_map = res.assignment
    summary = summarize_values([r.tau for r in records])
    return CaseStudyResult(tuple(records), summary, channel_map)
