"""Command-line interface.

Subcommands: solve, verify, generate, bench, case-study, bound.

Exit codes: 0 success / solved, 1 cap exceeded or invalid solution,
2 partial sweep output, 64 usage error, 65 input parse error.

All randomness flows from --seed; when the flag is absent a seed is drawn
from system entropy and printed so the run can be reproduced.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import baseline, bench, core, engine
from .core import CspInstance, ParseError, instance_from_json, instance_to_json, is_solution
from .encoders import (
    DEFAULT_BAND_RULES,
    DEFAULT_CHANNEL_COUNT,
    BandRule,
    InterferenceGraph,
    clauses_for_ratio,
    coloring_instance,
    emit_dimacs,
    neighbor_stats,
    parse_dimacs,
    parse_xyz,
    random_ksat,
    scheduling_instance,
    spectrum_instance,
    synthetic_deployment,
)

EXIT_OK = 0
EXIT_UNSOLVED = 1
EXIT_PARTIAL = 2
EXIT_USAGE = 64
EXIT_PARSE = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse failures to exit code 64
        raise UsageError(message)


def _ensure_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    seed = int.from_bytes(os.urandom(8), "big") >> 1
    print(f"seed: {seed}")
    return seed


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _load_instance(path: str) -> CspInstance:
    text = _read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return instance_from_json(text)
    return parse_dimacs(text)


def _solution_doc(solver: str, result_outcome: str, iterations: int | None,
                  assignment, seed: int, extra: dict) -> str:
    doc = {
        "format": "solution",
        "version": 1,
        "solver": solver,
        "outcome": result_outcome,
        "iterations": iterations,
        "assignment": None if assignment is None else list(assignment),
        "seed": seed,
    }
    doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def _cmd_solve(args) -> int:
    instance = _load_instance(args.input)
    seed = _ensure_seed(args.seed)
    trace_records = None
    if args.solver == "cfl":
        k = max((len(c.scope) for c in instance.clauses), default=None)
        family = "ksat" if all(c.kind == core.KSAT for c in instance.clauses) else "coloring"
        base = engine.default_params(family, k)
        params = engine.CflParams(args.a or base.a, args.b or base.b)
        eng = engine.CflEngine(instance, params, seed)
        result = eng.run(args.cap, trace=args.trace is not None)
        outcome, iterations, assignment = result.outcome, result.tau, result.assignment
        extra = {"a": params.a, "b": params.b}
        trace_records = result.trace
    elif args.solver in ("schoening", "walksat"):
        if args.solver == "schoening":
            walk = baseline.schoening_walk(instance, seed, args.cap)
            extra = {}
        else:
            walk = baseline.walksat(instance, seed, args.cap, noise=args.noise)
            extra = {"noise": args.noise}
        outcome = walk.outcome
        iterations = walk.flips if walk.solved else None
        assignment = walk.assignment
    else:
        raise UsageError(f"unknown solver {args.solver!r}")

    solved = outcome == engine.SOLVED
    if solved and not is_solution(instance, assignment):
        raise RuntimeError("internal error: claimed solution failed verification")
    doc = _solution_doc(args.solver, outcome, iterations, assignment if solved else None, seed, extra)
    if args.out:
        _write_text(args.out, doc)
    else:
        sys.stdout.write(doc)
    if args.trace is not None and trace_records is not None:
        lines = [engine.format_trace_line(r, instance.num_variables) for r in trace_records]
        _write_text(args.trace, "\n".join(lines) + ("\n" if lines else ""))
    if solved:
        print(f"solved in {iterations} iterations")
        return EXIT_OK
    print(f"no solution within cap {args.cap}")
    return EXIT_UNSOLVED


def _cmd_verify(args) -> int:
    instance = _load_instance(args.input)
    try:
        doc = json.loads(_read_text(args.solution))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid solution JSON: {exc}") from exc
    assignment = doc.get("assignment")
    if not isinstance(assignment, list):
        raise ParseError("solution document has no assignment")
    if is_solution(instance, assignment):
        print("VALID")
        return EXIT_OK
    print("INVALID")
    return EXIT_UNSOLVED


def _parse_edge_file(text: str) -> list[tuple[int, int]]:
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError("expected two vertex ids per line", lineno)
        try:
            edges.append((int(fields[0]), int(fields[1])))
        except ValueError:
            raise ParseError(f"invalid vertex id in {line!r}", lineno) from None
    return edges


def _cmd_generate(args) -> int:
    seed = _ensure_seed(args.seed)
    if args.family == "ksat":
        if args.n is None or args.k is None:
            raise UsageError("ksat generation needs --n and --k")
        if args.m is None and args.r is None:
            raise UsageError("ksat generation needs --m or --r")
        m = args.m if args.m is not None else clauses_for_ratio(args.n, args.r)
        instance = random_ksat(args.n, m, args.k, seed, distinct_clauses=args.distinct)
        text = emit_dimacs(instance)
    elif args.family == "coloring":
        if args.edges is None or args.domain is None:
            raise UsageError("coloring generation needs --edges and --D")
        edge_list = _parse_edge_file(_read_text(args.edges))
        n = args.n or (max((max(u, v) for u, v in edge_list), default=0) + 1)
        instance = coloring_instance(InterferenceGraph(n, tuple(edge_list)), args.domain)
        text = instance_to_json(instance, indent=2) + "\n"
    elif args.family == "scheduling":
        if args.n is None or args.slots is None:
            raise UsageError("scheduling generation needs --n and --slots")
        instance = scheduling_instance(args.n, args.slots)
        text = instance_to_json(instance, indent=2) + "\n"
    elif args.family == "spectrum":
        dep = _deployment_from_args(args, seed)
        instance = spectrum_instance(dep, _rules_from_args(args), args.domain or DEFAULT_CHANNEL_COUNT)
        text = instance_to_json(instance, indent=2) + "\n"
    elif args.family == "deployment":
        if args.n is None:
            raise UsageError("deployment generation needs --n")
        dep = synthetic_deployment(args.n, args.side, seed)
        text = "".join(f"{x} {y} {z}\n" for x, y, z in dep.points)
    else:
        raise UsageError(f"unknown family {args.family!r}")
    if args.out:
        _write_text(args.out, text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _rules_from_args(args) -> tuple[BandRule, ...]:
    if not getattr(args, "radius_rules", None):
        return DEFAULT_BAND_RULES
    rules = []
    for spec in args.radius_rules.split(","):
        try:
            radius, sep = spec.split(":")
            rules.append(BandRule(float(radius), int(sep)))
        except ValueError:
            raise UsageError(
                f"bad rule {spec!r}; expected radius:separation, e.g. 5:3"
            ) from None
    return tuple(rules)


def _deployment_from_args(args, seed: int):
    if getattr(args, "xyz", None):
        return parse_xyz(_read_text(args.xyz))
    if args.n is None:
        raise UsageError("need --xyz FILE or --n for a synthetic deployment")
    return synthetic_deployment(args.n, args.side, seed)


def _cmd_bench(args) -> int:
    seed = _ensure_seed(args.seed)
    preset = bench.PRESETS.get(args.preset, {}) if args.preset else {}
    n_values = tuple(args.n) if args.n else preset.get("n_values")
    r_values = tuple(args.r) if args.r else preset.get("r_values")
    if not n_values or not r_values:
        raise UsageError("need --n and --r (or a --preset providing them)")
    solvers = tuple(bench.SolverSpec(name, a=args.a, b=args.b, noise=args.noise)
                    for name in args.solver)
    cfg = bench.SweepConfig(
        n_values=n_values,
        r_values=r_values,
        solvers=solvers,
        trials=args.trials or preset.get("trials", 200),
        cap=args.cap or preset.get("cap", 1_000_000),
        master_seed=seed,
        k=args.k or preset.get("k", 3),
        record_timings=args.timings,
    )
    skip = 0
    if args.resume and args.out and os.path.exists(args.out):
        with open(args.out, "r", encoding="ascii") as fh:
            skip = max(0, sum(1 for _ in fh) - 1)
        print(f"resuming after {skip} records")
    try:
        records = bench.run_sweep(cfg, jobs=args.jobs, skip=skip)
    except Exception as exc:  # surface partial progress per the harness contract
        print(f"sweep failed: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    if args.format == "json":
        payload = json.dumps({"records": [r.__dict__ for r in records]}, indent=2) + "\n"
    else:
        payload = bench.records_to_csv(records)
    if args.out:
        if skip > 0 and args.format == "csv":
            with open(args.out, "a", encoding="ascii", newline="\n") as fh:
                fh.write("".join(line + "\n" for line in payload.splitlines()[1:]))
        else:
            _write_text(args.out, payload)
        print(f"wrote {len(records)} records to {args.out}")
    else:
        sys.stdout.write(payload)
    for key, stats in sorted(bench.summarize(records, normalized=True).items()):
        print(f"{key}: success {stats.success_rate:.3f} median(normalized) "
              f"{stats.describe_median(args.cap)}")
    return EXIT_OK


def _cmd_case_study(args) -> int:
    seed = _ensure_seed(args.seed)
    dep = _deployment_from_args(args, bench.derive_seed(seed, "deployment"))
    stats = neighbor_stats(dep)
    print(f"deployment: {len(dep)} points, mean neighbours "
          f"{stats[15.0]:.2f} within 15m, {stats[30.0]:.2f} within 30m")
    params = engine.CflParams(args.a or 0.1, args.b or 0.1)
    result = bench.case_study(
        dep, args.trials, seed, params=params, cap=args.cap,
        rules=_rules_from_args(args),
        channels=args.domain or DEFAULT_CHANNEL_COUNT,
    )
    if args.out:
        bench.write_csv(result.records, args.out)
        print(f"wrote {len(result.records)} records to {args.out}")
    if args.ccdf:
        series = bench.ccdf(list(result.records))
        _write_text(args.ccdf, "threshold,survival\n" + "".join(
            f"{t},{repr(p)}\n" for t, p in series))
        print(f"wrote ccdf to {args.ccdf}")
    if args.channel_map and result.channel_map:
        _write_text(args.channel_map, "".join(
            f"{x} {y} {z} {c}\n"
            for (x, y, z), c in zip(dep.points, result.channel_map)))
        print(f"wrote channel map to {args.channel_map}")
    s = result.summary
    print(f"trials {s.runs} success {s.success_rate:.4f} "
          f"median {s.describe_median(args.cap)} q95 {s.q95 if not s.q95_censored else f'> {args.cap}'}")
    return EXIT_OK if s.success_rate == 1.0 else EXIT_UNSOLVED


def _cmd_bound(args) -> int:
    params = engine.CflParams(args.a, args.b)
    g = engine.gamma(params, args.domain)
    print(f"gamma = {g!r}")
    kinds = ["general", "coloring"] if args.kind == "both" else [args.kind]
    values = {}
    for kind in kinds:
        log_bound = engine.convergence_bound_log(args.n, g, args.eps, kind)
        values[kind] = log_bound
        line = f"{kind}: log-bound = {log_bound:.6f}"
        if log_bound < math.log(1e15):
            line += f" (bound ~ {math.exp(log_bound):.6g} iterations)"
        print(line)
    if len(values) == 2:
        smaller = min(values, key=values.get)
        print(f"tighter bound: {smaller}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="cflcsp", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance file (DIMACS CNF or instance JSON)")
    p.add_argument("input")
    p.add_argument("--solver", default="cfl", choices=["cfl", "schoening", "walksat"])
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--noise", type=float, default=0.5, help="walksat noise probability")
    p.add_argument("--cap", type=int, default=engine.DEFAULT_CAP)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="solution JSON path (default stdout)")
    p.add_argument("--trace", default=None, help="per-round trace output path (cfl only)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("input")
    p.add_argument("solution")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("generate", help="generate an instance or deployment file")
    p.add_argument("family", choices=["ksat", "coloring", "scheduling", "spectrum", "deployment"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--D", "--domain", dest="domain", type=int, default=None)
    p.add_argument("--slots", type=int, default=None)
    p.add_argument("--edges", default=None, help="edge list file for coloring")
    p.add_argument("--xyz", default=None, help="deployment file for spectrum")
    p.add_argument("--side", type=float, default=150.0, help="square side (m) for synthetic deployments")
    p.add_argument("--radius-rules", default=None, help="comma list radius:separation")
    p.add_argument("--distinct", action="store_true", help="reject duplicate ksat clauses")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("bench", help="random k-SAT sweep")
    p.add_argument("--preset", default=None, choices=sorted(bench.PRESETS),
                   help="named grid; explicit flags override its values")
    p.add_argument("--n", type=int, nargs="+", default=None)
    p.add_argument("--r", type=float, nargs="+", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--solver", nargs="+", default=["cfl"],
                   choices=["cfl", "schoening", "walksat"])
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--timings", action="store_true",
                   help="record wall times (breaks byte-identical reruns)")
    p.add_argument("--resume", action="store_true",
                   help="continue an interrupted sweep from --out")
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("case-study", help="spectrum assignment over a deployment")
    p.add_argument("--xyz", default=None)
    p.add_argument("--n", type=int, default=81)
    p.add_argument("--side", type=float, default=150.0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--cap", type=int, default=100_000)
    p.add_argument("--a", type=float, default=None)
    p.add_argument("--b", type=float, default=None)
    p.add_argument("--D", "--domain", dest="domain", type=int, default=None)
    p.add_argument("--radius-rules", default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.add_argument("--ccdf", default=None)
    p.add_argument("--channel-map", dest="channel_map", default=None)
    p.set_defaults(func=_cmd_case_study)

    p = sub.add_parser("bound", help="convergence bound calculator")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--D", "--domain", dest="domain", type=int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--eps", type=float, default=math.exp(-1))
    p.add_argument("--kind", default="both", choices=["general", "coloring", "both"])
    p.set_defaults(func=_cmd_bound)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
