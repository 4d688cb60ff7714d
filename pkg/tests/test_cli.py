import json

from cflcsp.cli import main


def run_cli(*argv):
    return main(list(argv))


def test_solve_trivial_cnf(tmp_path, capsys):
    cnf = tmp_path / "one.cnf"
    cnf.write_text("p cnf 1 1\n1 0\n")
    out = tmp_path / "sol.json"
    code = run_cli("solve", str(cnf), "--seed", "3", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["outcome"] == "solved"
    assert doc["assignment"] == [2]  # value 2 = true
    capsys.readouterr()


def test_solve_unsatisfiable_exits_one(tmp_path, capsys):
    cnf = tmp_path / "bad.cnf"
    cnf.write_text("p cnf 1 2\n1 0\n-1 0\n")
    code = run_cli("solve", str(cnf), "--seed", "1", "--cap", "10000")
    assert code == 1
    capsys.readouterr()


def test_solve_then_verify(tmp_path, capsys):
    cnf = tmp_path / "inst.cnf"
    cnf.write_text("p cnf 3 2\n1 -2 0\n2 3 0\n")
    sol = tmp_path / "sol.json"
    assert run_cli("solve", str(cnf), "--seed", "5", "--out", str(sol)) == 0
    assert run_cli("verify", str(cnf), str(sol)) == 0
    assert "VALID" in capsys.readouterr().out
    # corrupt the assignment
    doc = json.loads(sol.read_text())
    doc["assignment"] = [1, 2, 1]
    sol.write_text(json.dumps(doc))
    assert run_cli("verify", str(cnf), str(sol)) == 1


def test_solve_with_walk_solvers(tmp_path, capsys):
    cnf = tmp_path / "inst.cnf"
    cnf.write_text("p cnf 2 1\n1 2 0\n")
    assert run_cli("solve", str(cnf), "--solver", "schoening", "--seed", "2") == 0
    assert run_cli("solve", str(cnf), "--solver", "walksat", "--seed", "2") == 0
    capsys.readouterr()


def test_solve_emits_trace(tmp_path, capsys):
    cnf = tmp_path / "inst.cnf"
    cnf.write_text("p cnf 2 1\n1 2 0\n")
    trace = tmp_path / "trace.txt"
    assert run_cli("solve", str(cnf), "--seed", "4", "--trace", str(trace)) == 0
    lines = trace.read_text().splitlines()
    assert lines  # one line per round: "t n_unsat bitset"
    t, unsat, bits = lines[-1].split()
    assert unsat == "0"
    capsys.readouterr()


def test_generate_ksat_deterministic(tmp_path, capsys):
    a = tmp_path / "a.cnf"
    b = tmp_path / "b.cnf"
    assert run_cli("generate", "ksat", "--n", "100", "--r", "4.267", "--k", "3",
                   "--seed", "9", "--out", str(a)) == 0
    assert run_cli("generate", "ksat", "--n", "100", "--r", "4.267", "--k", "3",
                   "--seed", "9", "--out", str(b)) == 0
    assert a.read_bytes() == b.read_bytes()
    header = a.read_text().splitlines()[0]
    assert header == "p cnf 100 427"
    capsys.readouterr()


def test_generate_coloring_from_edge_list(tmp_path, capsys):
    edges = tmp_path / "edges.txt"
    edges.write_text("0 1\n1 2\n0 2\n")
    out = tmp_path / "tri.json"
    assert run_cli("generate", "coloring", "--edges", str(edges), "--D", "3",
                   "--seed", "1", "--out", str(out)) == 0
    doc = json.loads(out.read_text())
    assert len(doc["clauses"]) == 3
    # solve the generated instance end to end
    sol = tmp_path / "sol.json"
    assert run_cli("solve", str(out), "--seed", "2", "--out", str(sol)) == 0
    assert run_cli("verify", str(out), str(sol)) == 0
    capsys.readouterr()


def test_generate_deployment_and_spectrum(tmp_path, capsys):
    dep = tmp_path / "dep.xyz"
    assert run_cli("generate", "deployment", "--n", "12", "--side", "60",
                   "--seed", "3", "--out", str(dep)) == 0
    inst = tmp_path / "spec.json"
    assert run_cli("generate", "spectrum", "--xyz", str(dep), "--seed", "1",
                   "--out", str(inst)) == 0
    doc = json.loads(inst.read_text())

    from cflcsp.encoders import parse_xyz, spectrum_instance

    expected = spectrum_instance(parse_xyz(dep.read_text()))
    assert len(doc["clauses"]) == expected.num_clauses
    capsys.readouterr()


def test_bench_roundtrip(tmp_path, capsys):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    args = ["bench", "--n", "15", "--r", "2.0", "--trials", "4", "--cap", "100000",
            "--solver", "cfl", "schoening", "--seed", "11"]
    assert run_cli(*args, "--out", str(out1)) == 0
    assert run_cli(*args, "--out", str(out2), "--jobs", "3") == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert out1.read_text().splitlines()[0].startswith("family,n,m,k,D")
    capsys.readouterr()


def test_bench_preset(tmp_path, capsys):
    out = tmp_path / "size.csv"
    code = run_cli("bench", "--preset", "k3-size-desk", "--trials", "2",
                   "--cap", "100000", "--seed", "1", "--out", str(out))
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1 + 3 * 2  # three n values, two trials each
    assert {line.split(",")[1] for line in lines[1:]} == {"50", "100", "200"}
    capsys.readouterr()


def test_bench_requires_grid(capsys):
    assert run_cli("bench", "--seed", "1") == 64
    capsys.readouterr()


def test_bench_partial_sweep_exits_two(tmp_path, capsys, monkeypatch):
    import cflcsp.cli as cli_mod

    def boom(cfg, jobs=1, skip=0):
        raise OSError("disk full")

    monkeypatch.setattr(cli_mod.bench, "run_sweep", boom)
    code = run_cli("bench", "--n", "10", "--r", "2.0", "--trials", "1",
                   "--seed", "1", "--out", str(tmp_path / "x.csv"))
    assert code == 2
    capsys.readouterr()


def test_bound_command(capsys):
    assert run_cli("bound", "--n", "2", "--D", "2", "--a", "1", "--b", "1",
                   "--kind", "coloring") == 0
    out = capsys.readouterr().out
    assert "32" in out
    assert run_cli("bound", "--n", "10", "--D", "2", "--a", "0.2", "--b", "0.2") == 0
    out = capsys.readouterr().out
    assert "tighter bound: coloring" in out
    # raw bound suppressed when it would overflow the printable range
    assert run_cli("bound", "--n", "100", "--D", "2", "--a", "0.2", "--b", "0.2",
                   "--kind", "general") == 0
    out = capsys.readouterr().out
    assert "log-bound" in out and "iterations" not in out


def test_usage_errors_exit_64(tmp_path, capsys):
    assert run_cli("generate", "ksat", "--n", "10") == 64
    assert run_cli("solve", str(tmp_path / "missing.cnf")) == 64
    assert run_cli("nonsense") == 64
    assert run_cli("bound", "--n", "2", "--D", "2", "--a", "7", "--b", "1") == 64
    capsys.readouterr()


def test_parse_errors_exit_65(tmp_path, capsys):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 1 1\n2 0\n")
    assert run_cli("solve", str(bad)) == 65
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{oops")
    assert run_cli("solve", str(garbage)) == 65
    capsys.readouterr()


def test_missing_seed_is_drawn_and_printed(tmp_path, capsys):
    cnf = tmp_path / "inst.cnf"
    cnf.write_text("p cnf 1 1\n1 0\n")
    assert run_cli("solve", str(cnf)) == 0
    out = capsys.readouterr().out
    assert "seed:" in out


def test_case_study_small(tmp_path, capsys):
    out = tmp_path / "records.csv"
    ccdf_path = tmp_path / "ccdf.csv"
    cmap = tmp_path / "map.txt"
    code = run_cli("case-study", "--n", "10", "--side", "80", "--trials", "10",
                   "--cap", "100000", "--seed", "5", "--out", str(out),
                   "--ccdf", str(ccdf_path), "--channel-map", str(cmap))
    assert code == 0
    assert out.read_text().count("\n") == 11
    assert ccdf_path.read_text().startswith("threshold,survival")
    assert len(cmap.read_text().splitlines()) == 10
    capsys.readouterr()
