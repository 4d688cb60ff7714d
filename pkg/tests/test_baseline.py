from fractions import Fraction

import pytest

from walk_utils import FIXTURE, clause, expected_flips_exact

from cflcsp.baseline import CAP_EXCEEDED, SOLVED, schoening_walk, walksat
from cflcsp.core import CspInstance, is_solution
from cflcsp.encoders import coloring_instance, random_ksat
from cflcsp.encoders.graphs import InterferenceGraph


def test_exact_oracle_value():
    assert expected_flips_exact(FIXTURE) == Fraction(5, 2)


def test_single_clause_single_flip():
    inst = CspInstance.build(1, 2, [clause(1)])
    res = schoening_walk(inst, seed=1, cap=100, initial=(1,))
    assert res.outcome == SOLVED and res.flips == 1 and res.assignment == (2,)


def test_zero_clauses_zero_flips():
    inst = CspInstance.build(3, 2, [])
    res = schoening_walk(inst, seed=1, cap=100)
    assert res.outcome == SOLVED and res.flips == 0


def test_non_ksat_rejected():
    tri = coloring_instance(InterferenceGraph(3, ((0, 1),)), 3)
    with pytest.raises(ValueError):
        schoening_walk(tri, seed=1, cap=10)
    with pytest.raises(ValueError):
        walksat(tri, seed=1, cap=10)


def test_walk_flips_exactly_one_variable_per_iteration():
    inst = random_ksat(8, 18, 3, seed=4)
    log: list[int] = []
    res = schoening_walk(inst, seed=9, cap=10_000, flip_log=log)
    assert res.outcome == SOLVED
    assert len(log) == res.flips
    assert all(0 <= v < 8 for v in log)


def test_solved_assignments_verify():
    for seed in range(30):
        inst = random_ksat(12, 40, 3, seed=seed)
        for walk in (schoening_walk, walksat):
            res = walk(inst, seed=seed, cap=100_000)
            if res.outcome == SOLVED:
                assert is_solution(inst, res.assignment)


def test_empirical_mean_matches_chain_oracle():
    runs = 20_000
    total = 0
    for seed in range(runs):
        res = schoening_walk(FIXTURE, seed=seed, cap=10_000)
        assert res.outcome == SOLVED
        total += res.flips
    mean = total / runs
    exact = float(expected_flips_exact(FIXTURE))
    assert abs(mean - exact) / exact < 0.05


def test_walksat_full_noise_statistically_matches_schoening():
    runs = 4000
    totals = {"schoening": 0, "walksat": 0}
    for seed in range(runs):
        totals["schoening"] += schoening_walk(FIXTURE, seed=seed, cap=10_000).flips
        totals["walksat"] += walksat(FIXTURE, seed=seed, cap=10_000, noise=1.0).flips
    a = totals["schoening"] / runs
    b = totals["walksat"] / runs
    assert abs(a - b) / a < 0.1


def test_walksat_near_threshold_density():
    # 3-SAT at r = 3.4: walksat should finish with a valid assignment and
    # a finite normalized flip count on every seed
    flips = []
    for seed in range(500):
        inst = random_ksat(100, 340, 3, seed=seed)
        res = walksat(inst, seed=seed, cap=1_000_000)
        assert res.solved and is_solution(inst, res.assignment)
        flips.append(res.flips / 100)
    flips.sort()
    assert flips[250] < 100  # median normalized flips comfortably finite


def test_walksat_freebie():
    inst = CspInstance.build(2, 2, [clause(1, 2)])
    for noise in (0.0, 0.5, 1.0):
        res = walksat(inst, seed=3, cap=100, noise=noise, initial=(1, 1))
        assert res.outcome == SOLVED and res.flips == 1


def test_walksat_greedy_prefers_low_break():
    # x1 appears positively in both clauses; flipping x2 in the shared
    # clause would break nothing but not help clause 2, flipping x1 fixes
    # both. Greedy (noise 0) picks a zero-break variable.
    inst = CspInstance.build(2, 2, [clause(1, 2), clause(1, -2)])
    res = walksat(inst, seed=11, cap=100, noise=0.0, initial=(1, 2))
    assert res.outcome == SOLVED
    assert res.flips == 1


def test_cap_exceeded_on_unsatisfiable():
    inst = CspInstance.build(1, 2, [clause(1), clause(-1)])
    res = schoening_walk(inst, seed=2, cap=500)
    assert res.outcome == CAP_EXCEEDED and res.flips == 500
