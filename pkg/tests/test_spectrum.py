import math

import pytest

from cflcsp.core import ParseError, evaluate_clause, is_solution, validate_participation
from cflcsp.encoders import (
    DEFAULT_BAND_RULES,
    BandRule,
    Deployment,
    neighbor_stats,
    parse_xyz,
    spectrum_instance,
    synthetic_deployment,
)


def two_point_deployment(distance):
    return Deployment(((0.0, 0.0, 0.0), (distance, 0.0, 0.0)))


def test_default_rules():
    assert [(r.radius_m, r.min_separation) for r in DEFAULT_BAND_RULES] == [
        (5.0, 3),
        (10.0, 2),
        (30.0, 1),
    ]


def test_close_pair_wide_channels_satisfied():
    inst = spectrum_instance(two_point_deployment(4.0))
    assert is_solution(inst, (1, 6))


def test_close_pair_narrow_channels_violates_tightest_rule():
    inst = spectrum_instance(two_point_deployment(4.0))
    # rule-major clause order: the pair appears once per covering rule
    assert inst.num_clauses == 3
    assert evaluate_clause(inst, 0, (1, 3)) is False  # 5m rule: |1-3| < 3
    assert evaluate_clause(inst, 1, (1, 3)) is True  # 10m rule: |1-3| >= 2
    assert evaluate_clause(inst, 2, (1, 3)) is True  # 30m rule
    assert not is_solution(inst, (1, 3))


def test_distant_pair_unconstrained():
    inst = spectrum_instance(two_point_deployment(200.0))
    for x in ((1, 1), (5, 5), (11, 1)):
        assert is_solution(inst, x)


def test_boundary_distance_is_strict():
    inst = spectrum_instance(two_point_deployment(30.0))
    assert is_solution(inst, (1, 1))  # exactly 30 m apart: outside the 30m rule
    inst = spectrum_instance(two_point_deployment(29.999))
    assert not is_solution(inst, (1, 1))


def test_clause_count_is_pairs_per_rule():
    dep = synthetic_deployment(17, 80.0, seed=1)
    inst = spectrum_instance(dep)
    dist = dep.distance_matrix()
    expected = sum(
        1
        for radius in (5.0, 10.0, 30.0)
        for i in range(17)
        for j in range(i + 1, 17)
        if dist[i, j] < radius
    )
    assert inst.num_clauses == expected
    # every station's feedback covers exactly the pair clauses it is part of
    for i, ms in enumerate(inst.participation):
        assert all(i in inst.clauses[m].scope for m in ms)


def test_spectrum_participation_sound():
    dep = synthetic_deployment(6, 40.0, seed=2)
    inst = spectrum_instance(dep, rules=(BandRule(10.0, 2),), channels=4)
    report = validate_participation(inst, max_evaluations=1 << 21)
    assert report.ok and not report.inert


def test_rules_validation():
    dep = two_point_deployment(1.0)
    with pytest.raises(ValueError):
        spectrum_instance(dep, rules=(BandRule(10.0, 2), BandRule(5.0, 3)))
    with pytest.raises(ValueError):
        spectrum_instance(dep, channels=2)
    with pytest.raises(ValueError):
        BandRule(0.0, 1)
    with pytest.raises(ValueError):
        BandRule(5.0, 0)


def test_parse_xyz_basic():
    dep = parse_xyz("0 0 0\n3 4 0\n")
    assert len(dep) == 2
    assert dep.distance_matrix()[0, 1] == pytest.approx(5.0)


def test_parse_xyz_comments_and_errors():
    dep = parse_xyz("# survey\n\n1.5 2.5 0\n")
    assert len(dep) == 1
    with pytest.raises(ValueError):
        parse_xyz("# only comments\n\n")
    with pytest.raises(ParseError) as err:
        parse_xyz("0 0 0\n1 two 3\n")
    assert err.value.line == 2
    with pytest.raises(ParseError):
        parse_xyz("1 2\n")


def test_parse_xyz_81_point_file():
    dep = synthetic_deployment(81, 150.0, seed=4)
    text = "".join(f"{x} {y} {z}\n" for x, y, z in dep.points)
    assert len(parse_xyz(text)) == 81


def test_deployment_rejects_bad_points():
    with pytest.raises(ValueError):
        Deployment(())
    with pytest.raises(ValueError):
        Deployment(((0.0, 0.0, math.inf),))


def test_synthetic_deployment_deterministic():
    a = synthetic_deployment(20, 100.0, seed=9)
    b = synthetic_deployment(20, 100.0, seed=9)
    assert a == b


def test_single_point_has_no_neighbors():
    dep = synthetic_deployment(1, 50.0, seed=0)
    stats = neighbor_stats(dep)
    assert stats[15.0] == 0.0 and stats[30.0] == 0.0


def test_synthetic_density_matches_uniform_model():
    # Monte-Carlo average vs the uniform-density value n*pi*r^2/A, which
    # overestimates because of edge effects; 81 points on a 150 m square
    # should sit near 3 neighbours at 15 m and 10 at 30 m.
    n, side = 81, 150.0
    sums = {15.0: 0.0, 30.0: 0.0}
    trials = 100
    for seed in range(trials):
        stats = neighbor_stats(synthetic_deployment(n, side, seed=seed))
        for r in sums:
            sums[r] += stats[r]
    mean15 = sums[15.0] / trials
    mean30 = sums[30.0] / trials
    ideal15 = (n - 1) * math.pi * 15.0**2 / side**2
    ideal30 = (n - 1) * math.pi * 30.0**2 / side**2
    assert 2.0 <= mean15 <= 4.0
    assert 8.0 <= mean30 <= 12.0
    assert mean15 <= ideal15  # edge correction only lowers the count
    assert mean30 <= ideal30
