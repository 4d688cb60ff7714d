"""Spectrum assignment over a geometric deployment of access points.

Band rules constrain pairs of points: inside a rule's radius (strictly),
two stations' channels must differ by at least the rule's separation. The
default rules (5m/3 channels, 10m/2, 30m/1) with 11 channels model dense
802.11 deployments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core import CHANNEL_BAND, Clause, CspInstance, ParseError

DEFAULT_CHANNEL_COUNT = 11


@dataclass(frozen=True)
class Deployment:
    """Point set in meters; z is kept so survey data can be used directly."""

    points: tuple[tuple[float, float, float], ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("empty deployment")
        pts = []
        for i, p in enumerate(self.points):
            if len(p) != 3:
                raise ValueError(f"point {i} must have 3 coordinates")
            x, y, z = (float(c) for c in p)
            if not all(math.isfinite(c) for c in (x, y, z)):
                raise ValueError(f"point {i} has a non-finite coordinate")
            pts.append((x, y, z))
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def distance_matrix(self) -> np.ndarray:
        arr = np.asarray(self.points, dtype=np.float64)
        diff = arr[:, None, :] - arr[None, :, :]
        return np.sqrt((diff * diff).sum(axis=2))


@dataclass(frozen=True)
class BandRule:
    """Within radius_m, channels must differ by at least min_separation."""

    radius_m: float
    min_separation: int

    def __post_init__(self):
        if not self.radius_m > 0:
            raise ValueError("radius must be positive")
        if self.min_separation < 1:
            raise ValueError("min_separation must be >= 1")


DEFAULT_BAND_RULES = (BandRule(5.0, 3), BandRule(10.0, 2), BandRule(30.0, 1))


def spectrum_instance(
    dep: Deployment,
    rules: Sequence[BandRule] = DEFAULT_BAND_RULES,
    channels: int = DEFAULT_CHANNEL_COUNT,
) -> CspInstance:
    """Build the band-rule CSP: one clause per rule per pair inside its radius.

    Distance comparison is strict (< radius) and rules apply independently,
    so a pair inside several radii gets one clause per rule (the separations
    nest; the solution set is unaffected). Pair granularity keeps each
    station's feedback tied to conflicts involving the station itself;
    folding a station's whole neighbourhood into one clause would flag every
    neighbour of any conflicting pair as unsatisfied and the search never
    locks anything in.
    """
    if not rules:
        raise ValueError("need at least one band rule")
    radii = [r.radius_m for r in rules]
    if radii != sorted(radii):
        raise ValueError("rules must be sorted by ascending radius")
    if channels < max(r.min_separation for r in rules):
        raise ValueError("channel count must cover the largest separation")
    n = len(dep)
    dist = dep.distance_matrix()
    clauses = []
    for rule in rules:
        for i in range(n):
            for j in range(i + 1, n):
                if dist[i, j] < rule.radius_m:
                    clauses.append(
                        Clause((i, j), CHANNEL_BAND, min_separation=rule.min_separation)
                    )
    return CspInstance.build(n, channels, clauses)


def parse_xyz(text: str) -> Deployment:
    """Parse whitespace-separated x y z lines (meters) into a deployment.

    Blank lines and lines starting with '#' are skipped.
    """
    points = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(f"expected 3 coordinates, got {len(fields)}", lineno)
        try:
            points.append(tuple(float(f) for f in fields))
        except ValueError:
            raise ParseError(f"non-numeric coordinate in {line!r}", lineno) from None
    if not points:
        raise ValueError("empty deployment")
    return Deployment(tuple(points))


def synthetic_deployment(n: int, area_side_m: float, seed: int) -> Deployment:
    """n points uniform over a square of the given side, z = 0.

    A stand-in for survey data when none is available; check the result
    with neighbor_stats to match a target density.
    """
    if n < 1:
        raise ValueError("need at least one point")
    if not area_side_m > 0:
        raise ValueError("area side must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    xy = rng.random((n, 2)) * area_side_m
    return Deployment(tuple((float(x), float(y), 0.0) for x, y in xy))


def neighbor_stats(dep: Deployment, radii: Sequence[float] = (15.0, 30.0)) -> dict[float, float]:
    """Mean number of other points strictly within each radius."""
    dist = dep.distance_matrix()
    n = len(dep)
    out = {}
    for r in radii:
        counts = (dist < r).sum(axis=1) - 1  # exclude self
        out[float(r)] = float(counts.mean()) if n else 0.0
    return out
