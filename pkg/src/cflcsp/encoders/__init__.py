"""Constructors mapping problem families and file formats onto CSP instances."""

from .coding import CodingNetwork, network_coding_instance, psi_vector
from .dimacs import emit_dimacs, parse_dimacs
from .graphs import (
    InterferenceGraph,
    channel_dependent_instance,
    coloring_instance,
    scheduling_instance,
)
from .ksat import clauses_for_ratio, random_ksat
from .spectrum import (
    DEFAULT_BAND_RULES,
    DEFAULT_CHANNEL_COUNT,
    BandRule,
    Deployment,
    neighbor_stats,
    parse_xyz,
    spectrum_instance,
    synthetic_deployment,
)

__all__ = [
    "BandRule",
    "CodingNetwork",
    "DEFAULT_BAND_RULES",
    "DEFAULT_CHANNEL_COUNT",
    "Deployment",
    "InterferenceGraph",
    "channel_dependent_instance",
    "clauses_for_ratio",
    "coloring_instance",
    "emit_dimacs",
    "neighbor_stats",
    "network_coding_instance",
    "parse_dimacs",
    "parse_xyz",
    "psi_vector",
    "random_ksat",
    "scheduling_instance",
    "spectrum_instance",
    "synthetic_deployment",
]
