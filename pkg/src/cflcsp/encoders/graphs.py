"""Graph-shaped encodings: coloring, channel-dependent interference, scheduling."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..core import NOT_EQUAL, NOT_EQUAL_ON_CHANNEL, Clause, CspInstance


@dataclass(frozen=True)
class InterferenceGraph:
    """Undirected graph: vertices are stations, edges are interfering pairs."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.num_vertices < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        norm = []
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise ValueError(f"edge ({u}, {v}) references a missing vertex")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"duplicate edge {e}")
            seen.add(e)
            norm.append(e)
        object.__setattr__(self, "edges", tuple(norm))

    @classmethod
    def from_edges(cls, num_vertices: int, edges: Iterable[tuple[int, int]]) -> "InterferenceGraph":
        return cls(num_vertices, tuple(edges))


def coloring_instance(graph: InterferenceGraph, colors: int) -> CspInstance:
    """Proper-coloring CSP: one not-equal clause per edge.

    A vertex participates exactly in the clauses of its incident edges.
    """
    if colors < 1:
        raise ValueError("need at least one color")
    clauses = [Clause((u, v), NOT_EQUAL) for u, v in graph.edges]
    return CspInstance.build(graph.num_vertices, colors, clauses)


def channel_dependent_instance(graphs: Sequence[InterferenceGraph]) -> CspInstance:
    """Channel assignment where interference depends on the channel chosen.

    graphs[c-1] lists the pairs that interfere when both pick channel c; a
    clause is violated only when both its endpoints select exactly that
    channel. The channel count equals the number of graphs.
    """
    if not graphs:
        raise ValueError("need one interference graph per channel")
    n = graphs[0].num_vertices
    if any(g.num_vertices != n for g in graphs):
        raise ValueError("all per-channel graphs must share the vertex set")
    clauses = [
        Clause((u, v), NOT_EQUAL_ON_CHANNEL, channel=c)
        for c, g in enumerate(graphs, start=1)
        for u, v in g.edges
    ]
    return CspInstance.build(n, len(graphs), clauses)


def scheduling_instance(transmitters: int, slots: int) -> CspInstance:
    """Collision-free slot selection: all transmitter pairs must differ.

    Complete-graph coloring with one clause per pair and domain size equal
    to the slot count.
    """
    if transmitters < 1 or slots < 1:
        raise ValueError("need at least one transmitter and one slot")
    clauses = [
        Clause((i, j), NOT_EQUAL)
        for i in range(transmitters)
        for j in range(i + 1, transmitters)
    ]
    return CspInstance.build(transmitters, slots, clauses)
