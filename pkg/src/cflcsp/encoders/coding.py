"""Inter-session network coding as a CSP over per-link coding vectors.

The network is a directed acyclic multigraph. Every unicast flow enters at
a dedicated source vertex (one outgoing edge per flow, nothing else) and
leaves at a dedicated destination vertex (one incoming edge per flow).
Each remaining edge carries a variable whose value names a subset of flows
to XOR together: value v encodes the bit vector of v-1 (bit 0 = flow 0).

An edge's clause holds when the combination it wants to forward can be
built by XOR from what arrives at its tail vertex: upstream edges
contribute their own coding vectors, source edges contribute the unit
vector of their flow. Edges into a destination must instead be able to
build that flow's unit vector; their own value is unconstrained and never
appears in any predicate, although the edge still hosts an agent and
participates in its own clause.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import GF2_REALIZABILITY, Clause, CspInstance, Gf2Payload


@dataclass(frozen=True)
class CodingNetwork:
    """Directed acyclic multigraph plus unit-rate flows (source, destination).

    Flows sharing a source vertex are matched to that vertex's outgoing
    edges in declaration order (likewise for destinations), which pins the
    instance down exactly.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...]
    flows: tuple[tuple[int, int], ...]

    def __post_init__(self):
        n = self.num_vertices
        if n < 1:
            raise ValueError("network needs at least one vertex")
        if not self.flows:
            raise ValueError("network needs at least one flow")
        for e, (s, t) in enumerate(self.edges):
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"edge {e} references a missing vertex")
            if s == t:
                raise ValueError(f"edge {e} is a self-loop")
        for p, (src, dst) in enumerate(self.flows):
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"flow {p} references a missing vertex")
        self._check_acyclic()
        self._check_special_vertices()

    def _check_acyclic(self) -> None:
        indeg = [0] * self.num_vertices
        for _, t in self.edges:
            indeg[t] += 1
        queue = [v for v in range(self.num_vertices) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for s, t in self.edges:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        queue.append(t)
        if seen != self.num_vertices:
            raise ValueError("network contains a directed cycle")

    def _check_special_vertices(self) -> None:
        sources = {src for src, _ in self.flows}
        dests = {dst for _, dst in self.flows}
        if sources & dests:
            raise ValueError("a vertex cannot be both a flow source and a flow destination")
        for v in sources:
            if self.incoming(v):
                raise ValueError(f"source vertex {v} must have no incoming edges")
            want = sum(1 for src, _ in self.flows if src == v)
            if len(self.outgoing(v)) != want:
                raise ValueError(
                    f"source vertex {v} must have exactly one outgoing edge per flow"
                )
        for v in dests:
            if self.outgoing(v):
                raise ValueError(f"destination vertex {v} must have no outgoing edges")
            want = sum(1 for _, dst in self.flows if dst == v)
            if len(self.incoming(v)) != want:
                raise ValueError(
                    f"destination vertex {v} must have exactly one incoming edge per flow"
                )

    def incoming(self, v: int) -> list[int]:
        return [e for e, (_, t) in enumerate(self.edges) if t == v]

    def outgoing(self, v: int) -> list[int]:
        return [e for e, (s, _) in enumerate(self.edges) if s == v]

    def source_edge_flows(self) -> dict[int, int]:
        """Map each source-outgoing edge to the flow it injects."""
        out: dict[int, int] = {}
        by_vertex: dict[int, list[int]] = {}
        for p, (src, _) in enumerate(self.flows):
            by_vertex.setdefault(src, []).append(p)
        for v, plist in by_vertex.items():
            for edge, p in zip(self.outgoing(v), plist):
                out[edge] = p
        return out

    def dest_edge_flows(self) -> dict[int, int]:
        """Map each destination-incoming edge to the flow it must deliver."""
        out: dict[int, int] = {}
        by_vertex: dict[int, list[int]] = {}
        for p, (_, dst) in enumerate(self.flows):
            by_vertex.setdefault(dst, []).append(p)
        for v, plist in by_vertex.items():
            for edge, p in zip(self.incoming(v), plist):
                out[edge] = p
        return out


def psi_vector(value: int, num_flows: int) -> tuple[int, ...]:
    """Flow-subset indicator encoded by a domain value (bit 0 = flow 0)."""
    if not 1 <= value <= 1 << num_flows:
        raise ValueError(f"value {value} outside 1..{1 << num_flows}")
    mask = value - 1
    return tuple((mask >> j) & 1 for j in range(num_flows))


def network_coding_instance(net: CodingNetwork, max_flows: int = 16) -> CspInstance:
    """One variable and one realizability clause per non-source edge.

    The domain is the power set of flows, 2**|flows| values, so the flow
    count is capped (default 16).
    """
    num_flows = len(net.flows)
    if num_flows > max_flows:
        raise ValueError(
            f"{num_flows} flows would need domain size 2**{num_flows}; cap is {max_flows}"
        )
    source_flows = net.source_edge_flows()
    dest_flows = net.dest_edge_flows()
    var_of_edge = {}
    for e in range(len(net.edges)):
        if e not in source_flows:
            var_of_edge[e] = len(var_of_edge)

    clauses = []
    for e, (s, _) in enumerate(net.edges):
        if e in source_flows:
            continue
        up_vars = []
        fixed_rows = []
        for j in net.incoming(s):
            if j in source_flows:
                fixed_rows.append(1 << source_flows[j])
            else:
                up_vars.append(var_of_edge[j])
        target = (1 << dest_flows[e]) if e in dest_flows else None
        clauses.append(
            Clause(
                (var_of_edge[e], *up_vars),
                GF2_REALIZABILITY,
                gf2=Gf2Payload(num_flows, tuple(fixed_rows), target),
            )
        )
    if not var_of_edge:
        raise ValueError("network has no codable edges")
    return CspInstance.build(len(var_of_edge), 1 << num_flows, clauses)
