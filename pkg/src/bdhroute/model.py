"""Problem data model and the ground-truth feasibility verifier.

A problem instance is a directed multigraph whose edges carry an integer
bandwidth capacity and an integer delay, plus a list of demands.  Each
demand asks for ``band`` units along one simple path from ``src`` to
``dst`` whose total delay is at most ``delay_limit`` and whose edge count
is at most ``hop_limit``.  A solution assigns paths to a subset of the
demands so that the summed band on every edge stays within its capacity.

All quantities are exact integers, so feasibility checks never need a
floating tolerance.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    EndpointMismatch,
    InsufficientResidual,
    InvalidInstance,
    NoSuchEdge,
    NotSimple,
    UnknownDemand,
)


@dataclass(frozen=True)
class Edge:
    edge_id: int
    src: int
    dst: int
    capacity: int
    delay: int


@dataclass(frozen=True)
class Demand:
    demand_id: int
    src: int
    dst: int
    band: int
    delay_limit: int
    hop_limit: int

    def __post_init__(self) -> None:
        if self.src == self.dst:
            raise InvalidInstance(f"demand {self.demand_id}: src == dst ({self.src})")
        if self.band <= 0 or self.delay_limit <= 0 or self.hop_limit <= 0:
            raise InvalidInstance(
                f"demand {self.demand_id}: band, delay_limit and hop_limit must be positive"
            )


@dataclass(frozen=True)
class Network:
    """Directed multigraph over dense node ids ``0..node_count-1``.

    Edges are identified by their position: ``edges[i].edge_id == i``.
    Parallel edges and antiparallel pairs are allowed, self-loops are not.

    The search algorithms in this package walk the *canonical* adjacency:
    for every ordered node pair only the parallel edge with the smallest
    delay (then smallest id) is expanded.  This is the same edge that
    :func:`path_metrics` picks for a node sequence, so any path an
    algorithm returns survives a round trip through its node sequence.
    """

    node_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise InvalidInstance("network needs at least one node")
        if not isinstance(self.edges, tuple):
            object.__setattr__(self, "edges", tuple(self.edges))
        n = self.node_count
        for i, e in enumerate(self.edges):
            if e.edge_id != i:
                raise InvalidInstance(f"edge ids must be dense; position {i} holds id {e.edge_id}")
            if not (0 <= e.src < n and 0 <= e.dst < n):
                raise InvalidInstance(f"edge {i}: endpoint outside [0, {n})")
            if e.src == e.dst:
                raise InvalidInstance(f"edge {i}: self-loop on node {e.src}")
            if e.capacity < 0:
                raise InvalidInstance(f"edge {i}: negative capacity")
            if e.delay <= 0:
                raise InvalidInstance(f"edge {i}: delay must be positive")

    @classmethod
    def from_arrays(cls, node_count, src, dst, capacity, delay) -> Network:
        edges = tuple(
            Edge(i, int(u), int(v), int(c), int(d))
            for i, (u, v, c, d) in enumerate(zip(src, dst, capacity, delay))
        )
        return cls(node_count, edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def src(self) -> list[int]:
        return [e.src for e in self.edges]

    @cached_property
    def dst(self) -> list[int]:
        return [e.dst for e in self.edges]

    @cached_property
    def delay(self) -> list[int]:
        return [e.delay for e in self.edges]

    @cached_property
    def capacity(self) -> list[int]:
        return [e.capacity for e in self.edges]

    @cached_property
    def canonical(self) -> dict[tuple[int, int], int]:
        """Map ``(u, v)`` to the min-delay, lowest-id edge from u to v."""
        best: dict[tuple[int, int], int] = {}
        for e in self.edges:
            key = (e.src, e.dst)
            cur = best.get(key)
            if cur is None or e.delay < self.edges[cur].delay:
                best[key] = e.edge_id
        return best

    @cached_property
    def out_adj(self) -> list[tuple[tuple[int, int, int], ...]]:
        """Per node, canonical ``(edge_id, head, delay)`` sorted by edge id."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.node_count)]
        for eid in sorted(self.canonical.values()):
            e = self.edges[eid]
            adj[e.src].append((eid, e.dst, e.delay))
        return [tuple(a) for a in adj]

    @cached_property
    def in_adj(self) -> list[tuple[tuple[int, int, int], ...]]:
        """Per node, canonical ``(edge_id, tail, delay)`` sorted by edge id."""
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.node_count)]
        for eid in sorted(self.canonical.values()):
            e = self.edges[eid]
            adj[e.dst].append((eid, e.src, e.delay))
        return [tuple(a) for a in adj]


@dataclass(frozen=True, slots=True)
class Path:
    """A simple directed path; ``hop`` and ``delay`` are derived metrics."""

    edges: tuple[int, ...]
    nodes: tuple[int, ...]
    hop: int
    delay: int

    @property
    def src(self) -> int:
        return self.nodes[0]

    @property
    def dst(self) -> int:
        return self.nodes[-1]


def path_from_edges(network: Network, edges: Sequence[int]) -> Path:
    """Build a :class:`Path` from an edge-id sequence, checking chaining and simplicity."""
    if not edges:
        raise NoSuchEdge("a path needs at least one edge")
    m = network.edge_count
    for eid in edges:
        if not 0 <= eid < m:
            raise NoSuchEdge(f"edge id {eid} does not exist")
    src, dst, delay = network.src, network.dst, network.delay
    nodes = [src[edges[0]]]
    for a, b in zip(edges, edges[1:]):
        if dst[a] != src[b]:
            raise NoSuchEdge(f"edges {a} and {b} do not chain")
    nodes.extend(dst[eid] for eid in edges)
    if len(set(nodes)) != len(nodes):
        raise NotSimple(f"node sequence {nodes} repeats a node")
    return Path(tuple(edges), tuple(nodes), len(edges), sum(delay[eid] for eid in edges))


def path_metrics(network: Network, node_seq: Sequence[int]) -> Path:
    """Canonicalize a node sequence into a :class:`Path`.

    Each consecutive pair is resolved to its min-delay parallel edge
    (lowest edge id on ties).

    Raises:
        NotSimple: a node repeats.
        NoSuchEdge: some consecutive pair has no edge.
    """
    if len(node_seq) < 2:
        raise ValueError("a node sequence needs at least two nodes")
    if len(set(node_seq)) != len(node_seq):
        raise NotSimple(f"node sequence {list(node_seq)} repeats a node")
    canon = network.canonical
    edges = []
    for u, v in zip(node_seq, node_seq[1:]):
        eid = canon.get((u, v))
        if eid is None:
            raise NoSuchEdge(f"no edge {u}->{v}")
        edges.append(eid)
    delay = network.delay
    return Path(tuple(edges), tuple(node_seq), len(edges), sum(delay[e] for e in edges))


def is_locally_feasible(path: Path, demand: Demand) -> bool:
    """True iff the path meets the demand's delay and hop limits (both inclusive)."""
    if path.src != demand.src or path.dst != demand.dst:
        raise EndpointMismatch(
            f"path {path.src}->{path.dst} does not serve demand {demand.demand_id} "
            f"({demand.src}->{demand.dst})"
        )
    return path.delay <= demand.delay_limit and path.hop <= demand.hop_limit


class ResidualState:
    """Remaining bandwidth per edge; the only mutable piece of an instance."""

    __slots__ = ("capacity", "values")

    def __init__(self, capacity: Sequence[int], values: Iterable[int] | None = None):
        self.capacity = tuple(capacity)
        self.values = list(self.capacity if values is None else values)

    @classmethod
    def of(cls, network: Network) -> ResidualState:
        return cls(network.capacity)

    def __getitem__(self, edge_id: int) -> int:
        return self.values[edge_id]

    def __len__(self) -> int:
        return len(self.values)

    def copy(self) -> ResidualState:
        return ResidualState(self.capacity, self.values)

    def commit(self, path: Path, band: int) -> None:
        vals = self.values
        for eid in path.edges:
            if vals[eid] < band:
                raise InsufficientResidual(
                    f"edge {eid} has residual {vals[eid]} < band {band}"
                )
        for eid in path.edges:
            vals[eid] -= band

    def used(self) -> list[int]:
        return [c - r for c, r in zip(self.capacity, self.values)]


@dataclass
class Solution:
    """Assignment of paths to satisfied demands.

    ``assignment`` and ``unsatisfied`` partition the demand ids.
    """

    assignment: dict[int, Path]
    unsatisfied: frozenset[int]
    throughput: int

    @classmethod
    def from_assignment(
        cls, demands: Sequence[Demand], assignment: Mapping[int, Path]
    ) -> Solution:
        ordered = {d.demand_id: assignment[d.demand_id] for d in demands if d.demand_id in assignment}
        if len(ordered) != len(assignment):
            unknown = sorted(set(assignment) - set(ordered))
            raise UnknownDemand(f"assignment references unknown demands {unknown}")
        unsatisfied = frozenset(d.demand_id for d in demands if d.demand_id not in ordered)
        return cls(ordered, unsatisfied, total_throughput(demands, ordered))

    @classmethod
    def empty(cls, demands: Sequence[Demand]) -> Solution:
        return cls({}, frozenset(d.demand_id for d in demands), 0)


def total_throughput(
    demands: Sequence[Demand], solution: Solution | Mapping[int, Path]
) -> int:
    """Sum of band over assigned demands."""
    assignment = solution.assignment if isinstance(solution, Solution) else solution
    band = {d.demand_id: d.band for d in demands}
    total = 0
    for did in assignment:
        if did not in band:
            raise UnknownDemand(f"demand id {did} is not in the demand list")
        total += band[did]
    return total


@dataclass
class VerificationReport:
    """Violations found by :func:`verify_solution`; empty means valid."""

    unknown_demands: list[int] = field(default_factory=list)
    partition_errors: list[int] = field(default_factory=list)
    broken_paths: list[int] = field(default_factory=list)
    non_simple: list[int] = field(default_factory=list)
    endpoint_mismatches: list[int] = field(default_factory=list)
    delay_violations: list[int] = field(default_factory=list)
    hop_violations: list[int] = field(default_factory=list)
    capacity_violations: list[tuple[int, int, int]] = field(default_factory=list)
    throughput_mismatch: tuple[int, int] | None = None

    @property
    def valid(self) -> bool:
        return not any(
            (
                self.unknown_demands,
                self.partition_errors,
                self.broken_paths,
                self.non_simple,
                self.endpoint_mismatches,
                self.delay_violations,
                self.hop_violations,
                self.capacity_violations,
                self.throughput_mismatch,
            )
        )

    def __bool__(self) -> bool:
        return not self.valid

    def summary(self) -> str:
        if self.valid:
            return "valid"
        parts = []
        for name in (
            "unknown_demands",
            "partition_errors",
            "broken_paths",
            "non_simple",
            "endpoint_mismatches",
            "delay_violations",
            "hop_violations",
            "capacity_violations",
        ):
            items = getattr(self, name)
            if items:
                parts.append(f"{name}={items[:10]}{'...' if len(items) > 10 else ''}")
        if self.throughput_mismatch:
            claimed, actual = self.throughput_mismatch
            parts.append(f"throughput claimed {claimed}, actual {actual}")
        return "; ".join(parts)


def verify_solution(
    network: Network, demands: Sequence[Demand], solution: Solution
) -> VerificationReport:
    """Check a solution against every model constraint.

    Path metrics are recomputed from the edge ids; the cached ``hop``,
    ``delay`` and ``nodes`` fields of each :class:`Path` are not trusted.
    Violations are collected, never raised.
    """
    report = VerificationReport()
    by_id = {d.demand_id: d for d in demands}
    src, dst, delay = network.src, network.dst, network.delay
    m = network.edge_count
    load = [0] * m
    actual = 0

    for did, path in solution.assignment.items():
        demand = by_id.get(did)
        if demand is None:
            report.unknown_demands.append(did)
            continue
        edges = path.edges
        if not edges or any(not 0 <= e < m for e in edges) or any(
            dst[a] != src[b] for a, b in zip(edges, edges[1:])
        ):
            report.broken_paths.append(did)
            continue
        nodes = [src[edges[0]]] + [dst[e] for e in edges]
        if len(set(nodes)) != len(nodes):
            report.non_simple.append(did)
        if nodes[0] != demand.src or nodes[-1] != demand.dst:
            report.endpoint_mismatches.append(did)
        if sum(delay[e] for e in edges) > demand.delay_limit:
            report.delay_violations.append(did)
        if len(edges) > demand.hop_limit:
            report.hop_violations.append(did)
        for e in edges:
            load[e] += demand.band
        actual += demand.band

    seen = set(solution.assignment)
    for did in solution.unsatisfied:
        if did in seen or did not in by_id:
            report.partition_errors.append(did)
        seen.add(did)
    report.partition_errors.extend(sorted(set(by_id) - seen))

    cap = network.capacity
    report.capacity_violations = [(e, load[e], cap[e]) for e in range(m) if load[e] > cap[e]]
    if solution.throughput != actual:
        report.throughput_mismatch = (solution.throughput, actual)
    return report
