"""Plain-text instance, solution and planted-sidecar files.

One comma-separated record per line, first field is the record tag;
lines starting with ``#`` and blank lines are ignored.

Instance::

    nodes,<node_count>
    edge,<edge_id>,<src>,<dst>,<capacity>,<delay>
    demand,<demand_id>,<src>,<dst>,<band>,<delay_limit>,<hop_limit>

Solution (node sequences are resolved with :func:`~bdhroute.model.path_metrics`)::

    path,<demand_id>,<node>,<node>,...
    throughput,<value>

Planted sidecar written next to generated instances::

    planted,<demand_id>,<chosen 0|1>,<node>,<node>,...

Writers emit records sorted by id so equal inputs give byte-identical files.
"""

from __future__ import annotations

import os
from collections.abc import Iterator, Sequence

from .errors import FormatError
from .model import Demand, Edge, Network, Path, Solution, path_metrics

INSTANCE_HEADER = "# bdhroute instance v1"
SOLUTION_HEADER = "# bdhroute solution v1"
SIDECAR_HEADER = "# bdhroute planted v1"


def _records(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, [f.strip() for f in line.split(",")]


def _ints(fields: list[str], lineno: int) -> list[int]:
    try:
        return [int(f) for f in fields]
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def format_instance(network: Network, demands: Sequence[Demand]) -> str:
    lines = [INSTANCE_HEADER, f"nodes,{network.node_count}"]
    lines += [f"edge,{e.edge_id},{e.src},{e.dst},{e.capacity},{e.delay}" for e in network.edges]
    lines += [
        f"demand,{d.demand_id},{d.src},{d.dst},{d.band},{d.delay_limit},{d.hop_limit}"
        for d in sorted(demands, key=lambda d: d.demand_id)
    ]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> tuple[Network, list[Demand]]:
    node_count = None
    edges: list[Edge] = []
    demands: list[Demand] = []
    widths = {"nodes": 1, "edge": 5, "demand": 6}
    for lineno, fields in _records(text):
        tag, rest = fields[0], fields[1:]
        if tag not in widths:
            raise FormatError(f"line {lineno}: unknown record {tag!r}")
        if len(rest) != widths[tag]:
            raise FormatError(f"line {lineno}: {tag} takes {widths[tag]} fields, got {len(rest)}")
        vals = _ints(rest, lineno)
        if tag == "nodes":
            if node_count is not None:
                raise FormatError(f"line {lineno}: duplicate nodes header")
            node_count = vals[0]
        elif tag == "edge":
            edges.append(Edge(*vals))
        else:
            demands.append(Demand(*vals))
    if node_count is None:
        raise FormatError("missing nodes header")
    edges.sort(key=lambda e: e.edge_id)
    return Network(node_count, tuple(edges)), demands


def format_solution(solution: Solution) -> str:
    lines = [SOLUTION_HEADER]
    for did in sorted(solution.assignment):
        nodes = ",".join(map(str, solution.assignment[did].nodes))
        lines.append(f"path,{did},{nodes}")
    lines.append(f"throughput,{solution.throughput}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str, network: Network, demands: Sequence[Demand]) -> Solution:
    """Rebuild a :class:`Solution`; the throughput is taken from the trailer as claimed."""
    assignment: dict[int, Path] = {}
    throughput = None
    for lineno, fields in _records(text):
        tag = fields[0]
        vals = _ints(fields[1:], lineno)
        if tag == "path":
            if len(vals) < 3:
                raise FormatError(f"line {lineno}: path needs a demand id and two nodes")
            if vals[0] in assignment:
                raise FormatError(f"line {lineno}: demand {vals[0]} assigned twice")
            assignment[vals[0]] = path_metrics(network, vals[1:])
        elif tag == "throughput":
            if len(vals) != 1:
                raise FormatError(f"line {lineno}: throughput takes one field")
            throughput = vals[0]
        else:
            raise FormatError(f"line {lineno}: unknown record {tag!r}")
    if throughput is None:
        raise FormatError("missing throughput trailer")
    ids = {d.demand_id for d in demands}
    unsatisfied = frozenset(ids - set(assignment))
    return Solution(assignment, unsatisfied, throughput)


def format_sidecar(planted: dict[int, Path], chosen: frozenset[int]) -> str:
    lines = [SIDECAR_HEADER]
    for did in sorted(planted):
        nodes = ",".join(map(str, planted[did].nodes))
        lines.append(f"planted,{did},{int(did in chosen)},{nodes}")
    return "\n".join(lines) + "\n"


def parse_sidecar(text: str, network: Network) -> tuple[dict[int, Path], frozenset[int]]:
    planted: dict[int, Path] = {}
    chosen = set()
    for lineno, fields in _records(text):
        if fields[0] != "planted":
            raise FormatError(f"line {lineno}: unknown record {fields[0]!r}")
        vals = _ints(fields[1:], lineno)
        if len(vals) < 4:
            raise FormatError(f"line {lineno}: planted needs id, flag and two nodes")
        planted[vals[0]] = path_metrics(network, vals[2:])
        if vals[1]:
            chosen.add(vals[0])
    return planted, frozenset(chosen)


def sidecar_path(instance_path: str | os.PathLike) -> str:
    return os.fspath(instance_path) + ".planted"


def write_text(path: str | os.PathLike, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)


def read_text(path: str | os.PathLike) -> str:
    with open(path, encoding="ascii") as fh:
        return fh.read()


def write_instance(path, network: Network, demands: Sequence[Demand]) -> None:
    write_text(path, format_instance(network, demands))


def read_instance(path) -> tuple[Network, list[Demand]]:
    return parse_instance(read_text(path))


def write_solution(path, solution: Solution) -> None:
    write_text(path, format_solution(solution))


def read_solution(path, network: Network, demands: Sequence[Demand]) -> Solution:
    return parse_solution(read_text(path), network, demands)
