"""Directed-graph and structured-matrix primitives shared by all analysis modules.

Conventions used throughout the package:

* A structured matrix records only the zero/nonzero pattern (the *support*)
  of a real matrix; values live in :mod:`netobserve.numeric`.
* A support entry ``(i, j)`` of a square structure (row ``i``, column ``j``
  nonzero) produces the digraph edge ``j -> i``: information flows from
  state ``j`` to state ``i``.
* Node ids are dense integers ``0..n-1``; external labels are kept in a
  side table by :mod:`netobserve.ingest`.

All types are immutable after construction and safe to share across
threads; all operations are pure functions.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

logger = logging.getLogger(__name__)


class DimensionError(ValueError):
    """Raised when matrix/graph dimensions are incompatible."""


@dataclass(frozen=True)
class Digraph:
    """A directed graph on nodes ``0..node_count-1``.

    Self-loops are permitted; duplicate edges are collapsed by the
    frozenset representation.
    """

    node_count: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError(f"negative node count: {self.node_count}")
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        for s, t in self.edges:
            if not (0 <= s < self.node_count and 0 <= t < self.node_count):
                raise ValueError(f"edge ({s}, {t}) out of range [0, {self.node_count})")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def successors(self) -> list[list[int]]:
        """Adjacency lists (sorted, deterministic)."""
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for s, t in sorted(self.edges):
            adj[s].append(t)
        return adj

    def predecessors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for s, t in sorted(self.edges):
            adj[t].append(s)
        return adj

    def reversed(self) -> "Digraph":
        return Digraph(self.node_count, frozenset((t, s) for s, t in self.edges))


@dataclass(frozen=True)
class StructuredMatrix:
    """Zero/nonzero pattern of a matrix: the social digraph in matrix form."""

    rows: int
    cols: int
    support: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if not isinstance(self.support, frozenset):
            object.__setattr__(self, "support", frozenset(self.support))
        for i, j in self.support:
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"support entry ({i}, {j}) out of bounds "
                                 f"{self.rows}x{self.cols}")

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def nnz(self) -> int:
        return len(self.support)

    def row_support(self, i: int) -> frozenset[int]:
        return frozenset(j for r, j in self.support if r == i)

    def transpose(self) -> "StructuredMatrix":
        return StructuredMatrix(self.cols, self.rows,
                                frozenset((j, i) for i, j in self.support))


def stack_rows(top: StructuredMatrix, bottom: StructuredMatrix) -> StructuredMatrix:
    """Vertical stack of two structures with equal column counts."""
    if top.cols != bottom.cols:
        raise DimensionError(f"column mismatch: {top.cols} vs {bottom.cols}")
    support = set(top.support)
    support.update((i + top.rows, j) for i, j in bottom.support)
    return StructuredMatrix(top.rows + bottom.rows, top.cols, frozenset(support))


@dataclass(frozen=True)
class CompositeDigraph:
    """State digraph augmented with output nodes and state->output edges.

    Output nodes are sinks: they have no outgoing edges.  ``output_edges``
    holds pairs ``(state, output)``.  ``output_rows`` maps each retained
    output node back to the row of the observation structure it came from
    (rows with empty support are dropped at construction).
    """

    state_count: int
    output_count: int
    state_edges: frozenset[tuple[int, int]]
    output_edges: frozenset[tuple[int, int]]
    output_rows: tuple[int, ...]

    def state_graph(self) -> Digraph:
        return Digraph(self.state_count, self.state_edges)

    @property
    def node_count(self) -> int:
        return self.state_count + self.output_count

    def full_graph(self) -> Digraph:
        """One digraph over states then outputs (output k is node n + k)."""
        n = self.state_count
        edges = set(self.state_edges)
        edges.update((s, n + o) for s, o in self.output_edges)
        return Digraph(self.node_count, frozenset(edges))


def digraph_from_structure(a: StructuredMatrix) -> Digraph:
    """Digraph of a square structure: entry ``(i, j)`` gives edge ``j -> i``."""
    if not a.is_square:
        raise DimensionError(f"structure must be square, got {a.rows}x{a.cols}")
    return Digraph(a.rows, frozenset((j, i) for i, j in a.support))


def structure_from_digraph(g: Digraph) -> StructuredMatrix:
    """Inverse of :func:`digraph_from_structure` (round-trip identity)."""
    return StructuredMatrix(g.node_count, g.node_count,
                            frozenset((t, s) for s, t in g.edges))


def composite(a: StructuredMatrix, h: StructuredMatrix) -> CompositeDigraph:
    """Composite digraph of a system/observation structure pair.

    Observation rows with empty support are dropped with a diagnostic
    rather than rejected: datasets and user plans may contain placeholder
    agents.
    """
    if not a.is_square:
        raise DimensionError(f"system structure must be square, got {a.rows}x{a.cols}")
    if h.cols != a.cols:
        raise DimensionError(f"observation columns {h.cols} != state count {a.cols}")

    by_row: dict[int, set[int]] = {}
    for i, j in h.support:
        by_row.setdefault(i, set()).add(j)
    kept = tuple(sorted(by_row))
    dropped = h.rows - len(kept)
    if dropped:
        logger.warning("dropping %d observation row(s) with empty support", dropped)

    out_edges = set()
    for k, row in enumerate(kept):
        out_edges.update((j, k) for j in by_row[row])

    return CompositeDigraph(
        state_count=a.rows,
        output_count=len(kept),
        state_edges=digraph_from_structure(a).edges,
        output_edges=frozenset(out_edges),
        output_rows=kept,
    )


def reachable(g: Digraph, sources: Iterable[int]) -> frozenset[int]:
    """Forward reachability closure of ``sources`` (sources included)."""
    seen = set()
    queue: deque[int] = deque()
    for s in sources:
        if not (0 <= s < g.node_count):
            raise ValueError(f"source {s} out of range")
        if s not in seen:
            seen.add(s)
            queue.append(s)
    adj = g.successors()
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return frozenset(seen)
