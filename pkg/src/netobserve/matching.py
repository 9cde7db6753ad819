"""Bipartite view of a digraph: maximum matching, structural rank, contractions.

The bipartite graph of an n-node digraph has a *plus* copy of every node
(source side, columns of the system structure) and a *minus* copy (sink
side, rows).  Digraph edge ``j -> i`` becomes bipartite edge ``(j+, i-)``.

A maximum matching certifies the structural rank; the nodes of the plus
side left unmatched witness the rank deficiency.  Each unmatched plus node
spans a *contraction set*: all plus nodes reachable from it by alternating
paths in the auxiliary graph (matching edges reversed).  Observing any
single state of a contraction set recovers one unit of structural rank.

Matching-dependence caveat: the family of contraction sets obtained from
alternating search genuinely depends on which maximum matching is used
(only the union of the members is matching-invariant).  To keep reports
reproducible and matching-independent, :func:`contractions` always derives
the family from the canonical matching produced by :func:`max_matching`;
the raw per-matching computation is available as
:func:`family_for_matching`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .graph_core import Digraph, DimensionError, StructuredMatrix, digraph_from_structure

_INF = -1


class MatchingError(ValueError):
    """Raised when a supplied matching is invalid or not maximum."""


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite double cover of a digraph: edges ``(plus, minus)``."""

    node_count: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.edges, frozenset):
            object.__setattr__(self, "edges", frozenset(self.edges))
        for p, m in self.edges:
            if not (0 <= p < self.node_count and 0 <= m < self.node_count):
                raise ValueError(f"bipartite edge ({p}, {m}) out of range")

    def plus_adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for p, m in sorted(self.edges):
            adj[p].append(m)
        return adj


@dataclass(frozen=True)
class Matching:
    """A set of pairwise disjoint bipartite edges."""

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        if not isinstance(self.pairs, frozenset):
            object.__setattr__(self, "pairs", frozenset(self.pairs))
        plus = [p for p, _ in self.pairs]
        minus = [m for _, m in self.pairs]
        if len(set(plus)) != len(plus) or len(set(minus)) != len(minus):
            raise MatchingError("two matching edges share an endpoint")

    @property
    def size(self) -> int:
        return len(self.pairs)

    def minus_of(self) -> dict[int, int]:
        return {p: m for p, m in self.pairs}

    def plus_of(self) -> dict[int, int]:
        return {m: p for p, m in self.pairs}

    def unmatched_plus(self, node_count: int) -> tuple[int, ...]:
        matched = {p for p, _ in self.pairs}
        return tuple(i for i in range(node_count) if i not in matched)


@dataclass(frozen=True)
class ContractionSet:
    witness: int
    members: frozenset[int]

    def __post_init__(self):
        if self.witness not in self.members:
            raise ValueError("witness must belong to the contraction set")


@dataclass(frozen=True)
class ContractionFamily:
    """One contraction set per unit of structural-rank deficiency."""

    sets: tuple[ContractionSet, ...]

    @property
    def union_members(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.sets:
            out.update(c.members)
        return frozenset(out)

    def as_sets(self) -> set[frozenset[int]]:
        return {c.members for c in self.sets}


def build_bipartite(g: Digraph) -> BipartiteGraph:
    """Digraph edge ``j -> i`` becomes bipartite edge ``(j+, i-)``."""
    return BipartiteGraph(g.node_count, frozenset(g.edges))


def hopcroft_karp(node_count: int, adjacency: list[list[int]]) -> dict[int, int]:
    """Maximum bipartite matching in O(sqrt(n) |E|), mapping plus -> minus.

    Deterministic: augmenting paths are explored in increasing node order,
    so a given graph always yields the same matching.
    """
    pair_plus: dict[int, int] = {}
    pair_minus: dict[int, int] = {}
    dist: dict[int, int] = {}

    def bfs() -> bool:
        queue: deque[int] = deque()
        for p in range(node_count):
            if p not in pair_plus:
                dist[p] = 0
                queue.append(p)
            else:
                dist[p] = _INF
        found = False
        while queue:
            p = queue.popleft()
            for m in adjacency[p]:
                q = pair_minus.get(m)
                if q is None:
                    found = True
                elif dist[q] == _INF:
                    dist[q] = dist[p] + 1
                    queue.append(q)
        return found

    def dfs(p: int) -> bool:
        for m in adjacency[p]:
            q = pair_minus.get(m)
            if q is None or (dist[q] == dist[p] + 1 and dfs(q)):
                pair_plus[p] = m
                pair_minus[m] = p
                return True
        dist[p] = _INF
        return False

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 2 * node_count + 100))
    try:
        while bfs():
            for p in range(node_count):
                if p not in pair_plus:
                    dfs(p)
    finally:
        sys.setrecursionlimit(old_limit)
    return pair_plus


def max_matching(b: BipartiteGraph) -> Matching:
    """Canonical maximum matching of the bipartite graph."""
    pair = hopcroft_karp(b.node_count, b.plus_adjacency())
    return Matching(frozenset(pair.items()))


def _has_augmenting_path(b: BipartiteGraph, m: Matching) -> bool:
    """Berge's criterion: a matching is maximum iff no augmenting path exists."""
    adj = b.plus_adjacency()
    plus_of = m.plus_of()
    minus_of = m.minus_of()
    frontier = deque(m.unmatched_plus(b.node_count))
    seen_plus = set(frontier)
    while frontier:
        p = frontier.popleft()
        for mi in adj[p]:
            q = plus_of.get(mi)
            if q is None:
                if minus_of.get(p) != mi:
                    return True
            elif q not in seen_plus:
                seen_plus.add(q)
                frontier.append(q)
    return False


def is_maximum(b: BipartiteGraph, m: Matching) -> bool:
    if not m.pairs <= b.edges:
        raise MatchingError("matching contains edges outside the graph")
    return not _has_augmenting_path(b, m)


def structural_rank(s: StructuredMatrix) -> int:
    """Maximum matching size between rows and columns of an arbitrary structure."""
    # Plus side = columns, minus side = rows, matching on the support.
    n = max(s.rows, s.cols)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in sorted(s.support):
        adj[j].append(i)
    return len(hopcroft_karp(n, adj))


def s_rank(a: StructuredMatrix) -> int:
    """Structural rank of a square structure (size of a maximum matching)."""
    if not a.is_square:
        raise DimensionError(f"s_rank requires a square structure, got {a.rows}x{a.cols}")
    return max_matching(build_bipartite(digraph_from_structure(a))).size


def family_for_matching(b: BipartiteGraph, m: Matching) -> ContractionFamily:
    """Contraction family by alternating BFS under a *specific* matching.

    The auxiliary graph keeps non-matching edges plus->minus and reverses
    matching edges minus->plus, so a plain directed BFS encodes the
    alternation without parity bookkeeping.
    """
    if not is_maximum(b, m):
        raise MatchingError("contractions require a maximum matching")
    adj = b.plus_adjacency()
    plus_of = m.plus_of()
    minus_of = m.minus_of()
    sets = []
    for witness in m.unmatched_plus(b.node_count):
        members = {witness}
        queue = deque([witness])
        while queue:
            p = queue.popleft()
            for mi in adj[p]:
                if minus_of.get(p) == mi:
                    continue  # matched edges only run minus -> plus
                q = plus_of.get(mi)
                if q is not None and q not in members:
                    members.add(q)
                    queue.append(q)
        sets.append(ContractionSet(witness, frozenset(members)))
    return ContractionFamily(tuple(sets))


def contractions(b: BipartiteGraph, m: Matching) -> ContractionFamily:
    """Canonical contraction family of the bipartite graph.

    The supplied matching is validated (it must be maximum) but the family
    itself is computed from the canonical matching of :func:`max_matching`,
    so the result is independent of which maximum matching the caller
    supplies.  See the module docstring for why this canonicalization is
    needed.
    """
    if not is_maximum(b, m):
        raise MatchingError("contractions require a maximum matching")
    return family_for_matching(b, max_matching(b))


def matching_report(a: StructuredMatrix) -> dict:
    """JSON-ready report: s_rank, unmatched witnesses, contraction sets."""
    b = build_bipartite(digraph_from_structure(a))
    m = max_matching(b)
    family = family_for_matching(b, m)
    return {
        "s_rank": m.size,
        "unmatched": sorted(m.unmatched_plus(b.node_count)),
        "contractions": [
            {"witness": c.witness, "members": sorted(c.members)} for c in family.sets
        ],
    }
