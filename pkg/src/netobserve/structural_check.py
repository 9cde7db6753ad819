"""Structural observability tests for (A, H) and the fused agent pair.

A pair is structurally observable iff, in the composite digraph,

* every state begins a path ending at an output (*accessibility*), and
* the stacked structure [A; H] has full structural rank, tested as the
  size of its maximum matching rather than by enumerating cycle/path
  covers (the two are equivalent and matching is polynomial).

The distributed test applies the same machinery to the pair
``(W (x) A, D_H)``: the Kronecker support of the fusion structure with the
system structure, observed through the block-diagonal of the per-agent
accumulated observation structures.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph_core import (
    DimensionError,
    StructuredMatrix,
    composite,
    reachable,
    stack_rows,
)
from .matching import structural_rank
from .netdesign import AgentNetwork, w_structure


@dataclass(frozen=True)
class ObservabilityVerdict:
    accessible: bool
    inaccessible_states: tuple[int, ...]
    s_rank_ok: bool
    deficiency: int

    @property
    def observable(self) -> bool:
        return self.accessible and self.s_rank_ok

    def to_json(self) -> dict:
        return {
            "observable": self.observable,
            "accessible": self.accessible,
            "inaccessible_states": list(self.inaccessible_states),
            "s_rank_ok": self.s_rank_ok,
            "s_rank_deficiency": self.deficiency,
        }


def check_centralized(a: StructuredMatrix, h: StructuredMatrix) -> ObservabilityVerdict:
    """Two-part structural test on the pair (A, H): every state must reach
    an output, and the stacked support must have full structural rank."""
    comp = composite(a, h)
    n = comp.state_count
    full = comp.full_graph()
    outputs = range(n, n + comp.output_count)
    # A state is accessible iff it reaches an output, i.e. iff an output
    # reaches it in the reversed composite graph.
    accessible_set = reachable(full.reversed(), outputs) if comp.output_count else frozenset()
    inaccessible = tuple(v for v in range(n) if v not in accessible_set)

    rank = structural_rank(stack_rows(a, h))
    return ObservabilityVerdict(
        accessible=not inaccessible,
        inaccessible_states=inaccessible,
        s_rank_ok=(rank == n),
        deficiency=n - rank,
    )


def kron_structure(w: StructuredMatrix, a: StructuredMatrix) -> StructuredMatrix:
    """Support of the Kronecker product: block (i, j) is a copy of A's
    support wherever (i, j) lies in W's support."""
    support = frozenset(
        (iw * a.rows + ia, jw * a.cols + ja)
        for iw, jw in w.support
        for ia, ja in a.support
    )
    return StructuredMatrix(w.rows * a.rows, w.cols * a.cols, support)


def block_diag(blocks: list[StructuredMatrix]) -> StructuredMatrix:
    rows = cols = 0
    support = set()
    for b in blocks:
        support.update((rows + i, cols + j) for i, j in b.support)
        rows += b.rows
        cols += b.cols
    return StructuredMatrix(rows, cols, frozenset(support))


def agent_fused_structure(net: AgentNetwork, agent: int, n: int) -> StructuredMatrix:
    """Structure of the agent's accumulated observation: the union of
    H_j^T H_j over the agent itself and its alpha in-neighborhood."""
    support = set()
    for j in (agent, *net.alpha_in_neighbors(agent)):
        for p in net.observations[j]:
            support.add((p.state, p.state))
    return StructuredMatrix(n, n, frozenset(support))


def fused_observation_blocks(net: AgentNetwork, n: int) -> list[StructuredMatrix]:
    return [agent_fused_structure(net, i, n) for i in range(net.agent_count)]


def _drop_empty_rows(s: StructuredMatrix) -> StructuredMatrix:
    occupied = sorted({i for i, _ in s.support})
    renumber = {i: k for k, i in enumerate(occupied)}
    return StructuredMatrix(len(occupied), s.cols,
                            frozenset((renumber[i], j) for i, j in s.support))


def check_distributed(net: AgentNetwork, a: StructuredMatrix) -> ObservabilityVerdict:
    """Observability of the fused pair (W (x) A, D_H) for the given network.

    Caveat: the test treats every nonzero of W (x) A as a free parameter,
    while the filter repeats the same A entries across blocks, so a passing
    verdict is necessary but not sufficient for the Kronecker-tied pair.
    Pair it with the topology conditions (``verify_topology``) and the
    numeric rank suite for a sufficient certificate.
    """
    if not a.is_square:
        raise DimensionError("system structure must be square")
    w = w_structure(net)
    # The fused blocks are square with mostly empty rows; empty observation
    # rows carry no information, so drop them up front instead of letting
    # the composite construction warn about each one.
    d_h = _drop_empty_rows(block_diag(fused_observation_blocks(net, a.rows)))
    return check_centralized(kron_structure(w, a), d_h)


def plan_observation_structure(states: tuple[int, ...], n: int) -> StructuredMatrix:
    """Stacked single-state observation rows (one row per observed state)."""
    return StructuredMatrix(len(states), n,
                            frozenset((k, s) for k, s in enumerate(states)))
