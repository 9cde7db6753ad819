"""Observation placement: Type-alpha / Type-beta selection and minimal counts.

Two kinds of observed states make a digraph structurally observable:

* *alpha* placements, one **distinct** state per contraction set, recover
  the structural rank;
* *beta* placements, one state per matched parent SCC, recover
  accessibility.

A state shared by a contraction and a matched parent SCC can serve both
duties at once, so the minimal count corrects for the overlap.  The
overlap is resolved by a maximum bipartite matching between contraction
sets and matched parent SCCs with a nonempty state intersection: one
alpha observation can absorb at most one beta requirement and one
contraction offers at most one placement, so the matching size is exactly
the achievable saving.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .graph_core import Digraph, reachable, structure_from_digraph
from .matching import (
    ContractionFamily,
    build_bipartite,
    contractions,
    hopcroft_karp,
    max_matching,
    s_rank,
)
from .scc import SccDecomposition, SccLabel, classify_sccs, matched_parent_indices, tarjan_scc

logger = logging.getLogger(__name__)

ALPHA = "alpha"
BETA = "beta"


class PlanError(RuntimeError):
    """Internal contradiction while building an observation plan."""


@dataclass(frozen=True)
class Placement:
    state: int
    agent: int
    kind: str  # ALPHA or BETA
    covers_contraction: int | None = None
    covers_scc: int | None = None
    repair: bool = False


@dataclass(frozen=True)
class ObservationPlan:
    placements: tuple[Placement, ...]

    @property
    def n_alpha(self) -> int:
        return sum(1 for p in self.placements if p.kind == ALPHA)

    @property
    def n_beta(self) -> int:
        return sum(1 for p in self.placements if p.kind == BETA)

    @property
    def repairs(self) -> tuple[Placement, ...]:
        return tuple(p for p in self.placements if p.repair)

    @property
    def states(self) -> tuple[int, ...]:
        return tuple(p.state for p in self.placements)

    def to_json(self, labels: tuple[str, ...] | None = None) -> dict:
        return {
            "placements": [
                {
                    "state": p.state,
                    "label": labels[p.state] if labels else str(p.state),
                    "agent": p.agent,
                    "kind": p.kind,
                    "covers_contraction": p.covers_contraction,
                    "covers_scc": p.covers_scc,
                }
                for p in self.placements
            ],
            "n_alpha": self.n_alpha,
            "n_beta": self.n_beta,
            "repairs": [p.state for p in self.repairs],
        }


def plan_from_json(data: dict) -> ObservationPlan:
    placements = tuple(
        Placement(
            state=item["state"],
            agent=item["agent"],
            kind=item["kind"],
            covers_contraction=item.get("covers_contraction"),
            covers_scc=item.get("covers_scc"),
        )
        for item in data["placements"]
    )
    return ObservationPlan(placements)


@dataclass(frozen=True)
class EquivalenceReport:
    """Interchangeable states per requirement (any member is equivalent)."""

    alpha_classes: tuple[frozenset[int], ...]
    beta_classes: tuple[frozenset[int], ...]


@dataclass(frozen=True)
class Decomposition:
    """Everything the planner needs, computed once from the digraph."""

    digraph: Digraph
    family: ContractionFamily
    sccs: SccDecomposition
    labels: tuple[SccLabel, ...]
    s_rank: int

    @property
    def matched_parents(self) -> tuple[int, ...]:
        return matched_parent_indices(self.labels)


def decompose(g: Digraph) -> Decomposition:
    b = build_bipartite(g)
    m = max_matching(b)
    d = tarjan_scc(g)
    return Decomposition(
        digraph=g,
        family=contractions(b, m),
        sccs=d,
        labels=classify_sccs(g, d),
        s_rank=m.size,
    )


def _overlap_matching(dec: Decomposition) -> dict[int, int]:
    """Max matching contraction-index -> matched-parent position (both 0-based)."""
    parents = dec.matched_parents
    comp_nodes = [dec.sccs.components[j] for j in parents]
    size = max(len(dec.family.sets), len(parents), 1)
    adj: list[list[int]] = [[] for _ in range(size)]
    for ci, c in enumerate(dec.family.sets):
        # Ties broken by lowest SCC index: adjacency kept in parent order.
        adj[ci] = [pj for pj, nodes in enumerate(comp_nodes) if c.members & nodes]
    pair = hopcroft_karp(size, adj)
    return {ci: pj for ci, pj in pair.items() if ci < len(dec.family.sets)}


def necessary_counts(dec: Decomposition) -> dict:
    """Counts of necessary observations, with the overlap correction."""
    n_alpha = len(dec.family.sets)
    n_beta_raw = len(dec.matched_parents)
    saving = len(_overlap_matching(dec))
    return {
        "n_alpha": n_alpha,
        "n_beta_raw": n_beta_raw,
        "n_beta_min": n_beta_raw - saving,
        "min_total": n_alpha + n_beta_raw - saving,
        "overlap_matching_size": saving,
    }


def _avoidable(dec: Decomposition, states: set[int]) -> bool:
    """True when some maximum matching leaves every state in ``states`` unmatched.

    Observing the set then recovers the full deficiency: being distinct per
    contraction is necessary but not sufficient, the chosen states must also
    be *simultaneously* unmatched under a single maximum matching, which
    holds exactly when deleting their columns preserves the matching size.
    """
    g = dec.digraph
    adj: list[list[int]] = [[] for _ in range(g.node_count)]
    for s, t in sorted(g.edges):
        if s not in states:
            adj[s].append(t)
    return len(hopcroft_karp(g.node_count, adj)) == dec.s_rank


def _distinct_representatives(
    dec: Decomposition, pinned: dict[int, list[int]]
) -> dict[int, int]:
    """One distinct state per contraction, honoring pinned choices when sound.

    The witness system (the canonical matching's unmatched nodes) is always
    a valid choice; each pinned overlap state is then swapped in only if the
    resulting set stays simultaneously avoidable, so a pinned choice can
    never silently break S-rank recovery.
    """
    cs = dec.family.sets
    chosen = {ci: c.witness for ci, c in enumerate(cs)}
    for ci, candidates in sorted(pinned.items()):
        if chosen[ci] in candidates:
            continue
        for state in candidates:
            if state in chosen.values():
                continue
            trial = dict(chosen)
            trial[ci] = state
            if _avoidable(dec, set(trial.values())):
                chosen = trial
                break
        else:
            logger.warning(
                "no overlap-pinned state for contraction %d is "
                "simultaneously avoidable; keeping witness %d",
                ci, chosen[ci])
    return chosen


def place_agents(dec: Decomposition) -> ObservationPlan:
    """Choose observed states satisfying the alpha/beta necessity conditions.

    Alpha placements are chosen preferentially inside uncovered matched
    parent SCCs (via the overlap matching), then as lowest-id distinct
    states.  Beta placements take the lowest-id state of every matched
    parent SCC left uncovered.  If the resulting plan still leaves states
    without a downstream observation (possible on adversarial graphs with
    unmatched parent SCCs), repair placements are appended and logged.
    """
    parents = dec.matched_parents
    overlap = _overlap_matching(dec)
    pinned: dict[int, list[int]] = {}
    for ci, pj in sorted(overlap.items()):
        comp = dec.sccs.components[parents[pj]]
        pinned[ci] = sorted(dec.family.sets[ci].members & comp)
    chosen = _distinct_representatives(dec, pinned)
    if len(set(chosen.values())) != len(dec.family.sets):
        raise PlanError("distinct alpha states do not exist; matching theory "
                        "guarantees they do, so this is an internal error")

    placements: list[Placement] = []
    covered_parents: set[int] = set()
    for ci in sorted(chosen):
        state = chosen[ci]
        comp_idx = dec.sccs.component_of[state]
        covers_scc = None
        if comp_idx in parents:
            covers_scc = comp_idx
            covered_parents.add(comp_idx)
        placements.append(Placement(state=state, agent=len(placements), kind=ALPHA,
                                    covers_contraction=ci, covers_scc=covers_scc))

    for j in parents:
        if j not in covered_parents:
            placements.append(Placement(state=min(dec.sccs.components[j]),
                                        agent=len(placements), kind=BETA,
                                        covers_scc=j))

    placements.extend(_accessibility_repairs(dec, placements))
    return ObservationPlan(tuple(placements))


def _accessibility_repairs(
    dec: Decomposition, placements: list[Placement]
) -> list[Placement]:
    observed = {p.state for p in placements}
    g = dec.digraph
    accessible = reachable(g.reversed(), observed) if observed else frozenset()
    uncovered_comps = {dec.sccs.component_of[v]
                       for v in range(g.node_count) if v not in accessible}
    if not uncovered_comps:
        return []
    # Sinks of the uncovered sub-DAG: one repair observation each covers
    # every uncovered component upstream of it.
    sinks = set(uncovered_comps)
    for s, t in dec.sccs.condensation.edges:
        if s in uncovered_comps and t in uncovered_comps and s != t:
            sinks.discard(s)
    repairs = []
    for j in sorted(sinks):
        state = min(dec.sccs.components[j])
        logger.warning("accessibility repair: extra observation of state %d", state)
        repairs.append(Placement(state=state, agent=len(placements) + len(repairs),
                                 kind=BETA, covers_scc=j, repair=True))
    return repairs


def equivalence_report(dec: Decomposition) -> EquivalenceReport:
    return EquivalenceReport(
        alpha_classes=tuple(c.members for c in dec.family.sets),
        beta_classes=tuple(dec.sccs.components[j] for j in dec.matched_parents),
    )


def structural_counts_report(g: Digraph, name: str = "") -> dict:
    """Full-pipeline summary row for a dataset digraph."""
    dec = decompose(g)
    counts = necessary_counts(dec)
    n_matched = sum(1 for lab in dec.labels if lab.is_matched)
    assert dec.s_rank == s_rank(structure_from_digraph(g))
    return {
        "name": name,
        "n": g.node_count,
        "edges": g.edge_count,
        "s_rank": dec.s_rank,
        "n_alpha": counts["n_alpha"],
        "n_beta_raw": counts["n_beta_raw"],
        "n_beta_min": counts["n_beta_min"],
        "min_total": counts["min_total"],
        "n_components": len(dec.sccs.components),
        "n_matched_components": n_matched,
        "n_matched_parent": len(dec.matched_parents),
    }
