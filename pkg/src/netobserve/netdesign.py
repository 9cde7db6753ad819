"""Agent communication topology synthesis and verification.

The agent network has two layers: over the alpha layer agents forward raw
observations, over the beta layer they forward predictions.  An edge
``(u, v)`` in either layer means *u sends to v* (v receives).  The fused
structure ``W`` therefore has support ``(v, u)`` — row = receiver — for
every beta edge, plus the full diagonal (every agent keeps its own
prediction), so ``W`` always has full structural rank.

Conditions verified per agent ``i``:

(i)    for every contraction set, ``i`` receives a direct alpha link from
       an agent observing a state of that set (its own observations count);
(ii-a) for every matched parent SCC, ``i`` receives a direct alpha link
       from an agent observing a state of that SCC, or
(ii-b) ``i`` has a directed path in the beta layer to an agent observing a
       state of that SCC.

For (ii-b) the path runs in the *send* direction: agent ``i``'s block of
the global error dynamics is driven into observed blocks along the chain
``i`` sends through, which is what makes its states accessible.  The
reversed reading is also computed and reported for diagnosis, since the
two are easy to confuse; the numeric suite confirms the send direction is
the one tied to observability of the fused pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classify import ALPHA, Decomposition, ObservationPlan, Placement
from .graph_core import Digraph, StructuredMatrix, reachable


class DesignError(ValueError):
    """Raised for unusable design inputs (e.g. an empty plan)."""


@dataclass(frozen=True)
class AgentNetwork:
    agent_count: int
    alpha_edges: frozenset[tuple[int, int]]
    beta_edges: frozenset[tuple[int, int]]
    observations: tuple[tuple[Placement, ...], ...]  # per agent

    def __post_init__(self):
        for u, v in self.alpha_edges | self.beta_edges:
            if not (0 <= u < self.agent_count and 0 <= v < self.agent_count):
                raise ValueError(f"edge ({u}, {v}) out of agent range")
        if len(self.observations) != self.agent_count:
            raise ValueError("observations must list every agent")

    def alpha_in_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(u for u, v in self.alpha_edges if v == i))

    def beta_in_neighbors(self, i: int) -> tuple[int, ...]:
        return tuple(sorted(u for u, v in self.beta_edges if v == i))

    def beta_graph(self) -> Digraph:
        return Digraph(self.agent_count, frozenset(self.beta_edges))


@dataclass(frozen=True)
class TopologyVerdict:
    ok: bool
    violations: tuple[tuple[int, str], ...] = field(default_factory=tuple)


def agents_from_plan(plan: ObservationPlan, agent_count: int | None = None
                     ) -> tuple[tuple[Placement, ...], ...]:
    """One agent per placement; extra agents hold no observation."""
    n = len(plan.placements) if agent_count is None else agent_count
    if n < len(plan.placements):
        raise DesignError(f"{n} agents cannot hold {len(plan.placements)} placements")
    obs: list[list[Placement]] = [[] for _ in range(n)]
    for p in plan.placements:
        obs[p.agent].append(p)
    return tuple(tuple(o) for o in obs)


def design_canonical(plan: ObservationPlan, agent_count: int | None = None) -> AgentNetwork:
    """Alpha-agents broadcast to everyone; the beta layer is a directed ring.

    The broadcast satisfies the direct-link condition (i) everywhere, and
    the ring gives every agent a directed path to every beta-agent, i.e.
    condition (ii-b).  These conditions are necessary for the distributed
    error dynamics to be stabilizable; sufficiency is checked numerically
    rather than assumed.
    """
    if not plan.placements:
        raise DesignError("cannot design a network for an empty observation plan")
    observations = agents_from_plan(plan, agent_count)
    n = len(observations)
    alpha = set()
    for p in plan.placements:
        if p.kind == ALPHA:
            alpha.update((p.agent, j) for j in range(n) if j != p.agent)
    ring = set()
    if n > 1:
        ring = {(i, (i + 1) % n) for i in range(n)}
    return AgentNetwork(n, frozenset(alpha), frozenset(ring), observations)


def _observers_of(net: AgentNetwork, states: frozenset[int],
                  alpha_only: bool) -> set[int]:
    found = set()
    for agent, placements in enumerate(net.observations):
        for p in placements:
            if p.state in states and (not alpha_only or p.kind == ALPHA):
                found.add(agent)
    return found


def verify_topology(net: AgentNetwork, dec: Decomposition) -> TopologyVerdict:
    """Check conditions (i) and (ii) for every agent; the verdict carries
    one entry per unmet condition instead of raising."""
    violations: list[tuple[int, str]] = []
    beta_fwd = net.beta_graph()

    for i in range(net.agent_count):
        direct = set(net.alpha_in_neighbors(i)) | {i}
        for ci, c in enumerate(dec.family.sets):
            if not (direct & _observers_of(net, c.members, alpha_only=True)):
                violations.append(
                    (i, f"(i): no direct alpha link covering contraction {ci}"))
        sends_to = reachable(beta_fwd, [i])
        for j in dec.matched_parents:
            observers = _observers_of(net, dec.sccs.components[j], alpha_only=False)
            if direct & observers:
                continue  # (ii-a)
            if sends_to & observers:
                continue  # (ii-b), send direction
            violations.append(
                (i, f"(ii): no direct link or beta path to an observer of SCC {j}"))
    return TopologyVerdict(ok=not violations, violations=tuple(violations))


def verify_topology_reversed_beta(net: AgentNetwork, dec: Decomposition) -> TopologyVerdict:
    """Diagnostic variant of (ii-b) with the beta path direction reversed."""
    flipped = AgentNetwork(
        net.agent_count, net.alpha_edges,
        frozenset((v, u) for u, v in net.beta_edges), net.observations)
    return verify_topology(flipped, dec)


def w_structure(net: AgentNetwork) -> StructuredMatrix:
    """Prediction-fusion structure: row i holds {i} and its beta in-neighbors."""
    support = {(i, i) for i in range(net.agent_count)}
    support.update((v, u) for u, v in net.beta_edges)
    return StructuredMatrix(net.agent_count, net.agent_count, frozenset(support))


def network_to_json(net: AgentNetwork) -> dict:
    return {
        "agents": net.agent_count,
        "alpha_edges": sorted(map(list, net.alpha_edges)),
        "beta_edges": sorted(map(list, net.beta_edges)),
        "w_support": sorted(map(list, w_structure(net).support)),
        "observations": [
            [{"state": p.state, "kind": p.kind} for p in obs]
            for obs in net.observations
        ],
    }


def network_from_json(data: dict, plan: ObservationPlan) -> AgentNetwork:
    """Rebuild a network from its JSON dump plus the matching plan."""
    observations = agents_from_plan(plan, data["agents"])
    return AgentNetwork(
        agent_count=data["agents"],
        alpha_edges=frozenset(tuple(e) for e in data["alpha_edges"]),
        beta_edges=frozenset(tuple(e) for e in data["beta_edges"]),
        observations=observations,
    )


def network_to_dot(net: AgentNetwork) -> str:
    """DOT export: alpha edges solid, beta edges dashed."""
    lines = ["digraph agents {"]
    for i, obs in enumerate(net.observations):
        states = ",".join(f"x{p.state}" for p in obs) or "-"
        kinds = "".join(sorted({p.kind[0] for p in obs})) or "idle"
        lines.append(f'  a{i} [label="a{i} ({kinds}: {states})"];')
    for u, v in sorted(net.alpha_edges):
        lines.append(f"  a{u} -> a{v} [style=solid];")
    for u, v in sorted(net.beta_edges):
        lines.append(f"  a{u} -> a{v} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"
