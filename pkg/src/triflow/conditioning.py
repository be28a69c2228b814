"""From raw capacities to a conditioned network ready for decomposition.

The conditioning pipeline computes a 3-unit flow against the reduced
capacities (capacity 2 counts as 1.5, capacity 1 as 1, both stored doubled),
prunes zero-flow edges, builds the minimum-cut chain, demotes capacity-2
edges buried inside one chain part, and recomputes.  The result satisfies:

1. the reduced max flow is exactly 3,
2. every retained edge carries doubled flow in {1, 2, 3},
3. no capacity-2 edge has both endpoints inside a single chain part.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .cutchain import CutChain, FLOW_TARGET_DOUBLED, REDUCED_DOUBLED, build_cut_chain
from .errors import NotNetworkCodingClass, UnknownNode
from .graph import Digraph, FlowResult, cancel_cycles, max_flow

# Reduced values are multiples of 0.5 (one doubled unit), so any value above
# 3 is at least 3.5; probing with this limit settles "more than 3".
_DIVERSITY_PROBE = FLOW_TARGET_DOUBLED + 1


@dataclass(frozen=True)
class Network:
    """Raw input: digraph, free integer capacities and the endpoints."""

    graph: Digraph
    free_cap: Mapping
    source: object
    target: object


@dataclass(frozen=True)
class CodingNetwork:
    """Digraph with coding capacities c(e) in {1, 2}."""

    graph: Digraph
    coding_cap: Mapping
    source: object
    target: object

    def reduced_caps(self) -> dict:
        """Reduced capacities in doubled units: c=1 -> 2, c=2 -> 3."""
        return {e: REDUCED_DOUBLED[self.coding_cap[e]] for e in self.graph.edge_ids}


class FeasibilityKind(Enum):
    DIVERSITY_CODING = "diversity_coding"    # reduced max flow > 3
    NETWORK_CODING = "network_coding"        # reduced max flow = 3
    UNPROTECTED_2FLOW = "unprotected_2flow"  # reduced < 3 but 2 units route
    INFEASIBLE = "infeasible"                # cannot even route 2 units


#: Classes for which a single-failure protection plan exists.
PROTECTABLE = (FeasibilityKind.DIVERSITY_CODING, FeasibilityKind.NETWORK_CODING)


@dataclass(frozen=True)
class Feasibility:
    kind: FeasibilityKind
    reduced_value: int  # doubled units; probe-limited for diversity coding

    @property
    def protectable(self) -> bool:
        return self.kind in PROTECTABLE


@dataclass(frozen=True)
class ConditionedNetwork:
    """A coding network (possibly demoted), a supporting all-positive 3-unit
    flow in doubled units, and the maximal minimum-cut chain."""

    network: CodingNetwork
    flow: FlowResult
    chain: CutChain


def derive_coding_capacities(net: Network) -> CodingNetwork:
    """Clamp free capacities to coding capacities: drop k=0, c = min(k, 2).

    More than 2 units on one edge cannot help: at most one arc copy per
    subflow crosses an edge, and there are only three subflows of which two
    may share an edge only via distinct copies.
    """
    kept = []
    cap = {}
    for eid, tail, head in net.graph.edges():
        k = net.free_cap[eid]
        if k <= 0:
            continue
        kept.append((eid, tail, head))
        cap[eid] = min(k, 2)
    graph = Digraph(net.graph.nodes, kept)
    return CodingNetwork(graph=graph, coding_cap=cap,
                         source=net.source, target=net.target)


def classify_feasibility(cn: CodingNetwork) -> Feasibility:
    """Classify protectability from the reduced max-flow value."""
    if cn.source not in cn.graph:
        raise UnknownNode(cn.source)
    if cn.target not in cn.graph:
        raise UnknownNode(cn.target)
    reduced = cn.reduced_caps()
    probe = max_flow(cn.graph, reduced, cn.source, cn.target, limit=_DIVERSITY_PROBE)
    if probe.value >= _DIVERSITY_PROBE:
        return Feasibility(FeasibilityKind.DIVERSITY_CODING, probe.value)
    if probe.value == FLOW_TARGET_DOUBLED:
        return Feasibility(FeasibilityKind.NETWORK_CODING, probe.value)
    integral = max_flow(cn.graph, dict(cn.coding_cap), cn.source, cn.target, limit=2)
    if integral.value >= 2:
        return Feasibility(FeasibilityKind.UNPROTECTED_2FLOW, probe.value)
    return Feasibility(FeasibilityKind.INFEASIBLE, probe.value)


def _settle(graph: Digraph, coding_cap: Mapping, s, t):
    """Max flow, cycle cancellation and zero-flow pruning to a fixed point.

    Returns (graph, coding_cap, flow) where the flow is the deterministic
    max-flow of exactly that graph, is acyclic, and is positive on every
    edge.  Re-running the computation on the result changes nothing, which
    makes the whole conditioning pipeline idempotent.
    """
    while True:
        reduced = {e: REDUCED_DOUBLED[coding_cap[e]] for e in graph.edge_ids}
        flow = max_flow(graph, reduced, s, t)
        if flow.value != FLOW_TARGET_DOUBLED:
            raise NotNetworkCodingClass(
                f"reduced max flow is {flow.value}/2, expected 3")
        flow = cancel_cycles(graph, flow, s, t)
        support = flow.support()
        if len(support) == len(graph.edge_ids):
            return graph, coding_cap, flow
        graph = graph.subgraph(support, extra_nodes=(s, t))
        coding_cap = {e: coding_cap[e] for e in graph.edge_ids}


def condition_network(cn: CodingNetwork) -> ConditionedNetwork:
    """Prune and demote a network-coding-class network until it satisfies the
    three structural properties above.  Idempotent on its own output."""
    s, t = cn.source, cn.target
    graph, cap, flow = _settle(cn.graph, dict(cn.coding_cap), s, t)
    chain = build_cut_chain(graph, cap, flow, s, t)

    part_of = chain.part_of()
    demoted = [e for e, (tail, head) in ((e, graph.ends(e)) for e in graph.edge_ids)
               if cap[e] == 2 and part_of[tail] == part_of[head]]
    if demoted:
        # An edge inside one part has a residual path between its endpoints,
        # so it lies on no minimum cut and losing half a unit keeps the flow.
        for e in demoted:
            cap[e] = 1
        graph, cap, flow = _settle(graph, cap, s, t)
        chain = build_cut_chain(graph, cap, flow, s, t)
        part_of = chain.part_of()
        for e in graph.edge_ids:
            tail, head = graph.ends(e)
            if cap[e] == 2 and part_of[tail] == part_of[head]:
                raise AssertionError("capacity-2 edge inside a part survived demotion")

    network = CodingNetwork(graph=graph, coding_cap=cap, source=s, target=t)
    return ConditionedNetwork(network=network, flow=flow, chain=chain)
