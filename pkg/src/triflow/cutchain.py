"""Maximal chain of minimum source-target cuts from a residual condensation.

A minimum cut is exactly a node set containing the source, avoiding the
target, and closed under outgoing residual arcs.  Those sets form a lattice
whose maximal chains all add one residual SCC per step, so the chain is built
by consuming the SCC condensation in reverse topological order (successors
before predecessors), starting from the source's own component.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import BrokenChain, MalformedCut
from .graph import Digraph, FlowResult, order_key, residual_scc_condensation

REDUCED_DOUBLED = {1: 2, 2: 3}  # coding capacity -> reduced capacity, doubled
FLOW_TARGET_DOUBLED = 6         # a 3-unit flow in doubled units


class CutKind(Enum):
    TWO_EDGE = "2-edge-cut"   # two crossing edges, both capacity 2
    THREE_ARC = "3-arc-cut"   # three crossing edges, all capacity 1


@dataclass(frozen=True)
class CutChain:
    """Cuts C_1 c C_2 c ... c C_k stored as the partition they induce.

    `parts[0]` is C_1, `parts[i]` is C_{i+1} \\ C_i, and `parts[k]` is the
    remainder behind the last cut, so C_i is the union of the first i parts.
    Cuts are materialized on demand to keep the representation linear-size.
    """

    parts: tuple
    kinds: tuple

    @property
    def k(self) -> int:
        return len(self.kinds)

    def cut(self, i: int) -> frozenset:
        """C_i for 1 <= i <= k."""
        if not 1 <= i <= self.k:
            raise IndexError(i)
        acc = set()
        for part in self.parts[:i]:
            acc |= part
        return frozenset(acc)

    def cuts(self) -> list:
        """All cuts, materialized (quadratic size; fine at test scale)."""
        out = []
        acc = set()
        for part in self.parts[:-1]:
            acc |= part
            out.append(frozenset(acc))
        return out

    def part_of(self) -> dict:
        return {v: i for i, part in enumerate(self.parts) for v in part}


def classify_cut(g: Digraph, coding_cap: Mapping, cut) -> CutKind:
    """TWO_EDGE or THREE_ARC, from the crossing-edge multiset."""
    caps = []
    for eid, tail, head in g.edges():
        if tail in cut and head not in cut:
            caps.append(coding_cap[eid])
    caps.sort()
    if caps == [2, 2]:
        return CutKind.TWO_EDGE
    if caps == [1, 1, 1]:
        return CutKind.THREE_ARC
    raise MalformedCut(f"crossing capacities {caps} are neither [2,2] nor [1,1,1]")


def build_cut_chain(g: Digraph, coding_cap: Mapping, flow: FlowResult, s, t) -> CutChain:
    """Maximal chain of minimum cuts for a maximum reduced flow of value 3.

    Expects zero-flow edges already removed and an acyclic flow support.  Each
    step of the chain adds exactly one residual SCC, successors first; ties are
    broken by the smallest node id inside the component.
    """
    reduced = {e: REDUCED_DOUBLED[coding_cap[e]] for e in g.edge_ids}
    cond = residual_scc_condensation(g, reduced, flow, s, t)
    comps = cond.components
    comp_of = cond.component_of
    n = len(comps)
    s_comp = comp_of[s]
    t_comp = comp_of[t]
    if s_comp == t_comp:
        raise BrokenChain("source and target share a residual component")

    succs = [set() for _ in range(n)]
    preds = [set() for _ in range(n)]
    per_edge = flow.per_edge
    for eid, tail, head in g.edges():
        pairs = []
        if per_edge[eid] < reduced[eid]:
            pairs.append((comp_of[tail], comp_of[head]))
        if per_edge[eid] > 0:
            pairs.append((comp_of[head], comp_of[tail]))
        for a, b in pairs:
            if a != b:
                succs[a].add(b)
                preds[b].add(a)

    if preds[t_comp]:
        raise BrokenChain("residual arcs enter the target component; support "
                          "is cyclic or zero-flow edges remain")

    min_key = [min(order_key(v) for v in comp) for comp in comps]
    pending = [len(succs[i]) for i in range(n)]
    ready = [(min_key[i], i) for i in range(n) if pending[i] == 0 and i != t_comp]
    heapq.heapify(ready)

    order = []
    while ready:
        _, i = heapq.heappop(ready)
        order.append(i)
        for p in preds[i]:
            pending[p] -= 1
            if pending[p] == 0 and p != t_comp:
                heapq.heappush(ready, (min_key[p], p))
    if len(order) != n - 1:
        raise BrokenChain("condensation did not linearize into a chain")
    if order and comp_of[s] != order[0]:
        raise BrokenChain("first chain component does not contain the source")

    parts = tuple(comps[i] for i in order) + (comps[t_comp],)
    _check_saturation(g, reduced, per_edge, parts)
    kinds = tuple(_kind_sweep(g, coding_cap, parts))
    return CutChain(parts=parts, kinds=kinds)


def _check_saturation(g, reduced, per_edge, parts):
    # Every prefix must be saturated forward with zero backward flow; verified
    # incrementally so the whole sweep stays linear.
    part_of = {v: i for i, part in enumerate(parts) for v in part}
    k = len(parts) - 1
    fwd_slack = 0
    bwd_flow = 0
    slack_at = {}
    bwd_at = {}
    for eid, tail, head in g.edges():
        a, b = part_of[tail], part_of[head]
        if a < b:
            slack = reduced[eid] - per_edge[eid]
            if slack:
                slack_at[(a, b)] = slack_at.get((a, b), 0) + slack
        elif a > b:
            if per_edge[eid]:
                bwd_at[(b, a)] = bwd_at.get((b, a), 0) + per_edge[eid]
    opens_slack = {}
    closes_slack = {}
    for (a, b), val in slack_at.items():
        opens_slack[a] = opens_slack.get(a, 0) + val
        closes_slack[b] = closes_slack.get(b, 0) + val
    opens_bwd = {}
    closes_bwd = {}
    for (b, a), val in bwd_at.items():
        opens_bwd[b] = opens_bwd.get(b, 0) + val
        closes_bwd[a] = closes_bwd.get(a, 0) + val
    for i in range(k):
        fwd_slack += opens_slack.get(i, 0) - closes_slack.get(i, 0)
        bwd_flow += opens_bwd.get(i, 0) - closes_bwd.get(i, 0)
        if fwd_slack or bwd_flow:
            raise BrokenChain(f"cut {i + 1} is not saturated "
                              f"(slack={fwd_slack}, backward flow={bwd_flow})")


def _kind_sweep(g, coding_cap, parts):
    # Crossing-edge capacity counts per cut, updated incrementally.
    part_of = {v: i for i, part in enumerate(parts) for v in part}
    k = len(parts) - 1
    delta = [{} for _ in range(k + 1)]
    for eid, tail, head in g.edges():
        a, b = part_of[tail], part_of[head]
        if a < b:
            c = coding_cap[eid]
            delta[a][c] = delta[a].get(c, 0) + 1
            delta[b][c] = delta[b].get(c, 0) - 1
    ones = twos = 0
    kinds = []
    for i in range(k):
        ones += delta[i].get(1, 0)
        twos += delta[i].get(2, 0)
        if twos == 2 and ones == 0:
            kinds.append(CutKind.TWO_EDGE)
        elif twos == 0 and ones == 3:
            kinds.append(CutKind.THREE_ARC)
        else:
            raise MalformedCut(
                f"cut {i + 1} crosses {twos} capacity-2 and {ones} capacity-1 edges")
    return kinds
