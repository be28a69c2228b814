"""Independent checks: structural plan verification, exhaustive single-failure
survivability, and brute-force oracles for small instances."""

from __future__ import annotations

from itertools import product

from .conditioning import CodingNetwork
from .errors import PlanReferenceError, TooLarge
from .graph import max_flow, order_key
from .plan import LABELS, Arc, RecoveryPlan, VerificationReport, Violation


def _reaches(arcs, tails, heads, s, t) -> bool:
    adj = {}
    for arc in arcs:
        adj.setdefault(tails[arc], []).append(heads[arc])
    seen = {s}
    stack = [s]
    while stack:
        u = stack.pop()
        if u == t:
            return True
        for v in adj.get(u, ()):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return t == s


def _st_bridge_arcs(arcs, tails, heads, s, t):
    """Arcs every s-t path must use, exact and linear-ish.

    Restricted to arcs on some s-t path, a topological sweep counts how many
    arcs span each gap between consecutive positions; a gap covered by exactly
    one arc makes that arc a bridge, and every bridge shows up that way.
    Returns None when the arc set is not a DAG (caller falls back to removal
    checks).
    """
    fwd = {}
    bwd = {}
    for arc in arcs:
        fwd.setdefault(tails[arc], []).append(arc)
        bwd.setdefault(heads[arc], []).append(arc)

    def closure(start, adj, end_of):
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for arc in adj.get(u, ()):
                v = end_of[arc]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen

    from_s = closure(s, fwd, heads)
    to_t = closure(t, bwd, tails)
    relevant = [arc for arc in arcs if tails[arc] in from_s and heads[arc] in to_t]
    if not relevant:
        return set()

    indeg = {}
    out = {}
    nodes = set()
    for arc in relevant:
        nodes.add(tails[arc])
        nodes.add(heads[arc])
        out.setdefault(tails[arc], []).append(arc)
        indeg[heads[arc]] = indeg.get(heads[arc], 0) + 1
    order = [v for v in nodes if indeg.get(v, 0) == 0]
    pos = {}
    i = 0
    while i < len(order):
        u = order[i]
        pos[u] = i
        i += 1
        for arc in out.get(u, ()):
            v = heads[arc]
            indeg[v] -= 1
            if indeg[v] == 0:
                order.append(v)
    if len(pos) != len(nodes):
        return None  # cycle among the relevant arcs

    gaps = len(pos) - 1
    cnt = [0] * (gaps + 1)
    idsum = [0] * (gaps + 1)
    for idx, arc in enumerate(relevant):
        lo, hi = pos[tails[arc]], pos[heads[arc]]
        cnt[lo] += 1
        cnt[hi] -= 1
        idsum[lo] += idx
        idsum[hi] -= idx
    bridges = set()
    running = 0
    running_id = 0
    for g in range(gaps):
        running += cnt[g]
        running_id += idsum[g]
        if running == 1:
            bridges.add(relevant[running_id])
    return bridges


def verify_plan(cn: CodingNetwork, plan: RecoveryPlan) -> VerificationReport:
    """Check disjointness, capacity usage, per-label connectivity and, for
    every edge, which labels survive its failure.  Failures become report
    entries; only dangling references raise."""
    g = cn.graph
    cap = cn.coding_cap
    s, t = cn.source, cn.target

    tails = {}
    heads = {}
    for label in LABELS:
        for arc in plan.subflows.get(label, ()):
            if arc.edge not in cap:
                raise PlanReferenceError(f"plan references unknown edge {arc.edge!r}")
            if not 0 <= arc.copy < cap[arc.edge]:
                raise PlanReferenceError(
                    f"copy {arc.copy} out of range for edge {arc.edge!r}")
            tails[arc], heads[arc] = g.ends(arc.edge)

    violations = []
    disjoint = True
    for i in range(3):
        for j in range(i + 1, 3):
            shared = plan.subflows[LABELS[i]] & plan.subflows[LABELS[j]]
            if shared:
                disjoint = False
                violations.append(Violation(
                    "disjointness",
                    f"{LABELS[i]} and {LABELS[j]} share arcs {sorted(shared, key=order_key)}"))

    capacity_ok = True
    usage = {}
    for label in LABELS:
        for arc in plan.subflows[label]:
            usage[arc.edge] = usage.get(arc.edge, 0) + 1
    for edge, used in usage.items():
        if used > cap[edge]:
            capacity_ok = False
            violations.append(Violation(
                "capacity", f"edge {edge!r} uses {used} arcs, capacity {cap[edge]}"))

    connectivity = {}
    for label in LABELS:
        ok = _reaches(plan.subflows[label], tails, heads, s, t)
        connectivity[label] = ok
        if not ok:
            violations.append(Violation(
                "connectivity", f"subflow {label} does not connect source to target"))

    by_label_edge = {label: {} for label in LABELS}
    for label in LABELS:
        for arc in plan.subflows[label]:
            by_label_edge[label].setdefault(arc.edge, []).append(arc)

    bridges = {}
    for label in LABELS:
        if not connectivity[label]:
            bridges[label] = None
            continue
        multi = any(len(v) > 1 for v in by_label_edge[label].values())
        bridges[label] = None if multi else _st_bridge_arcs(
            plan.subflows[label], tails, heads, s, t)

    survivability = {}
    for edge in g.edge_ids:
        survivors = []
        for label in LABELS:
            if not connectivity[label]:
                continue
            hit = by_label_edge[label].get(edge)
            if not hit:
                survivors.append(label)
            elif bridges[label] is not None and len(hit) == 1:
                if hit[0] not in bridges[label]:
                    survivors.append(label)
            else:
                rest = [a for a in plan.subflows[label] if a.edge != edge]
                if _reaches(rest, tails, heads, s, t):
                    survivors.append(label)
        survivors = frozenset(survivors)
        survivability[edge] = survivors
        if len(survivors) < 2:
            violations.append(Violation(
                "survivability",
                f"edge {edge!r} failure leaves only {sorted(survivors)}"))

    overall = (disjoint and capacity_ok and all(connectivity.values())
               and all(len(v) >= 2 for v in survivability.values()))
    return VerificationReport(
        disjointness_ok=disjoint,
        capacity_ok=capacity_ok,
        connectivity=connectivity,
        survivability=survivability,
        overall=overall,
        violations=tuple(violations),
    )


def survivability_by_removal(cn: CodingNetwork, plan: RecoveryPlan) -> dict:
    """Reference implementation of the survivability map: one reachability
    search per (edge, label) with the edge's arcs removed."""
    g = cn.graph
    tails = {}
    heads = {}
    for label in LABELS:
        for arc in plan.subflows[label]:
            tails[arc], heads[arc] = g.ends(arc.edge)
    out = {}
    for edge in g.edge_ids:
        survivors = []
        for label in LABELS:
            rest = [a for a in plan.subflows[label] if a.edge != edge]
            if _reaches(rest, tails, heads, cn.source, cn.target):
                survivors.append(label)
        out[edge] = frozenset(survivors)
    return out


def brute_force_feasible(cn: CodingNetwork) -> bool:
    """Definitional feasibility: 2 units still route after any single edge
    deletion (capacities c, not reduced)."""
    g = cn.graph
    cap = dict(cn.coding_cap)
    base = max_flow(g, cap, cn.source, cn.target, limit=2)
    if base.value < 2:
        return False
    for edge in g.edge_ids:
        rest = g.subgraph([e for e in g.edge_ids if e != edge],
                          extra_nodes=(cn.source, cn.target))
        if max_flow(rest, cap, cn.source, cn.target, limit=2).value < 2:
            return False
    return True


def brute_force_decomposition_exists(cn: CodingNetwork) -> bool:
    """Exhaustively search arc labelings of the auxiliary graph for a valid
    three-subflow plan.  Only for tiny instances (<= 12 arcs)."""
    g = cn.graph
    arcs = []
    tails = {}
    heads = {}
    for eid, tail, head in g.edges():
        for i in range(cn.coding_cap[eid]):
            arc = Arc(eid, i)
            arcs.append(arc)
            tails[arc] = tail
            heads[arc] = head
    if len(arcs) > 12:
        raise TooLarge(f"{len(arcs)} arcs exceed the exhaustive bound of 12")
    s, t = cn.source, cn.target
    edges = g.edge_ids

    # Dropping arcs never helps: every requirement is monotone in the sets,
    # so searching full labelings (no "unused" bucket) is enough.
    for assign in product(range(3), repeat=len(arcs)):
        sets = ([], [], [])
        for arc, lab in zip(arcs, assign):
            sets[lab].append(arc)
        if not all(_reaches(sets[i], tails, heads, s, t) for i in range(3)):
            continue
        ok = True
        for edge in edges:
            alive = 0
            for i in range(3):
                rest = [a for a in sets[i] if a.edge != edge]
                if _reaches(rest, tails, heads, s, t):
                    alive += 1
            if alive < 2:
                ok = False
                break
        if ok:
            return True
    return False
