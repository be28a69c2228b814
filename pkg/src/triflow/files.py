"""JSON file formats for networks, plans and reports, plus DOT export.

Network file::

    {"nodes": ["s", "a", ...],
     "edges": [{"id": "e0", "tail": "s", "head": "a", "capacity": 2}, ...],
     "source": "s", "target": "t"}

Plan file::

    {"class": "network_coding",
     "subflows": {"A": [{"edge": "e0", "copy": 0}, ...], "B": [...], "XOR": [...]},
     "roles": [{"node": "a", "role": "splitter", "label": "XOR"}, ...],
     "verification": {...}}

Node ids are strings.  Edge ids may be strings or integers; copy indices are
explicit so parallel-arc identity survives serialization.
"""

from __future__ import annotations

import json

from .conditioning import Feasibility, FeasibilityKind, Network
from .errors import PlanReferenceError, TriflowError
from .graph import Digraph, order_key
from .plan import (LABELS, Arc, NodeRole, RecoveryPlan, Role,
                   VerificationReport, Violation)


class FormatError(TriflowError):
    """Malformed input file."""


def _require(cond, msg):
    if not cond:
        raise FormatError(msg)


def network_from_json(data) -> Network:
    _require(isinstance(data, dict), "top level must be an object")
    for key in ("nodes", "edges", "source", "target"):
        _require(key in data, f"missing key {key!r}")
    nodes = data["nodes"]
    _require(isinstance(nodes, list) and all(isinstance(n, str) for n in nodes),
             "nodes must be a list of strings")
    _require(len(set(nodes)) == len(nodes), "duplicate node ids")
    node_set = set(nodes)
    edges = []
    caps = {}
    seen = set()
    for i, e in enumerate(data["edges"]):
        where = f"edges[{i}]"
        _require(isinstance(e, dict), f"{where} must be an object")
        for key in ("id", "tail", "head", "capacity"):
            _require(key in e, f"{where} missing {key!r}")
        eid = e["id"]
        _require(isinstance(eid, (str, int)) and not isinstance(eid, bool),
                 f"{where}: id must be a string or integer")
        if isinstance(eid, str):
            _require(not eid.startswith("~"), f"{where}: ids starting with '~' are reserved")
        _require(eid not in seen, f"{where}: duplicate edge id {eid!r}")
        seen.add(eid)
        _require(e["tail"] in node_set, f"{where}: unknown tail {e['tail']!r}")
        _require(e["head"] in node_set, f"{where}: unknown head {e['head']!r}")
        _require(e["tail"] != e["head"], f"{where}: self-loop")
        k = e["capacity"]
        _require(isinstance(k, int) and not isinstance(k, bool) and k >= 1,
                 f"{where}: capacity must be a positive integer")
        edges.append((eid, e["tail"], e["head"]))
        caps[eid] = k
    _require(data["source"] in node_set, f"unknown source {data['source']!r}")
    _require(data["target"] in node_set, f"unknown target {data['target']!r}")
    _require(data["source"] != data["target"], "source equals target")
    graph = Digraph(nodes, edges)
    return Network(graph=graph, free_cap=caps,
                   source=data["source"], target=data["target"])


def load_network(path) -> Network:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}") from exc
    return network_from_json(data)


def network_to_json(net: Network) -> dict:
    return {
        "nodes": sorted(net.graph.nodes, key=order_key),
        "edges": [{"id": eid, "tail": tail, "head": head,
                   "capacity": net.free_cap[eid]}
                  for eid, tail, head in net.graph.edges()],
        "source": net.source,
        "target": net.target,
    }


def report_to_json(report: VerificationReport) -> dict:
    return {
        "overall": report.overall,
        "disjointness_ok": report.disjointness_ok,
        "capacity_ok": report.capacity_ok,
        "connectivity": {label: report.connectivity[label] for label in LABELS},
        "survivability": [{"edge": edge, "survivors": sorted(labels)}
                          for edge, labels in sorted(report.survivability.items(),
                                                     key=lambda kv: order_key(kv[0]))],
        "violations": [{"kind": v.kind, "detail": v.detail} for v in report.violations],
    }


def report_from_json(data) -> VerificationReport:
    return VerificationReport(
        disjointness_ok=bool(data["disjointness_ok"]),
        capacity_ok=bool(data["capacity_ok"]),
        connectivity={k: bool(v) for k, v in data["connectivity"].items()},
        survivability={entry["edge"]: frozenset(entry["survivors"])
                       for entry in data["survivability"]},
        overall=bool(data["overall"]),
        violations=tuple(Violation(v["kind"], v["detail"])
                         for v in data.get("violations", ())),
    )


def plan_to_json(plan: RecoveryPlan) -> dict:
    data = {
        "class": plan.feasibility.kind.value,
        "reduced_max_flow": plan.feasibility.reduced_value / 2,
        "subflows": {
            label: [{"edge": arc.edge, "copy": arc.copy}
                    for arc in sorted(plan.subflows[label], key=order_key)]
            for label in LABELS
        },
        "roles": [{"node": r.node, "role": r.role.value, "label": r.label}
                  for r in plan.roles],
    }
    if plan.verification is not None:
        data["verification"] = report_to_json(plan.verification)
    return data


def plan_from_json(data, net: Network) -> RecoveryPlan:
    _require(isinstance(data, dict), "plan must be an object")
    for key in ("class", "subflows"):
        _require(key in data, f"plan missing key {key!r}")
    try:
        kind = FeasibilityKind(data["class"])
    except ValueError as exc:
        raise FormatError(f"unknown class {data['class']!r}") from exc
    known = set(net.graph.edge_ids)
    subflows = {}
    for label in LABELS:
        _require(label in data["subflows"], f"subflows missing label {label}")
        arcs = set()
        for i, a in enumerate(data["subflows"][label]):
            _require(isinstance(a, dict) and "edge" in a and "copy" in a,
                     f"subflows[{label}][{i}] must have edge and copy")
            if a["edge"] not in known:
                raise PlanReferenceError(
                    f"subflow {label} references unknown edge {a['edge']!r}")
            arcs.add(Arc(a["edge"], a["copy"]))
        subflows[label] = frozenset(arcs)
    roles = []
    for r in data.get("roles", ()):
        roles.append(NodeRole(r["node"], Role(r["role"]), r["label"]))
    reduced = int(round(2 * data.get("reduced_max_flow", 3)))
    verification = None
    if "verification" in data:
        verification = report_from_json(data["verification"])
    return RecoveryPlan(subflows=subflows, roles=tuple(roles),
                        feasibility=Feasibility(kind, reduced),
                        verification=verification)


def load_plan(path, net: Network) -> RecoveryPlan:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, "
                              f"column {exc.colno}") from exc
    return plan_from_json(data, net)


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


_DOT_STYLE = {"A": "dashed", "B": "dotted", "XOR": "solid"}


def plan_to_dot(net: Network, plan: RecoveryPlan) -> str:
    """Graphviz rendering: one drawn arc per used capacity unit, dashed for A,
    dotted for B, solid for XOR, gray for idle arcs.  Byte-stable for equal
    inputs."""
    label_of = {}
    for label in LABELS:
        for arc in plan.subflows[label]:
            label_of[arc] = label
    role_marks = {}
    for r in plan.roles:
        mark = "p" if r.role is Role.SPLITTER else "m"
        role_marks.setdefault(r.node, []).append(f"{mark}:{r.label}")

    lines = ["digraph plan {", "  rankdir=LR;"]
    for node in sorted(net.graph.nodes, key=order_key):
        attrs = []
        if node in (net.source, net.target):
            attrs.append("shape=doublecircle")
        if node in role_marks:
            marks = ",".join(sorted(role_marks[node]))
            attrs.append(f'xlabel="{marks}"')
        attr = (" [" + ", ".join(attrs) + "]") if attrs else ""
        lines.append(f'  "{node}"{attr};')
    for eid, tail, head in net.graph.edges():
        copies = max(net.free_cap[eid], 1)
        for copy in range(min(copies, 2)):
            arc = Arc(eid, copy)
            label = label_of.get(arc)
            if label is None:
                style = 'style=solid, color=gray70'
            else:
                style = f'style={_DOT_STYLE[label]}, color=black'
            lines.append(f'  "{tail}" -> "{head}" '
                         f'[{style}, label="{eid}#{copy}'
                         + (f' {label}' if label else "") + '"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
