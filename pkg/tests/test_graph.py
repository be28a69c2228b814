import pytest
from hypothesis import given, settings, strategies as st

from triflow import Digraph, cancel_cycles, decompose_flow_to_paths, edge_disjoint_paths, max_flow
from triflow.errors import InsufficientPaths, NotMaximum, UnknownNode
from triflow import residual_scc_condensation
from triflow.graph import FlowResult

from netfixtures import coding, diamond2, ladder15, tripath
from oracles import is_conserved, min_cut_value, support_is_acyclic


def reduced(net):
    cn = coding(net)
    return cn.graph, cn.reduced_caps(), cn.source, cn.target


def test_digraph_rejects_self_loops_and_duplicates():
    with pytest.raises(ValueError):
        Digraph(["a"], [(0, "a", "a")])
    with pytest.raises(ValueError):
        Digraph(["a", "b"], [(0, "a", "b"), (0, "b", "a")])
    with pytest.raises(UnknownNode):
        Digraph(["a"], [(0, "a", "b")])


def test_digraph_allows_parallel_edges():
    g = Digraph(["a", "b"], [(0, "a", "b"), (1, "a", "b")])
    assert g.out_arcs("a") == (0, 1)
    assert g.in_arcs("b") == (0, 1)


def test_max_flow_tripath():
    g, caps, s, t = reduced(tripath())
    assert max_flow(g, caps, s, t).value == 6


def test_max_flow_diamond_matches_cut_enumeration():
    g, caps, s, t = reduced(diamond2())
    assert min_cut_value(g, caps, s, t) == 6
    assert max_flow(g, caps, s, t).value == 6


def test_max_flow_ladder15_is_exactly_three_units():
    g, caps, s, t = reduced(ladder15())
    assert max_flow(g, caps, s, t).value == 6


def test_max_flow_limit_stops_early():
    g, caps, s, t = reduced(tripath())
    flow = max_flow(g, caps, s, t, limit=2)
    assert 2 <= flow.value < 6
    assert flow.augmentations == 1


def test_max_flow_unknown_node():
    g, caps, s, t = reduced(tripath())
    with pytest.raises(UnknownNode):
        max_flow(g, caps, "nope", t)


def test_condensation_tripath_orders_target_side_first():
    g, caps, s, t = reduced(tripath())
    flow = max_flow(g, caps, s, t)
    cond = residual_scc_condensation(g, caps, flow, s, t)
    # all edges saturated: only reversal arcs remain, every node is its own SCC
    assert len(cond.components) == 5
    assert cond.component_of[t] < cond.component_of[s]
    assert cond.components[0] == frozenset(["t"])
    assert cond.components[-1] == frozenset(["s"])


def test_condensation_diamond_all_singletons():
    g, caps, s, t = reduced(diamond2())
    flow = max_flow(g, caps, s, t)
    cond = residual_scc_condensation(g, caps, flow, s, t)
    assert sorted(len(c) for c in cond.components) == [1, 1, 1, 1]


def test_condensation_ladder15_components_are_the_rungs():
    g, caps, s, t = reduced(ladder15())
    flow = max_flow(g, caps, s, t)
    cond = residual_scc_condensation(g, caps, flow, s, t)
    groups = {frozenset(c) for c in cond.components}
    assert frozenset(["a0", "b0", "c0"]) in groups
    assert frozenset(["a1", "c1", "a2", "c2"]) in groups
    assert frozenset(["a3", "c3", "b3"]) in groups
    assert frozenset(["a4", "b4", "d4"]) in groups
    assert len(cond.components) == 6


def test_condensation_requires_maximum_flow():
    g, caps, s, t = reduced(tripath())
    zero = FlowResult(value=0, per_edge={e: 0 for e in g.edge_ids})
    with pytest.raises(NotMaximum):
        residual_scc_condensation(g, caps, zero, s, t)


def residual_arc_pairs(g, caps, flow):
    for e, tail, head in g.edges():
        if flow.per_edge[e] < caps[e]:
            yield tail, head
        if flow.per_edge[e] > 0:
            yield head, tail


def test_condensation_topological_order_is_valid():
    g, caps, s, t = reduced(ladder15())
    flow = max_flow(g, caps, s, t)
    cond = residual_scc_condensation(g, caps, flow, s, t)
    for u, v in residual_arc_pairs(g, caps, flow):
        assert cond.component_of[u] <= cond.component_of[v]


def test_edge_disjoint_paths_tripath():
    g, _, s, t = reduced(tripath())
    paths = edge_disjoint_paths(g, s, t, 3)
    used = [e for p in paths for e in p]
    assert len(paths) == 3
    assert len(used) == len(set(used)) == 6


def test_edge_disjoint_paths_on_doubled_diamond():
    # each diamond edge doubled into two parallel arcs: four disjoint routes
    nodes = ["s", "a", "b", "t"]
    layout = [("s", "a"), ("s", "a"), ("s", "b"), ("s", "b"),
              ("a", "t"), ("a", "t"), ("b", "t"), ("b", "t")]
    g = Digraph(nodes, [(i, u, v) for i, (u, v) in enumerate(layout)])
    assert max_flow(g, {e: 1 for e in g.edge_ids}, "s", "t").value == 4
    paths = edge_disjoint_paths(g, "s", "t", 4)
    assert len(paths) == 4


def test_edge_disjoint_paths_insufficient():
    g = Digraph(["s", "a", "t"], [(0, "s", "a"), (1, "a", "t")])
    with pytest.raises(InsufficientPaths) as err:
        edge_disjoint_paths(g, "s", "t", 2)
    assert err.value.found == 1


def test_flow_decomposition_zero_flow():
    g, caps, s, t = reduced(tripath())
    zero = FlowResult(value=0, per_edge={e: 0 for e in g.edge_ids})
    assert decompose_flow_to_paths(g, zero, s, t) == []


def test_flow_decomposition_tripath():
    g, caps, s, t = reduced(tripath())
    flow = max_flow(g, caps, s, t)
    paths = decompose_flow_to_paths(g, flow, s, t)
    assert len(paths) == 3
    assert all(amount == 2 for _, amount in paths)


def test_flow_decomposition_cancels_embedded_cycle():
    # hand-built 2-unit flow with a 1-unit cycle u -> w -> u riding on it
    nodes = ["s", "u", "v", "w", "t"]
    layout = [("s", "u"), ("u", "t"), ("s", "v"), ("v", "t"), ("u", "w"), ("w", "u")]
    g = Digraph(nodes, [(i, a, b) for i, (a, b) in enumerate(layout)])
    per_edge = {0: 1, 1: 1, 2: 1, 3: 1, 4: 1, 5: 1}
    flow = FlowResult(value=2, per_edge=per_edge)
    paths = decompose_flow_to_paths(g, flow, "s", "t")
    assert sorted(p for p, _ in paths) == [[0, 1], [2, 3]]
    clean = cancel_cycles(g, flow, "s", "t")
    assert clean.value == 2
    assert clean.per_edge[4] == 0 and clean.per_edge[5] == 0
    assert is_conserved(g, clean.per_edge, "s", "t")
    assert support_is_acyclic(g, clean.per_edge)


@st.composite
def flow_instances(draw):
    n = draw(st.integers(min_value=2, max_value=7))
    nodes = [f"n{i}" for i in range(n)]
    m = draw(st.integers(min_value=1, max_value=14))
    edges = []
    for i in range(m):
        tail = draw(st.sampled_from(nodes))
        head = draw(st.sampled_from([v for v in nodes if v != tail]))
        edges.append((i, tail, head))
    caps = {i: draw(st.integers(min_value=1, max_value=6)) for i in range(m)}
    return Digraph(nodes, edges), caps, "n0", nodes[-1]


@settings(max_examples=120, deadline=None)
@given(flow_instances())
def test_max_flow_properties(instance):
    g, caps, s, t = instance
    flow = max_flow(g, caps, s, t)
    assert is_conserved(g, flow.per_edge, s, t)
    assert all(0 <= flow.per_edge[e] <= caps[e] for e in g.edge_ids)
    assert flow.value == min_cut_value(g, caps, s, t)
    cond = residual_scc_condensation(g, caps, flow, s, t)
    for e, tail, head in g.edges():
        if flow.per_edge[e] < caps[e]:
            assert cond.component_of[tail] <= cond.component_of[head]
        if flow.per_edge[e] > 0:
            assert cond.component_of[head] <= cond.component_of[tail]


@settings(max_examples=80, deadline=None)
@given(flow_instances())
def test_flow_decomposition_properties(instance):
    g, caps, s, t = instance
    flow = max_flow(g, caps, s, t)
    paths = decompose_flow_to_paths(g, flow, s, t)
    assert sum(amount for _, amount in paths) == flow.value
    for path, _ in paths:
        assert g.tail(path[0]) == s and g.head(path[-1]) == t
        for prev, nxt in zip(path, path[1:]):
            assert g.head(prev) == g.tail(nxt)
    rebuilt = cancel_cycles(g, flow, s, t)
    assert support_is_acyclic(g, rebuilt.per_edge)
    assert is_conserved(g, rebuilt.per_edge, s, t)


def test_augmentation_bound_for_doubled_capacities():
    for net in (tripath(), diamond2(), ladder15()):
        g, caps, s, t = reduced(net)
        assert set(caps.values()) <= {2, 3}
        flow = max_flow(g, caps, s, t, limit=6)
        assert flow.augmentations <= 6
