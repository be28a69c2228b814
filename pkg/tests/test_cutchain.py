import pytest

from triflow import (CutKind, Digraph, classify_cut, condition_network,
                     residual_scc_condensation)
from triflow.cutchain import build_cut_chain
from triflow.errors import MalformedCut, NotMaximum
from triflow.graph import FlowResult

from netfixtures import coding, diamond2, ladder15, tripath, widefan
from oracles import cut_value, enumerate_min_cuts, longest_min_cut_chain


def conditioned(net):
    return condition_network(coding(net))


def test_diamond_chain():
    cond = conditioned(diamond2())
    chain = cond.chain
    assert chain.cuts() == [frozenset("s"), frozenset(("s", "a")),
                            frozenset(("s", "a", "b"))]
    assert all(k is CutKind.TWO_EDGE for k in chain.kinds)


def test_tripath_chain_is_maximal():
    cond = conditioned(tripath())
    chain = cond.chain
    assert chain.k == 4
    assert chain.cuts()[0] == frozenset("s")
    assert chain.cuts()[-1] == frozenset(("s", "m1", "m2", "m3"))
    assert all(k is CutKind.THREE_ARC for k in chain.kinds)


def test_ladder15_chain_pinned():
    cond = conditioned(ladder15())
    chain = cond.chain
    assert chain.k == 5
    cuts = chain.cuts()
    assert cuts[0] == frozenset(["s"])
    assert cuts[1] == frozenset(["s", "a0", "b0", "c0"])
    assert cuts[2] == frozenset(["s", "a0", "b0", "c0", "a1", "c1", "a2", "c2"])
    assert cuts[3] == cuts[2] | {"a3", "c3", "b3"}
    assert cuts[4] == frozenset(ladder15().graph.nodes) - {"t"}
    assert [k.name for k in chain.kinds] == [
        "THREE_ARC", "TWO_EDGE", "TWO_EDGE", "THREE_ARC", "TWO_EDGE"]


def test_widefan_single_cut():
    cond = conditioned(widefan())
    assert cond.chain.k == 1
    assert cond.chain.kinds == (CutKind.TWO_EDGE,)
    assert cond.chain.cuts()[0] == frozenset(widefan().graph.nodes) - {"t"}


def test_every_chain_cut_is_a_minimum_cut():
    for net in (diamond2(), tripath(), ladder15(), widefan()):
        cond = conditioned(net)
        g = cond.network.graph
        reduced = cond.network.reduced_caps()
        for cut in cond.chain.cuts():
            assert cut_value(g, reduced, cut) == 6


def test_chain_length_matches_bruteforce_maximal_chain():
    for net in (diamond2(), tripath(), widefan()):
        cond = conditioned(net)
        g = cond.network.graph
        reduced = cond.network.reduced_caps()
        assert cond.chain.k == longest_min_cut_chain(
            g, reduced, cond.network.source, cond.network.target)


def test_chain_parts_are_residual_sccs():
    for net in (ladder15(), diamond2(), widefan()):
        cond = conditioned(net)
        g = cond.network.graph
        reduced = cond.network.reduced_caps()
        scc = residual_scc_condensation(g, reduced, cond.flow,
                                        cond.network.source, cond.network.target)
        groups = {frozenset(c) for c in scc.components}
        for part in cond.chain.parts:
            assert part in groups


def test_classify_cut_fixtures():
    diamond = conditioned(diamond2())
    assert classify_cut(diamond.network.graph, diamond.network.coding_cap,
                        frozenset("s")) is CutKind.TWO_EDGE
    tri = conditioned(tripath())
    assert classify_cut(tri.network.graph, tri.network.coding_cap,
                        frozenset("s")) is CutKind.THREE_ARC
    ladder = conditioned(ladder15())
    c2 = ladder.chain.cut(2)
    assert classify_cut(ladder.network.graph, ladder.network.coding_cap,
                        c2) is CutKind.TWO_EDGE
    crossing = [(tl, hd) for e, tl, hd in ladder.network.graph.edges()
                if tl in c2 and hd not in c2]
    assert sorted(crossing) == [("a0", "a1"), ("c0", "c1")]


def test_classify_cut_rejects_malformed():
    g = Digraph(["s", "a", "t"],
                [(0, "s", "a"), (1, "s", "a"), (2, "s", "a"), (3, "s", "a"),
                 (4, "a", "t")])
    caps = {0: 1, 1: 1, 2: 1, 3: 1, 4: 1}
    with pytest.raises(MalformedCut):
        classify_cut(g, caps, frozenset("s"))


def test_build_chain_requires_maximum_flow():
    cn = coding(tripath())
    zero = FlowResult(value=0, per_edge={e: 0 for e in cn.graph.edge_ids})
    with pytest.raises(NotMaximum):
        build_cut_chain(cn.graph, cn.coding_cap, zero, "s", "t")


def test_build_chain_rejects_unpruned_zero_flow_edges():
    from triflow.errors import BrokenChain

    # maximum flow, but a dangling zero-flow edge breaks the chain structure
    g = Digraph(["s", "a", "b", "t"],
                [(0, "s", "a"), (1, "a", "t"), (2, "a", "b")])
    caps = {0: 1, 1: 1, 2: 1}
    flow = FlowResult(value=2, per_edge={0: 2, 1: 2, 2: 0})
    with pytest.raises(BrokenChain):
        build_cut_chain(g, caps, flow, "s", "t")


def test_no_minimum_cut_between_consecutive_chain_cuts():
    # maximality, checked against full enumeration on small fixtures
    for net in (diamond2(), tripath(), widefan()):
        cond = conditioned(net)
        g = cond.network.graph
        reduced = cond.network.reduced_caps()
        _, all_cuts = enumerate_min_cuts(g, reduced, cond.network.source,
                                         cond.network.target)
        cuts = cond.chain.cuts()
        for earlier, later in zip(cuts, cuts[1:]):
            for candidate in all_cuts:
                assert not (earlier < candidate < later)
