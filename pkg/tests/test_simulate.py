import random

import pytest
from hypothesis import given, settings, strategies as st

from triflow import (Generation, decode, decompose, encode, failure_sweep,
                     simulate_transmission)
from triflow.errors import InsufficientLabels, LengthMismatch, UnverifiedPlan

from netfixtures import coding, diamond2, ladder15, tripath


def test_encode_identities():
    assert encode(b"\x00\x00", b"\xab\xcd")["XOR"] == b"\xab\xcd"
    assert encode(b"\x55\x55", b"\x55\x55")["XOR"] == b"\x00\x00"
    assert encode(b"\xf0", b"\x0f")["XOR"] == b"\xff"


def test_encode_length_mismatch():
    with pytest.raises(LengthMismatch):
        encode(b"\x00", b"\x00\x00")


def test_decode_rules():
    assert decode({"A": b"\x12", "B": b"\x34"}) == (b"\x12", b"\x34")
    assert decode({"A": b"\x12", "XOR": b"\x37"}) == (b"\x12", b"\x25")
    assert decode({"B": b"\x25", "XOR": b"\x37"}) == (b"\x12", b"\x25")


def test_decode_insufficient():
    with pytest.raises(InsufficientLabels):
        decode({"XOR": b"\x00"})
    with pytest.raises(InsufficientLabels):
        decode({})


@settings(max_examples=60, deadline=None)
@given(st.binary(min_size=0, max_size=64), st.binary(min_size=0, max_size=64))
def test_decode_encode_roundtrip_any_two_labels(a, b):
    if len(a) != len(b):
        a = a[:min(len(a), len(b))]
        b = b[:len(a)]
    packets = encode(a, b)
    for drop in ("A", "B", "XOR"):
        received = {k: v for k, v in packets.items() if k != drop}
        assert decode(received) == (a, b)


def test_simulation_without_failure():
    net = ladder15()
    plan = decompose(net)
    gen = Generation(seq=1, payload_a=b"\x01\x02", payload_b=b"\xfe\xff")
    outcome = simulate_transmission(coding(net), plan, gen)
    assert outcome.received_labels == frozenset(("A", "B", "XOR"))
    assert outcome.decoded == (b"\x01\x02", b"\xfe\xff")
    assert outcome.recovered_via == ("A", "B")


def test_simulation_requires_verified_plan():
    net = ladder15()
    plan = decompose(net)
    gen = Generation(seq=0, payload_a=b"\x00", payload_b=b"\x00")
    with pytest.raises(UnverifiedPlan):
        simulate_transmission(coding(net), plan.with_verification(None), gen)


def test_simulation_failure_on_single_label_edge():
    net = ladder15()
    cn = coding(net)
    plan = decompose(net)
    gen = Generation(seq=0, payload_a=b"\xaa\x01", payload_b=b"\x55\x02")
    survivors = plan.verification.survivability
    edge = next(e for e in net.graph.edge_ids
                if survivors[e] == frozenset(("B", "XOR")))
    outcome = simulate_transmission(cn, plan, gen, failed_edge=edge)
    assert outcome.received_labels == frozenset(("B", "XOR"))
    assert outcome.recovered_via == ("B", "XOR")
    assert outcome.decoded == (gen.payload_a, gen.payload_b)


def test_sweep_matches_survivability_map():
    for net in (ladder15(), diamond2(), tripath()):
        cn = coding(net)
        plan = decompose(net)
        gen = Generation(seq=3, payload_a=b"\x10\x20\x30", payload_b=b"\x0a\x0b\x0c")
        outcomes = failure_sweep(cn, plan, gen)
        assert set(outcomes) == set(net.graph.edge_ids)
        for edge, outcome in outcomes.items():
            assert outcome.received_labels == plan.verification.survivability[edge]
            assert outcome.decoded == (gen.payload_a, gen.payload_b)


def test_no_arc_carries_a_generation_twice():
    net = ladder15()
    cn = coding(net)
    plan = decompose(net)
    gen = Generation(seq=9, payload_a=b"\x01", payload_b=b"\x02")
    outcome = simulate_transmission(cn, plan, gen)
    assert outcome.arc_sends
    assert all(count == 1 for count in outcome.arc_sends.values())
    # every planned arc carried the packet exactly once in the failure-free run
    planned = sum(len(arcs) for arcs in plan.subflows.values())
    assert len(outcome.arc_sends) == planned


def test_generation_checks_lengths():
    with pytest.raises(LengthMismatch):
        Generation(seq=0, payload_a=b"\x00", payload_b=b"\x00\x01")
    gen = Generation(seq=0, payload_a=b"\x12", payload_b=b"\x25")
    assert gen.payload_xor == b"\x37"


def test_bulk_random_roundtrip():
    rng = random.Random(2024)
    for _ in range(500):
        size = rng.randint(0, 32)
        a = rng.randbytes(size)
        b = rng.randbytes(size)
        packets = encode(a, b)
        drop = rng.choice(("A", "B", "XOR"))
        received = {k: v for k, v in packets.items() if k != drop}
        assert decode(received) == (a, b)
