"""Packet-level simulation of a plan: encode two payload halves, flood each
labeled subflow with splitter/merger semantics, optionally fail one edge, and
decode at the destination from whichever labels arrived."""

from __future__ import annotations

from dataclasses import dataclass, field

from .conditioning import CodingNetwork
from .errors import InsufficientLabels, LengthMismatch, UnverifiedPlan
from .graph import sorted_ids
from .plan import LABELS, RecoveryPlan


def _xor(a: bytes, b: bytes) -> bytes:
    return bytes(x ^ y for x, y in zip(a, b))


@dataclass(frozen=True)
class Generation:
    """One batch of user data split into two equal halves."""

    seq: int
    payload_a: bytes
    payload_b: bytes

    def __post_init__(self):
        if len(self.payload_a) != len(self.payload_b):
            raise LengthMismatch(
                f"halves differ: {len(self.payload_a)} vs {len(self.payload_b)} bytes")

    @property
    def payload_xor(self) -> bytes:
        return _xor(self.payload_a, self.payload_b)


@dataclass(frozen=True)
class DeliveryOutcome:
    received_labels: frozenset
    decoded: tuple | None
    recovered_via: tuple | None
    arc_sends: dict = field(default_factory=dict, compare=False)


def encode(a: bytes, b: bytes) -> dict:
    """Three labeled packets: A, B and their bytewise XOR."""
    if len(a) != len(b):
        raise LengthMismatch(f"payloads differ: {len(a)} vs {len(b)} bytes")
    return {"A": a, "B": b, "XOR": _xor(a, b)}


def decode(received: dict) -> tuple:
    """Recover (a, b) from any two of the three labeled packets."""
    labels = [k for k in LABELS if k in received]
    if len(labels) < 2:
        raise InsufficientLabels(f"need two labels, got {labels}")
    lens = {len(received[k]) for k in labels}
    if len(lens) > 1:
        raise LengthMismatch("received packets differ in length")
    if "A" in received and "B" in received:
        return received["A"], received["B"]
    if "A" in received:
        return received["A"], _xor(received["A"], received["XOR"])
    return _xor(received["B"], received["XOR"]), received["B"]


def _recovery_rule(labels) -> tuple:
    if "A" in labels and "B" in labels:
        return ("A", "B")
    if "A" in labels:
        return ("A", "XOR")
    return ("B", "XOR")


def simulate_transmission(cn: CodingNetwork, plan: RecoveryPlan, gen: Generation,
                          failed_edge=None) -> DeliveryOutcome:
    """Forward one generation through every subflow.

    Every node holding a copy of the packet forwards it once onto each of its
    subflow out-arcs (duplication at branch points, first-copy selection at
    joins, keyed by the generation number).  Arcs of `failed_edge` drop what
    is sent into them.
    """
    if plan.verification is None or not plan.verification.overall:
        raise UnverifiedPlan("plan has no passing verification report")
    payloads = encode(gen.payload_a, gen.payload_b)

    received = {}
    arc_sends = {}
    for label in LABELS:
        arcs = plan.subflows[label]
        adj = {}
        for arc in sorted_ids(arcs):
            tail, head = cn.graph.ends(arc.edge)
            adj.setdefault(tail, []).append((arc, head))
        have = {cn.source}
        queue = [cn.source]
        while queue:
            u = queue.pop()
            for arc, head in adj.get(u, ()):
                arc_sends[(label, arc)] = arc_sends.get((label, arc), 0) + 1
                if arc.edge == failed_edge:
                    continue  # sent into the dead link, never delivered
                if head not in have:
                    have.add(head)
                    queue.append(head)
        if cn.target in have:
            received[label] = payloads[label]

    if len(received) >= 2:
        decoded = decode(received)
        via = _recovery_rule(received)
    else:
        decoded = None
        via = None
    return DeliveryOutcome(received_labels=frozenset(received),
                           decoded=decoded, recovered_via=via,
                           arc_sends=arc_sends)


def failure_sweep(cn: CodingNetwork, plan: RecoveryPlan, gen: Generation) -> dict:
    """One simulation per edge of the network, that edge failed."""
    return {edge: simulate_transmission(cn, plan, gen, failed_edge=edge)
            for edge in cn.graph.edge_ids}
