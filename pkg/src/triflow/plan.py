"""Shared plan and report types: the three labeled subflows, relay roles and
the structural verification report."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, NamedTuple


LABEL_A = "A"
LABEL_B = "B"
LABEL_XOR = "XOR"
LABELS = (LABEL_A, LABEL_B, LABEL_XOR)


class Arc(NamedTuple):
    """One capacity unit of an edge: `copy` is 0, or 1 on capacity-2 edges."""

    edge: object
    copy: int


class Role(Enum):
    SPLITTER = "splitter"  # duplicates one incoming copy onto two out-arcs
    MERGER = "merger"      # forwards one of two identical incoming copies


class NodeRole(NamedTuple):
    node: object
    role: Role
    label: str


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the structural checks on a plan.

    `survivability` maps every edge of the network to the set of labels whose
    subflow still connects source to target after that edge fails.  `overall`
    holds iff all sub-checks pass and every edge keeps at least two labels.
    """

    disjointness_ok: bool
    capacity_ok: bool
    connectivity: Mapping[str, bool]
    survivability: Mapping[object, frozenset]
    overall: bool
    violations: tuple = field(default_factory=tuple)


@dataclass(frozen=True)
class RecoveryPlan:
    """Three pairwise arc-disjoint subflows over the parallel-arc expansion of
    the network, labeled A, B and XOR (carrying A xor B).

    The source emits the three encoded streams onto the respective subflows;
    the destination decodes from any two that arrive.  Inside the network the
    only non-routing behaviour is duplication (splitter) and selection
    (merger), annotated per node and label in `roles`.
    """

    subflows: Mapping[str, frozenset]
    roles: tuple
    feasibility: object
    verification: VerificationReport | None = None

    def with_verification(self, report: VerificationReport) -> "RecoveryPlan":
        return replace(self, verification=report)

    def arcs_of(self, edge) -> dict:
        """Which labels use which copies of `edge`."""
        used = {}
        for label, arcs in self.subflows.items():
            for arc in arcs:
                if arc.edge == edge:
                    used.setdefault(label, []).append(arc)
        return used
