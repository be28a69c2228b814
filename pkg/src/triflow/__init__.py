"""Single-link-failure protection for unicast connections.

Split user data into halves A and B, route A, B and A xor B on three pairwise
arc-disjoint subflow DAGs, and any single edge failure still delivers two of
the three streams: the destination decodes instantly, with coding only at the
endpoints plus duplicate/select relays inside the network.
"""

from .conditioning import (CodingNetwork, ConditionedNetwork, Feasibility,
                           FeasibilityKind, Network, classify_feasibility,
                           condition_network, derive_coding_capacities)
from .cutchain import CutChain, CutKind, build_cut_chain, classify_cut
from .decompose import (AuxiliaryGraph, Segment, SegmentSolution, SegmentType,
                        assign_roles, build_auxiliary, decompose,
                        extract_segments, glue_segments, solve_segment)
from .graph import (CondensationDag, Digraph, FlowResult, cancel_cycles,
                    decompose_flow_to_paths, edge_disjoint_paths, max_flow,
                    residual_scc_condensation)
from .netgen import GenParams, Structure, generate
from .plan import LABELS, Arc, NodeRole, RecoveryPlan, Role, VerificationReport
from .simulate import (DeliveryOutcome, Generation, decode, encode,
                       failure_sweep, simulate_transmission)
from .verify import (brute_force_decomposition_exists, brute_force_feasible,
                     survivability_by_removal, verify_plan)
from . import errors

__all__ = [
    "Arc", "AuxiliaryGraph", "CodingNetwork", "CondensationDag",
    "ConditionedNetwork", "CutChain", "CutKind", "DeliveryOutcome", "Digraph",
    "Feasibility", "FeasibilityKind", "FlowResult", "GenParams", "Generation",
    "LABELS", "Network", "NodeRole", "RecoveryPlan", "Role", "Segment",
    "SegmentSolution", "SegmentType", "Structure", "VerificationReport",
    "assign_roles", "build_auxiliary", "build_cut_chain", "cancel_cycles",
    "classify_cut", "classify_feasibility", "condition_network", "decode",
    "decompose", "decompose_flow_to_paths", "derive_coding_capacities",
    "edge_disjoint_paths", "encode", "errors", "failure_sweep", "generate",
    "glue_segments", "max_flow", "residual_scc_condensation", "simulate_transmission",
    "solve_segment", "extract_segments", "brute_force_decomposition_exists",
    "brute_force_feasible", "survivability_by_removal", "verify_plan",
]
