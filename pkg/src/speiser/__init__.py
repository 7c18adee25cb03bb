"""Speiser graphs: extension, labelling, duality and end decomposition."""

from .balance import conjecture_harness, hall_check, koch_lei_check, tomasini_balance, tri_verdict
from .decomposition import decompose, find_log_ends, maximize_ends, nucleus
from .duality import dual, forget_valence2, primal, subdivide_edges
from .extension import apply_extension, brute_force_feasibility, solve_extension
from .graph import EndDescriptor, Face, GraphBuilder, Kind, RotationGraph, build_graph, is_isomorphic
from .labelling import Labelling, construct_labelling, q_bounds, verify_labelling

__all__ = [
    "EndDescriptor", "Face", "GraphBuilder", "Kind", "Labelling", "RotationGraph",
    "apply_extension", "brute_force_feasibility", "build_graph", "conjecture_harness",
    "construct_labelling", "decompose", "dual", "find_log_ends", "forget_valence2", "hall_check",
    "is_isomorphic", "koch_lei_check", "maximize_ends", "nucleus", "primal", "q_bounds",
    "solve_extension", "subdivide_edges", "tomasini_balance", "tri_verdict", "verify_labelling",
]
