"""Rulial multiway graphs of Turing machines, the Turing machine group,
causal graphs, deterministic rule space and elementary cellular automata."""

from .machine import (Config, DeterministicRule, MachineSpec, MicroRule, apply_micro_rule,
                      det_evolve, enumerate_micro_rules, id_from_rule, make_config,
                      parse_config, predecessors, rule_from_id, successors)
from .multiway import (MultiwayGraph, SizeCapExceeded, build_rulial_graph,
                       check_vertex_transitivity, directed_ball_counts, rulial_slice,
                       undirected_ball_counts)
from .group import GroupElement, cayley_graph, check_axioms, check_relations
from .causal import det_causal_graph, merge_witnesses, rulial_multiway_causal_graph
from .detspace import det_reach_profile, machine_path, overlay
from .ca import CAConfig, ca_evolve, ca_reach_graph, ca_step
from .export import render

__version__ = "0.1.0"

__all__ = [
    "Config", "DeterministicRule", "MachineSpec", "MicroRule", "apply_micro_rule",
    "det_evolve", "enumerate_micro_rules", "id_from_rule", "make_config", "parse_config",
    "predecessors", "rule_from_id", "successors",
    "MultiwayGraph", "SizeCapExceeded", "build_rulial_graph", "check_vertex_transitivity",
    "directed_ball_counts", "rulial_slice", "undirected_ball_counts",
    "GroupElement", "cayley_graph", "check_axioms", "check_relations",
    "det_causal_graph", "merge_witnesses", "rulial_multiway_causal_graph",
    "det_reach_profile", "machine_path", "overlay",
    "CAConfig", "ca_evolve", "ca_reach_graph", "ca_step",
    "render",
]
