"""Where all deterministic machines together can reach in the rulial graph."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .machine import Config, DeterministicRule, MachineSpec, apply_micro_rule, det_evolve
from .multiway import MultiwayGraph, build_rulial_graph

DEFAULT_MAX_RULE_STEPS = 10_000_000


class RuleStepCapExceeded(RuntimeError):
    pass


@dataclass
class ReachProfile:
    spec: MachineSpec
    root: Config
    t_max: int
    first_step: dict[Config, int]
    # (source, target, micro-rule index) -> first step it was traversed
    edges: dict[tuple[Config, Config, int], int]
    branches: int

    @property
    def cumulative(self) -> list[int]:
        per_step = Counter(self.first_step.values())
        out, total = [], 0
        for t in range(self.t_max + 1):
            total += per_step[t]
            out.append(total)
        return out

    @property
    def novel(self) -> list[int]:
        c = self.cumulative
        return [c[0]] + [b - a for a, b in zip(c, c[1:])]

    def union_graph(self, t: int | None = None) -> nx.DiGraph:
        """Configurations and transitions used by some rule within ``t`` steps."""
        t = self.t_max if t is None else t
        g = nx.DiGraph()
        g.add_nodes_from(c for c, s in self.first_step.items() if s <= t)
        g.add_edges_from((a, b) for (a, b, _), s in self.edges.items() if s <= t)
        return g


def det_reach_profile(spec: MachineSpec, init: Config | None = None, t_max: int = 15,
                      *, max_rule_steps: int = DEFAULT_MAX_RULE_STEPS) -> ReachProfile:
    """Run every deterministic rule ``t_max`` steps and record what is reached.

    Rules are explored as a tree over partial rule tables: a branch splits
    only when the run reads a case its table has not fixed yet, so rules
    with identical traces are followed once.  ``max_rule_steps`` bounds the
    number of steps actually simulated.
    """
    if init is None:
        init = spec.blank()
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    first_step = {init: 0}
    edges: dict[tuple[Config, Config, int], int] = {}
    work = 0
    branches = 0
    n_out = spec.n_outcomes
    # (config, step, partial table as tuple of outcome index or -1)
    stack = [(init, 0, (-1,) * spec.n_cases)]
    while stack:
        c, step, table = stack.pop()
        if step == t_max:
            branches += 1
            continue
        case = spec.case_index(c.state, c.head_color())
        choices = range(n_out) if table[case] < 0 else (table[case],)
        for o in choices:
            m = case * n_out + o
            x = apply_micro_rule(spec, c, spec.micro_rule(m))
            work += 1
            if work > max_rule_steps:
                raise RuleStepCapExceeded(f"more than {max_rule_steps} rule steps")
            if x is None:
                branches += 1
                continue
            # depth-first order can meet a configuration late before early
            if first_step.get(x, t_max + 1) > step + 1:
                first_step[x] = step + 1
            e = (c, x, m)
            if edges.get(e, t_max + 1) > step + 1:
                edges[e] = step + 1
            new_table = table if table[case] >= 0 else table[:case] + (o,) + table[case + 1:]
            stack.append((x, step + 1, new_table))
    return ReachProfile(spec, init, t_max, first_step, edges, branches)


@dataclass
class Overlay:
    graph: MultiwayGraph
    node_reachable: dict[Config, bool]
    edge_reachable: list[bool]

    @property
    def reachable_nodes(self) -> int:
        return sum(self.node_reachable.values())

    @property
    def reachable_edges(self) -> int:
        return sum(self.edge_reachable)

    def to_networkx(self) -> nx.MultiDiGraph:
        g = self.graph
        out = nx.MultiDiGraph()
        for c in g.nodes:
            out.add_node(g.key(c), layer=g.layer[c], det_reachable=self.node_reachable[c])
        marks = dict(zip(map(tuple, g.edges), self.edge_reachable))
        for a, b, m in g.sorted_edges():
            out.add_edge(g.key(a), g.key(b), microrule=g.spec.micro_rule(m).label(),
                         det_reachable=marks[a, b, m])
        return out


def overlay(g: MultiwayGraph, profile: ReachProfile) -> Overlay:
    """Mark which nodes and edges of ``g`` some deterministic rule uses within
    ``g.depth`` steps."""
    if profile.root != g.root:
        raise ValueError("graph and profile start from different configurations")
    if profile.t_max < g.depth:
        raise ValueError(f"profile only covers {profile.t_max} steps, graph has {g.depth}")
    t = g.depth
    nodes = {c: profile.first_step.get(c, t + 1) <= t for c in g.layer}
    edges = [profile.edges.get(e, t + 1) <= t for e in g.edges]
    return Overlay(g, nodes, edges)


@dataclass
class MachinePath:
    trace: list[Config]
    keys: list[str]
    distance: int
    halted_at: int | None = None

    @property
    def slack(self) -> int:
        return len(self.trace) - 1 - self.distance


def machine_path(rule: DeterministicRule, init: Config, t: int,
                 graph: MultiwayGraph | None = None) -> MachinePath:
    """A rule's run as a path in the rulial graph, with the graph distance
    from ``init`` to where the run ends.

    Pass a ``graph`` already built from ``init`` to at least ``t`` steps to
    reuse it across many rules.
    """
    if graph is None:
        graph = build_rulial_graph(rule.spec, init, t)
    elif graph.root != init or graph.depth < t:
        raise ValueError("graph does not cover this run")
    trace = det_evolve(rule, init, t)
    return MachinePath(list(trace), [c.key() for c in trace], graph.layer[trace[-1]],
                       trace.halted_at)


def geodesic_layer_profile(profile: ReachProfile, source: Config | None = None) -> list[int]:
    """Sizes of successive undirected BFS layers of the union graph."""
    g = profile.union_graph().to_undirected()
    source = profile.root if source is None else source
    dist = nx.single_source_shortest_path_length(g, source)
    sizes = Counter(dist.values())
    return [sizes[d] for d in range(max(sizes) + 1)]


def spoke_report(profile: ReachProfile, radius: int = 3) -> list[int]:
    """Sizes of the pieces left after removing the ball of ``radius`` around
    the root from the undirected union graph, largest first."""
    g = profile.union_graph().to_undirected()
    near = nx.single_source_shortest_path_length(g, profile.root, cutoff=radius)
    rest = g.subgraph(set(g) - set(near))
    return sorted((len(c) for c in nx.connected_components(rest)), reverse=True)


def union_graph_is_rulial_subgraph(profile: ReachProfile) -> bool:
    """Every traversed edge must be a genuine micro-rule step."""
    spec = profile.spec
    return all(apply_micro_rule(spec, a, spec.micro_rule(m)) == b for a, b, m in profile.edges)

