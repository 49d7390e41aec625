"""Causal graphs for deterministic runs and for the rulial multiway system."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .machine import Config, DeterministicRule, MachineSpec, det_evolve, successor_indices
from .multiway import DEFAULT_MAX_NODES, SizeCapExceeded


@dataclass(frozen=True)
class DetEvent:
    step: int
    head_pos: int
    pre_state: int
    post_state: int
    pre_color: int
    post_color: int
    move: int


@dataclass
class DetCausalGraph:
    events: list[DetEvent]
    edges: list[tuple[int, int, str]]  # (from step, to step, "head" | "revisit")

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for e in self.events:
            g.add_node(e.step, head_pos=e.head_pos, pre_state=e.pre_state,
                       post_state=e.post_state, pre_color=e.pre_color,
                       post_color=e.post_color, move=e.move)
        for a, b, kind in self.edges:
            g.add_edge(a, b, key=kind, kind=kind)
        return g

    def revisit_edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b, kind in self.edges if kind == "revisit"]


def det_causal_graph(rule: DeterministicRule, init: Config, t: int) -> DetCausalGraph:
    """Events of a deterministic run joined by head succession and cell revisits.

    Event ``τ`` rewrites the cell under the head of ``trace[τ-1]``.  It feeds
    event ``τ+1`` (the head carries on) and the earliest later event that
    touches the same cell.  Runs that halt on a bounded tape give fewer events.
    """
    trace = det_evolve(rule, init, t)
    events = []
    for step, (a, b) in enumerate(zip(trace, trace[1:]), start=1):
        events.append(DetEvent(step, a.pos, a.state, b.state, a.head_color(),
                               b.color_at(a.pos), _displacement(rule.spec, a.pos, b.pos)))
    edges = [(e.step, e.step + 1, "head") for e in events[:-1]]
    last_at: dict[int, int] = {}
    for e in events:
        prev = last_at.get(e.head_pos)
        if prev is not None:
            edges.append((prev, e.step, "revisit"))
        last_at[e.head_pos] = e.step
    edges.sort()
    return DetCausalGraph(events, edges)


def _displacement(spec: MachineSpec, a: int, b: int) -> int:
    if spec.tape != "cyclic":
        return b - a
    for d in spec.moves:
        if (a + d) % spec.n == b:
            return d
    raise AssertionError("head moved by an unknown amount")


@dataclass(frozen=True)
class MultiwayEvent:
    layer: int
    input: Config
    microrule: int
    output: Config

    def key(self) -> str:
        return f"E:{self.layer}:{self.input.key()}:{self.microrule}"


@dataclass
class MultiwayCausalGraph:
    """Step-indexed events of the rulial multiway system.

    ``states[τ]`` holds every configuration reachable in exactly ``τ`` steps;
    each of them is expanded at step ``τ + 1`` even if it was seen before, so
    the event set is the full unfolding to ``t`` steps.  An event causes every
    event of the next step whose input is its output.
    """

    spec: MachineSpec
    states: list[list[Config]]
    events: list[MultiwayEvent]
    edges: list[tuple[int, int]]
    _by_input: dict = field(default_factory=dict, repr=False)

    @property
    def depth(self) -> int:
        return len(self.states) - 1

    def events_at(self, layer: int) -> list[MultiwayEvent]:
        return [e for e in self.events if e.layer == layer]

    def event_index(self, layer: int, c: Config, microrule: int) -> int | None:
        return self._by_input.get((layer, c), {}).get(microrule)

    def in_degrees(self) -> Counter:
        return Counter(b for _, b in self.edges)

    def out_degrees(self) -> Counter:
        return Counter(a for a, _ in self.edges)

    def to_networkx(self) -> nx.DiGraph:
        """Pure causal graph: events only."""
        g = nx.DiGraph()
        for e in sorted(self.events, key=MultiwayEvent.key):
            g.add_node(e.key(), layer=e.layer, microrule=self.spec.micro_rule(e.microrule).label())
        for a, b in sorted(self.edges, key=lambda ab: (self.events[ab[0]].key(), self.events[ab[1]].key())):
            g.add_edge(self.events[a].key(), self.events[b].key())
        return g

    def combined(self) -> nx.DiGraph:
        """States and events together: state -> event -> state."""
        g = nx.DiGraph()
        for tau, layer in enumerate(self.states):
            for c in layer:
                g.add_node(f"S:{tau}:{c.key()}", kind="state", layer=tau)
        for e in self.events:
            g.add_node(e.key(), kind="event", layer=e.layer)
            g.add_edge(f"S:{e.layer - 1}:{e.input.key()}", e.key())
            g.add_edge(e.key(), f"S:{e.layer}:{e.output.key()}")
        return g


def rulial_multiway_causal_graph(spec: MachineSpec, init: Config | None = None, t: int = 3,
                                 *, max_nodes: int = DEFAULT_MAX_NODES) -> MultiwayCausalGraph:
    if init is None:
        init = spec.blank()
    if t < 0:
        raise ValueError("t must be >= 0")
    states = [[init]]
    events: list[MultiwayEvent] = []
    by_input: dict = {}
    for layer in range(1, t + 1):
        nxt = {}
        for c in states[-1]:
            slot = by_input.setdefault((layer, c), {})
            for m, x in successor_indices(spec, c):
                slot[m] = len(events)
                events.append(MultiwayEvent(layer, c, m, x))
                nxt.setdefault(x, None)
        if len(events) > max_nodes:
            raise SizeCapExceeded(layer, len(events), max_nodes)
        states.append(sorted(nxt, key=Config.key))
    edges = []
    for a, e in enumerate(events):
        for b in by_input.get((e.layer + 1, e.output), {}).values():
            edges.append((a, b))
    return MultiwayCausalGraph(spec, states, events, edges, by_input)


def _within(spec: MachineSpec, c: Config, lo: int, hi: int) -> set[Config]:
    """Configurations reachable from ``c`` in between ``lo`` and ``hi`` steps."""
    out: set[Config] = {c} if lo == 0 else set()
    frontier = {c}
    for d in range(1, hi + 1):
        frontier = {x for y in frontier for _, x in successor_indices(spec, y)}
        if d >= lo:
            out |= frontier
    return out


@dataclass
class MergeWitness:
    input: Config
    microrules: tuple[int, int]
    witness: Config | None


def merge_witnesses(spec: MachineSpec, init: Config | None = None, t: int = 3,
                    radius: int = 2) -> list[MergeWitness]:
    """For every pair of events branching from one state within ``t`` steps,
    a configuration both outputs reach in 1..``radius`` further steps.

    ``witness`` is ``None`` for a pair that does not reconverge.  Witnesses
    lie within ``t + radius`` steps of ``init``.
    """
    mwcg = rulial_multiway_causal_graph(spec, init, t)
    cache: dict[Config, set[Config]] = {}
    out = []
    seen_inputs = set()
    for tau in range(t):
        for c in mwcg.states[tau]:
            if c in seen_inputs:
                continue
            seen_inputs.add(c)
            succ = successor_indices(spec, c)
            for (m1, o1), (m2, o2) in combinations(succ, 2):
                r1 = cache.setdefault(o1, _within(spec, o1, 1, radius))
                r2 = cache.setdefault(o2, _within(spec, o2, 1, radius))
                common = r1 & r2
                w = min(common, key=Config.key) if common else None
                out.append(MergeWitness(c, (m1, m2), w))
    return out


@dataclass
class IndividualCausalGraph:
    rule: DeterministicRule
    events: list[int]  # indices into the multiway causal graph, one per step
    graph: nx.DiGraph

    @property
    def length(self) -> int:
        return len(self.events)


def extract_individual_causal_graph(mwcg: MultiwayCausalGraph, rule: DeterministicRule,
                                    init: Config, t: int) -> IndividualCausalGraph:
    """The copy of one deterministic run inside the multiway causal graph.

    Each step of the run selects the event with the same step, input state and
    micro-rule; consecutive selections must be joined by a causal edge, so the
    result is a path with one node per completed step.
    """
    if t > mwcg.depth:
        raise ValueError(f"multiway causal graph only reaches step {mwcg.depth}")
    trace = det_evolve(rule, init, t)
    spec = mwcg.spec
    chosen = []
    for step, c in enumerate(trace[:-1], start=1):
        m = spec.micro_rule_index(rule.micro_rule(c.state, c.head_color()))
        idx = mwcg.event_index(step, c, m)
        if idx is None:
            raise ValueError(f"step {step} of the run is not an event of the multiway graph")
        chosen.append(idx)
    edge_set = set(mwcg.edges)
    g = nx.DiGraph()
    for idx in chosen:
        g.add_node(mwcg.events[idx].key())
    for a, b in zip(chosen, chosen[1:]):
        if (a, b) not in edge_set:
            raise AssertionError("consecutive steps of a run are not causally linked")
        g.add_edge(mwcg.events[a].key(), mwcg.events[b].key())
    return IndividualCausalGraph(rule, chosen, g)


def degree_statistics(g: nx.DiGraph) -> Counter:
    """Multiset of (in-degree, out-degree) pairs, used for grid-shape checks."""
    return Counter((g.in_degree(v), g.out_degree(v)) for v in g)
