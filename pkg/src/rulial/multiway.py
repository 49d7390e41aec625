"""Rulial multiway graphs: every micro-rule applied to every configuration.

Graphs are built breadth-first from a root configuration.  Each node keeps
the BFS layer at which it was first reached; that layering is the foliation
used for slices.
"""

from __future__ import annotations

import logging
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import networkx as nx

from .machine import Config, MachineSpec, neighbors, successor_indices

log = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 5_000_000


class SizeCapExceeded(RuntimeError):
    def __init__(self, layer: int, count: int, cap: int):
        self.layer, self.count, self.cap = layer, count, cap
        super().__init__(f"layer {layer} brings the node count to {count}, over the cap of {cap}")


@dataclass
class MultiwayGraph:
    spec: MachineSpec
    root: Config
    layer: dict[Config, int]
    edges: list[tuple[Config, Config, int]]
    depth: int
    saturated: bool = False
    truncated: bool = False
    _keys: dict[Config, str] = field(default_factory=dict, repr=False, compare=False)

    def key(self, c: Config) -> str:
        k = self._keys.get(c)
        if k is None:
            k = self._keys[c] = c.key()
        return k

    @property
    def nodes(self) -> list[Config]:
        """Nodes sorted by canonical key."""
        return sorted(self.layer, key=self.key)

    def __len__(self):
        return len(self.layer)

    def sorted_edges(self) -> list[tuple[Config, Config, int]]:
        return sorted(self.edges, key=lambda e: (self.key(e[0]), self.key(e[1]), e[2]))

    def simple_edges(self) -> set[tuple[Config, Config]]:
        return {(a, b) for a, b, _ in self.edges}

    def layer_sizes(self) -> list[int]:
        sizes = Counter(self.layer.values())
        return [sizes[d] for d in range(max(sizes) + 1)]

    def nodes_at(self, layer: int) -> list[Config]:
        return sorted((c for c, d in self.layer.items() if d == layer), key=self.key)

    def out_edges(self) -> dict[Config, list[tuple[Config, int]]]:
        out: dict[Config, list[tuple[Config, int]]] = {c: [] for c in self.layer}
        for a, b, m in self.edges:
            out[a].append((b, m))
        return out

    def in_edges(self) -> dict[Config, list[tuple[Config, int]]]:
        inc: dict[Config, list[tuple[Config, int]]] = {c: [] for c in self.layer}
        for a, b, m in self.edges:
            inc[b].append((a, m))
        return inc

    def to_networkx(self, dedup: bool = False, directed: bool = True) -> nx.Graph:
        """Export with canonical keys as node ids.

        ``dedup`` collapses parallel edges; ``directed=False`` also merges the
        two directions of an edge pair.
        """
        if not directed:
            g = nx.Graph()
        elif dedup:
            g = nx.DiGraph()
        else:
            g = nx.MultiDiGraph()
        for c in self.nodes:
            g.add_node(self.key(c), layer=self.layer[c])
        for a, b, m in self.sorted_edges():
            label = self.spec.micro_rule(m).label()
            if isinstance(g, nx.MultiDiGraph):
                g.add_edge(self.key(a), self.key(b), microrule=label)
            elif not g.has_edge(self.key(a), self.key(b)):
                g.add_edge(self.key(a), self.key(b), microrule=label)
        return g


def _expand(spec: MachineSpec, frontier: list[Config]) -> list[list[tuple[int, Config]]]:
    return [successor_indices(spec, c) for c in frontier]


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def build_rulial_graph(spec: MachineSpec, init: Config | None = None, t: int | None = None,
                       *, max_nodes: int = DEFAULT_MAX_NODES, workers: int = 1,
                       on_cap: str = "raise") -> MultiwayGraph:
    """Breadth-first rulial multiway graph from ``init`` to ``t`` steps.

    With ``t=None`` the tape must be finite and the build runs until a layer
    adds nothing new.  Nodes in the final layer are not expanded.

    A layer that pushes the node count past ``max_nodes`` raises
    :class:`SizeCapExceeded`, or with ``on_cap="truncate"`` is dropped and the
    graph returned so far is flagged ``truncated``.  Frontier expansion can be
    spread over ``workers`` processes without changing the result.
    """
    if on_cap not in ("raise", "truncate"):
        raise ValueError("on_cap must be 'raise' or 'truncate'")
    if init is None:
        init = spec.blank()
    spec.check_config(init)
    if t is None and not spec.finite:
        raise ValueError("an unbounded tape needs a step count")
    if t is not None and t < 0:
        raise ValueError("t must be >= 0")

    layer = {init: 0}
    edges: list[tuple[Config, Config, int]] = []
    frontier = [init]
    depth = 0
    truncated = False
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        while frontier and (t is None or depth < t):
            if pool is not None and len(frontier) > 64:
                parts = pool.map(_expand, [spec] * workers, _chunks(frontier, workers))
                expanded = [succ for part in parts for succ in part]
            else:
                expanded = _expand(spec, frontier)
            depth += 1
            n_edges = len(edges)
            new = []
            for c, succ in zip(frontier, expanded):
                for m, x in succ:
                    edges.append((c, x, m))
                    if x not in layer:
                        layer[x] = depth
                        new.append(x)
            if len(layer) > max_nodes:
                if on_cap == "raise":
                    raise SizeCapExceeded(depth, len(layer), max_nodes)
                del edges[n_edges:]
                for x in new:
                    del layer[x]
                depth -= 1
                truncated = True
                log.warning("truncated at layer %d: node cap %d", depth + 1, max_nodes)
                break
            new.sort(key=Config.key)
            frontier = new
    finally:
        if pool is not None:
            pool.shutdown()
    saturated = not frontier and not truncated
    if saturated:
        # the final pass only re-expanded known nodes
        depth = max(layer.values())
    log.debug("built %d nodes, %d edges, depth %d", len(layer), len(edges), depth)
    return MultiwayGraph(spec, init, layer, edges, depth, saturated, truncated)


@dataclass
class GrowthSequence:
    spec: MachineSpec
    mode: str
    counts: list[int]

    def layer_sizes(self) -> list[int]:
        return [self.counts[0]] + [b - a for a, b in zip(self.counts, self.counts[1:])]


def _ball_counts(spec, init, t_max, step, max_nodes):
    if t_max < 0:
        raise ValueError("t_max must be >= 0")
    if init is None:
        init = spec.blank()
    seen = {init}
    frontier = [init]
    counts = [1]
    for d in range(1, t_max + 1):
        new = []
        for c in frontier:
            for x in step(c):
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        if len(seen) > max_nodes:
            raise SizeCapExceeded(d, len(seen), max_nodes)
        frontier = new
        counts.append(len(seen))
    return counts


def directed_ball_counts(spec: MachineSpec, init: Config | None = None, t_max: int = 10,
                         *, max_nodes: int = DEFAULT_MAX_NODES) -> GrowthSequence:
    """Number of configurations within forward distance t, for t = 0..t_max."""
    counts = _ball_counts(spec, init, t_max,
                          lambda c: [x for _, x in successor_indices(spec, c)], max_nodes)
    return GrowthSequence(spec, "directed", counts)


def undirected_ball_counts(spec: MachineSpec, init: Config | None = None, t_max: int = 10,
                           *, max_nodes: int = DEFAULT_MAX_NODES) -> GrowthSequence:
    counts = _ball_counts(spec, init, t_max, lambda c: neighbors(spec, c), max_nodes)
    return GrowthSequence(spec, "undirected", counts)


def ball_count_formula(s: int, k: int, t: int) -> int | None:
    """Closed-form ball size where one is known (default moves, unbounded tape)."""
    if t == 0:
        return 1
    if t == 1:
        return 2 * s * k + 1
    if k == 1 and t > 1:
        return (2 * t + 1) * s
    return None


def exact_step_sets(g: MultiwayGraph, steps: int) -> list[set[Config]]:
    """Configurations reachable in exactly 0, 1, ..., ``steps`` steps."""
    out = g.out_edges()
    sets = [{g.root}]
    for _ in range(steps):
        sets.append({x for c in sets[-1] for x, _ in out[c]})
    return sets


def rulial_slice(g: MultiwayGraph, layer: int, foliation: str = "first_reach") -> nx.Graph:
    """Transversal graph of one foliation layer.

    Members of ``layer`` are joined when they share a parent in the previous
    layer.  ``first_reach`` layers by BFS depth (a revisited configuration
    keeps its first layer); ``step`` takes every configuration reachable in
    exactly ``layer`` steps, so earlier configurations can reappear.
    """
    if not 1 <= layer <= g.depth:
        raise ValueError(f"layer must lie in [1, {g.depth}]")
    if foliation == "first_reach":
        members = set(g.nodes_at(layer))
        parents = {c for c, d in g.layer.items() if d == layer - 1}
    elif foliation == "step":
        *_, parents, members = exact_step_sets(g, layer)
    else:
        raise ValueError(f"unknown foliation {foliation!r}")
    children: dict[Config, set[Config]] = {}
    for a, b, _ in g.edges:
        if b in members and a in parents:
            children.setdefault(a, set()).add(b)
    s = nx.Graph()
    s.add_nodes_from(sorted(g.key(c) for c in members))
    for parent in sorted(children, key=g.key):
        kids = sorted(g.key(c) for c in children[parent])
        for i, u in enumerate(kids):
            for v in kids[i + 1:]:
                s.add_edge(u, v)
    return s


@dataclass
class TransitivityReport:
    passed: bool
    degree: int
    checked: int
    method: str
    violation: tuple[str, str] | None = None
    reason: str = ""

    def __bool__(self):
        return self.passed


def _out_ball(out, root, radius):
    dist = {root: 0}
    queue = deque([root])
    g = nx.MultiDiGraph()
    g.add_node(root, root=True)
    while queue:
        c = queue.popleft()
        if dist[c] == radius:
            continue
        for x, _ in out[c]:
            if x not in dist:
                dist[x] = dist[c] + 1
                g.add_node(x, root=False)
                queue.append(x)
            g.add_edge(c, x)
    return g


def _same_root(a, b):
    return a["root"] == b["root"]


def check_vertex_transitivity(g: MultiwayGraph, radius: int = 2,
                              full_limit: int = 200) -> TransitivityReport:
    """Check that every node looks the same as every other.

    Degrees must all equal ``|moves|*s*k`` and every radius-``radius``
    out-neighborhood must be isomorphic to the root's.  On a saturated finite
    graph with at most ``full_limit`` nodes an automorphism moving the root
    onto each node is also searched for.  On unbounded tapes only interior
    nodes (whose neighborhoods were fully built) are examined.
    """
    spec = g.spec
    want = len(spec.moves) * spec.s * spec.k
    closed = spec.finite and g.saturated
    out = g.out_edges()
    ref = g.key(g.root)

    if closed:
        expanded = g.nodes
        interior = expanded
    else:
        expanded = [c for c in g.nodes if g.layer[c] < g.depth]
        interior = [c for c in g.nodes if g.layer[c] <= g.depth - radius]

    regular = next((g.key(c) for c in expanded if len(out[c]) == want), ref)
    for c in expanded:
        if len(out[c]) != want:
            return TransitivityReport(False, want, len(expanded), "degree", (regular, g.key(c)),
                                      f"out-degree {len(out[c])} != {want}")
    if closed:
        inc = g.in_edges()
        for c in expanded:
            if len(inc[c]) != want:
                return TransitivityReport(False, want, len(expanded), "degree", (ref, g.key(c)),
                                          f"in-degree {len(inc[c])} != {want}")

    root = g.root if g.root in interior else (interior[0] if interior else None)
    if root is None:
        return TransitivityReport(True, want, 0, "degree", reason="no interior nodes")
    ref = g.key(root)
    ref_ball = _out_ball(out, root, radius)
    for c in interior:
        if not nx.is_isomorphic(ref_ball, _out_ball(out, c, radius), node_match=_same_root):
            return TransitivityReport(False, want, len(interior), "local", (ref, g.key(c)),
                                      f"radius-{radius} neighborhoods differ")

    if closed and len(g) <= full_limit:
        full = nx.MultiDiGraph()
        full.add_nodes_from(g.layer, root=False)
        full.add_edges_from((a, b) for a, b, _ in g.edges)
        marked = full.copy()
        marked.nodes[root]["root"] = True
        for c in interior:
            other = full.copy()
            other.nodes[c]["root"] = True
            if not nx.is_isomorphic(marked, other, node_match=_same_root):
                return TransitivityReport(False, want, len(interior), "automorphism",
                                          (ref, g.key(c)), "no automorphism maps root here")
        return TransitivityReport(True, want, len(interior), "automorphism")
    return TransitivityReport(True, want, len(interior), "local")
