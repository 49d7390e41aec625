"""Elementary cellular automata from a single black cell, and the graph of
configurations all rules reach together.

A configuration is an infinite row: a uniform ``background`` color plus a
finite window of ``cells`` starting at absolute position ``offset``, trimmed
so neither end equals the background.  Rules whose number is odd turn a white
background black, so the background is tracked exactly rather than assumed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import networkx as nx

from .multiway import SizeCapExceeded


class CAConfig(NamedTuple):
    background: int
    offset: int
    cells: tuple[int, ...]

    def key(self) -> str:
        return f"b{self.background}:o{self.offset}:{''.join(map(str, self.cells))}"

    def cell(self, x: int) -> int:
        i = x - self.offset
        return self.cells[i] if 0 <= i < len(self.cells) else self.background


def canonical(background: int, offset: int, cells) -> CAConfig:
    cells = tuple(cells)
    lo, hi = 0, len(cells)
    while lo < hi and cells[lo] == background:
        lo += 1
    while hi > lo and cells[hi - 1] == background:
        hi -= 1
    if lo == hi:
        return CAConfig(background, 0, ())
    return CAConfig(background, offset + lo, cells[lo:hi])


SEED = CAConfig(0, 0, (1,))


def check_rule(rule: int) -> None:
    if not 0 <= rule < 256:
        raise ValueError(f"elementary rule numbers lie in [0, 256), got {rule}")


def ca_step(rule: int, c: CAConfig) -> CAConfig:
    check_rule(rule)
    b = c.background
    w = (b, b) + c.cells + (b, b)
    new = tuple((rule >> (w[i - 1] << 2 | w[i] << 1 | w[i + 1])) & 1 for i in range(1, len(w) - 1))
    return canonical((rule >> (7 * b)) & 1, c.offset - 1, new)


def ca_evolve(rule: int, init: CAConfig = SEED, t: int = 10) -> list[CAConfig]:
    out = [init]
    for _ in range(t):
        out.append(ca_step(rule, out[-1]))
    return out


def reflect_rule(rule: int) -> int:
    """Rule number of the left-right mirror image."""
    out = 0
    for nb in range(8):
        if rule >> nb & 1:
            l, c, r = nb >> 2 & 1, nb >> 1 & 1, nb & 1
            out |= 1 << (r << 2 | c << 1 | l)
    return out


def reflect_config(c: CAConfig) -> CAConfig:
    if not c.cells:
        return c
    return CAConfig(c.background, -(c.offset + len(c.cells) - 1), c.cells[::-1])


@dataclass
class CAReachGraph:
    rules: list[int]
    t_max: int
    first_step: dict[CAConfig, int]
    edges: dict[tuple[CAConfig, CAConfig], list[int]]  # transition -> rules using it

    @property
    def counts(self) -> list[int]:
        """Configurations first reached at each step."""
        per = Counter(self.first_step.values())
        return [per[t] for t in range(self.t_max + 1)]

    def to_networkx(self, directed: bool = True) -> nx.Graph:
        g = nx.DiGraph() if directed else nx.Graph()
        for c in sorted(self.first_step, key=CAConfig.key):
            g.add_node(c.key(), step=self.first_step[c], background=c.background)
        for (a, b), rules in sorted(self.edges.items(), key=lambda kv: (kv[0][0].key(), kv[0][1].key())):
            g.add_edge(a.key(), b.key(), rules=",".join(map(str, rules)))
        return g


def ca_reach_graph(rules=range(256), t_max: int = 50, init: CAConfig = SEED,
                   *, max_nodes: int = 5_000_000) -> CAReachGraph:
    """Evolve every rule from ``init`` and merge identical configurations.

    Ties in first reach are resolved by step, then rule number, so the result
    does not depend on iteration order.
    """
    rules = sorted(set(rules))
    for r in rules:
        check_rule(r)
    first = {init: 0}
    edges: dict[tuple[CAConfig, CAConfig], list[int]] = {}
    current = {r: init for r in rules}
    for t in range(1, t_max + 1):
        for r in rules:
            a = current[r]
            b = current[r] = ca_step(r, a)
            first.setdefault(b, t)
            edges.setdefault((a, b), []).append(r)
        if len(first) > max_nodes:
            raise SizeCapExceeded(t, len(first), max_nodes)
    return CAReachGraph(rules, t_max, first, edges)


def even_rules() -> list[int]:
    """Rules that keep a white background white."""
    return list(range(0, 256, 2))


def ca_geodesic_layers(graph: CAReachGraph, source: CAConfig = SEED) -> list[int]:
    """Undirected BFS layer sizes of the reach graph around ``source``."""
    g = nx.Graph()
    g.add_nodes_from(graph.first_step)
    g.add_edges_from(graph.edges)
    dist = nx.single_source_shortest_path_length(g, source)
    sizes = Counter(dist.values())
    return [sizes[d] for d in range(max(sizes) + 1)]
