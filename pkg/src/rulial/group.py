"""The Turing machine group on a cyclic tape of length n.

An element ``(i, u)`` is a head offset ``i`` in Z_n and a tape word ``u`` whose
base-k digit ``c`` (least significant first) is the color of cell ``c``.  The
product is

    (i, u) * (j, v) = (i + j mod n, rot(u, j) + v)

where ``rot`` rotates the n-digit word right (digit ``c`` moves to ``c - j``)
and ``+`` is digit-wise addition mod k (XOR for k = 2).  A plain bit shift
would lose digits and could not give a group, so the shift is cyclic.

With ``s > 1`` an element also carries a state ``q`` in Z_s that composes
additively; that generalization is exploratory.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass

import networkx as nx

from .machine import Config, MachineSpec
from .multiway import build_rulial_graph


@dataclass(frozen=True, order=True)
class GroupElement:
    i: int
    u: int
    n: int
    k: int = 2
    q: int = 0
    s: int = 1

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or self.s < 1:
            raise ValueError("n, k and s must be positive")
        if not 0 <= self.i < self.n:
            raise ValueError(f"head offset {self.i} outside [0, {self.n})")
        if not 0 <= self.u < self.k ** self.n:
            raise ValueError(f"tape word {self.u} outside [0, {self.k ** self.n})")
        if not 0 <= self.q < self.s:
            raise ValueError(f"state {self.q} outside [0, {self.s})")

    def __mul__(self, other: GroupElement) -> GroupElement:
        return multiply(self, other)

    def __pow__(self, e: int) -> GroupElement:
        base = self if e >= 0 else inverse(self)
        out = identity(self.n, self.k, self.s)
        for _ in range(abs(e)):
            out = out * base
        return out

    def digits(self) -> tuple[int, ...]:
        return to_digits(self.u, self.n, self.k)

    def label(self) -> str:
        if self.s > 1:
            return f"{{{self.q},{self.i},{self.u}}}"
        return f"{{{self.i},{self.u}}}"


def to_digits(u: int, n: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        u, d = divmod(u, k)
        out.append(d)
    return tuple(out)


def from_digits(digits, k: int) -> int:
    u = 0
    for d in reversed(digits):
        u = u * k + d
    return u


def rotate_right(u: int, j: int, n: int, k: int = 2) -> int:
    """Cyclically rotate the n-digit base-k word: digit c moves to c - j."""
    j %= n
    if j == 0:
        return u
    high, low = divmod(u, k ** j)
    return high + low * k ** (n - j)


def _add_words(u: int, v: int, n: int, k: int) -> int:
    if k == 2:
        return u ^ v
    a, b = to_digits(u, n, k), to_digits(v, n, k)
    return from_digits([(x + y) % k for x, y in zip(a, b)], k)


def _neg_word(u: int, n: int, k: int) -> int:
    if k == 2:
        return u
    return from_digits([(-x) % k for x in to_digits(u, n, k)], k)


def identity(n: int, k: int = 2, s: int = 1) -> GroupElement:
    return GroupElement(0, 0, n, k, 0, s)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    if (a.n, a.k, a.s) != (b.n, b.k, b.s):
        raise ValueError("elements belong to different groups")
    n, k = a.n, a.k
    return GroupElement((a.i + b.i) % n, _add_words(rotate_right(a.u, b.i, n, k), b.u, n, k),
                        n, k, (a.q + b.q) % a.s, a.s)


def inverse(a: GroupElement) -> GroupElement:
    j = (-a.i) % a.n
    return GroupElement(j, _neg_word(rotate_right(a.u, j, a.n, a.k), a.n, a.k),
                        a.n, a.k, (-a.q) % a.s, a.s)


def elements(n: int, k: int = 2, s: int = 1) -> list[GroupElement]:
    """All ``s*n*k**n`` elements in (q, i, u) lexicographic order."""
    return [GroupElement(i, u, n, k, q, s)
            for q in range(s) for i in range(n) for u in range(k ** n)]


def standard_generators(n: int, k: int = 2, s: int = 1) -> list[GroupElement]:
    """The elements reached from the identity by one head transition.

    For s = 1, k = 2 these are {1,0}, {n-1,0}, {1,1}, {n-1,1}.  In general
    the head moves by -1 or +1 and cell 0 takes any color; with s > 1 the
    state also takes any value.
    """
    return [GroupElement(i, u, n, k, q, s)
            for q in range(s) for u in range(k) for i in (1 % n, (n - 1) % n)]


def minimal_generators(n: int) -> tuple[GroupElement, GroupElement]:
    """R (move right) and F (flip cell 0)."""
    return GroupElement(1 % n, 0, n), GroupElement(0, 1, n)


def closure(gens: list[GroupElement]) -> set[GroupElement]:
    """Subgroup generated by ``gens``, by breadth-first multiplication."""
    if not gens:
        raise ValueError("need at least one generator")
    e = identity(gens[0].n, gens[0].k, gens[0].s)
    seen = {e}
    frontier = [e]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def element_order(a: GroupElement) -> int:
    e = identity(a.n, a.k, a.s)
    x, m = a, 1
    while x != e:
        x, m = x * a, m + 1
    return m


@dataclass
class CheckReport:
    """Named boolean checks; truthy when all pass."""

    checks: dict[str, bool]
    details: dict[str, object] | None = None

    def __bool__(self):
        return all(self.checks.values())

    def lines(self) -> list[str]:
        return [f"{'PASS' if ok else 'FAIL'} {name}" for name, ok in self.checks.items()]


def check_axioms(n: int, k: int = 2, samples: int | None = None, seed: int = 0) -> CheckReport:
    """Closure, associativity, identity and inverses.

    Exhaustive over all triples unless ``samples`` is given.
    """
    els = elements(n, k)
    e = identity(n, k)
    table = {(a, b): a * b for a in els for b in els}
    universe = set(els)
    if samples is None:
        triples = itertools.product(els, repeat=3)
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(els), rng.choice(els), rng.choice(els)) for _ in range(samples))
    assoc = all(table[table[a, b], c] == table[a, table[b, c]] for a, b, c in triples)
    return CheckReport({
        "closure": all(x in universe for x in table.values()),
        "associativity": assoc,
        "identity": all(e * a == a == a * e for a in els),
        "inverses": all(a * inverse(a) == e == inverse(a) * a for a in els),
    })


def check_relations(n: int) -> CheckReport:
    """R^n = F^2 = 1 and R F R^-1 F = F R F R^-1 by direct multiplication.

    The same relations checked on the permutation representation are under
    ``details["permutation"]`` and count toward the overall verdict.
    """
    R, F = minimal_generators(n)
    e = identity(n)
    Ri = inverse(R)
    r, f = _perm_generators(n)
    ident = tuple(range(2 * n))
    ri = perm_inverse(r)
    perm = CheckReport({
        f"R^{n} = 1": perm_power(r, n) == ident,
        "F^2 = 1": perm_mul(f, f) == ident,
        "R F R^-1 F = F R F R^-1":
            perm_mul(perm_mul(perm_mul(r, f), ri), f) == perm_mul(perm_mul(perm_mul(f, r), f), ri),
    })
    return _RelationReport({
        f"R^{n} = 1": R ** n == e,
        "F^2 = 1": F * F == e,
        "R F R^-1 F = F R F R^-1": R * F * Ri * F == F * R * F * Ri,
    }, {"permutation": perm})


class _RelationReport(CheckReport):
    def __bool__(self):
        return all(self.checks.values()) and bool(self.details["permutation"])


# Permutations are tuples p with p[x] the image of point x (0-based); the
# product p*q applies p first, then q, matching the group product order.

def perm_mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(q[x] for x in p)


def perm_inverse(p: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def perm_power(p: tuple[int, ...], e: int) -> tuple[int, ...]:
    out = tuple(range(len(p)))
    for _ in range(e):
        out = perm_mul(out, p)
    return out


def perm_from_cycles(cycles, degree: int) -> tuple[int, ...]:
    """Build a permutation from 1-based cycles."""
    img = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def permutation_representation(n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The transposition (1 2) and the map (1 3 ... 2n-1)(2 4 ... 2n).

    Returned as 0-based image tuples on 2n points: ``(flip, shift)``.
    """
    flip = perm_from_cycles([[1, 2]] if n >= 1 else [], 2 * n)
    shift = perm_from_cycles([list(range(1, 2 * n, 2)), list(range(2, 2 * n + 1, 2))], 2 * n)
    return flip, shift


def _perm_generators(n: int):
    flip, shift = permutation_representation(n)
    return shift, flip


def perm_closure(gens: list[tuple[int, ...]]) -> set[tuple[int, ...]]:
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = perm_mul(x, g)
                if y not in seen:
                    seen.add(y)
                    new.append(y)
        frontier = new
    return seen


def order_statistics(els, mul, e) -> Counter:
    stats: Counter = Counter()
    for a in els:
        x, m = a, 1
        while x != e:
            x, m = mul(x, a), m + 1
        stats[m] += 1
    return stats


def a4_times_z2_order_statistics() -> Counter:
    """Order statistics of A4 x Z2 built from even permutations of 4 points."""
    def parity(p):
        return sum(1 for i in range(4) for j in range(i + 1, 4) if p[i] > p[j]) % 2

    a4 = [p for p in itertools.permutations(range(4)) if parity(p) == 0]
    els = [(p, z) for p in a4 for z in (0, 1)]
    e = (tuple(range(4)), 0)
    return order_statistics(els, lambda x, y: (perm_mul(x[0], y[0]), (x[1] + y[1]) % 2), e)


def d4_order_statistics() -> Counter:
    """Dihedral group of the square as permutations of its 4 corners."""
    r = (1, 2, 3, 0)
    m = (3, 2, 1, 0)
    els = perm_closure([r, m])
    return order_statistics(els, perm_mul, tuple(range(4)))


def center(els, mul) -> list:
    return [a for a in els if all(mul(a, b) == mul(b, a) for b in els)]


def identify_group(n: int) -> CheckReport:
    """Structural checks for the s = 1, k = 2 group of tape length n.

    The tape subgroup {(0, u)} must be normal and elementary abelian of
    order 2^n, the quotient by it cyclic of order n; for n = 2 and n = 3 the
    order statistics are compared with D4 and A4 x Z2.
    """
    els = elements(n)
    e = identity(n)
    tape = [a for a in els if a.i == 0]
    tape_set = set(tape)
    checks = {
        "tape subgroup order 2^n": len(tape) == 2 ** n,
        "tape subgroup closed": all(a * b in tape_set for a in tape for b in tape),
        "tape subgroup elementary abelian": all(a * a == e for a in tape)
        and all(a * b == b * a for a in tape for b in tape),
        "tape subgroup normal": all(g * a * inverse(g) in tape_set for g in els for a in tape),
        # the head offset is a homomorphism onto Z_n with kernel the tape subgroup
        "quotient cyclic of order n": all((a * b).i == (a.i + b.i) % n for a in els for b in els)
        and {a.i for a in els} == set(range(n))
        and len(els) // len(tape) == n,
    }
    stats = order_statistics(els, multiply, e)
    details: dict[str, object] = {"order": len(els), "order_statistics": dict(sorted(stats.items()))}
    if n == 2:
        z = center(els, multiply)
        details["center"] = len(z)
        checks["matches D4"] = stats == d4_order_statistics() and len(z) == 2 and stats[2] == 5
    if n == 3:
        checks["matches A4 x Z2"] = stats == a4_times_z2_order_statistics()
    return CheckReport(checks, details)


@dataclass
class CayleyGraph:
    elements: list[GroupElement]
    generators: list[GroupElement]
    edges: list[tuple[GroupElement, GroupElement, int]]

    def to_networkx(self, directed: bool = True, dedup: bool = False) -> nx.Graph:
        if not directed:
            g = nx.Graph()
        else:
            g = nx.DiGraph() if dedup else nx.MultiDiGraph()
        for a in self.elements:
            g.add_node(a.label(), q=a.q, i=a.i, u=a.u)
        for a, b, gi in self.edges:
            if isinstance(g, nx.MultiDiGraph) or not g.has_edge(a.label(), b.label()):
                g.add_edge(a.label(), b.label(), generator=gi)
        return g


def cayley_graph(n: int, generators: list[GroupElement] | None = None, k: int = 2,
                 s: int = 1, side: str = "left") -> CayleyGraph:
    """Cayley graph over all elements, one edge per element and generator.

    ``side="left"`` draws ``g -> gen*g``, so a generator acts on a
    configuration the way a head transition does; ``side="right"`` draws
    ``g -> g*gen``.  Only the left graph coincides with the rulial graph
    for the standard generators.
    """
    if generators is None:
        generators = standard_generators(n, k, s)
    if side == "left":
        prod = lambda a, g: g * a  # noqa: E731
    elif side == "right":
        prod = lambda a, g: a * g  # noqa: E731
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    els = elements(n, k, s)
    edges = [(a, prod(a, g), gi) for a in els for gi, g in enumerate(generators)]
    return CayleyGraph(els, list(generators), edges)


def element_to_config(a: GroupElement) -> Config:
    """Configuration with head at ``-i mod n``, state ``q`` and tape digits of ``u``.

    Under this bijection left multiplication by a standard generator is
    exactly one micro-rule step: the written cell is the head cell and the
    generator offset ``j`` moves the head by ``-j``.
    """
    return Config(a.q, (-a.i) % a.n, a.digits(), None)


def config_to_element(c: Config, k: int = 2, s: int = 1) -> GroupElement:
    n = len(c.cells)
    return GroupElement((-c.pos) % n, from_digits(c.cells, k), n, k, c.state, s)


def _rulial_multidigraph(spec: MachineSpec) -> nx.MultiDiGraph:
    g = build_rulial_graph(spec)
    m = nx.MultiDiGraph()
    m.add_nodes_from(g.nodes)
    m.add_edges_from((a, b) for a, b, _ in g.sorted_edges())
    return m


def _cayley_multidigraph(cg: CayleyGraph) -> nx.MultiDiGraph:
    m = nx.MultiDiGraph()
    m.add_nodes_from(cg.elements)
    m.add_edges_from((a, b) for a, b, _ in cg.edges)
    return m


def _invariant_mismatch(a: nx.Graph, b: nx.Graph) -> str | None:
    if a.number_of_nodes() != b.number_of_nodes():
        return f"node counts {a.number_of_nodes()} vs {b.number_of_nodes()}"
    if a.number_of_edges() != b.number_of_edges():
        return f"edge counts {a.number_of_edges()} vs {b.number_of_edges()}"
    if sorted(d for _, d in a.degree()) != sorted(d for _, d in b.degree()):
        return "degree sequences differ"
    return None


@dataclass
class IsomorphismResult:
    isomorphic: bool
    mapping: dict | None = None
    reason: str = ""

    def __bool__(self):
        return self.isomorphic


def isomorphic_to_rulial(n: int, k: int = 2, s: int = 1, side: str = "left") -> IsomorphismResult:
    """Search for a directed isomorphism between the standard-generator Cayley
    graph and the saturated cyclic-tape rulial multiway graph.

    The mapping sends group elements to configurations.  ``s > 1`` or
    ``k > 2`` exercise the exploratory generalization.
    """
    if n > 6:
        raise ValueError("isomorphism search is limited to n <= 6")
    cayley = _cayley_multidigraph(cayley_graph(n, k=k, s=s, side=side))
    rulial = _rulial_multidigraph(MachineSpec(s, k, tape="cyclic", n=n))
    reason = _invariant_mismatch(cayley, rulial)
    if reason:
        return IsomorphismResult(False, None, reason)
    matcher = nx.algorithms.isomorphism.MultiDiGraphMatcher(cayley, rulial)
    if matcher.is_isomorphic():
        return IsomorphismResult(True, dict(matcher.mapping))
    return IsomorphismResult(False, None, "no structure-preserving bijection exists")


def natural_isomorphism_holds(n: int, k: int = 2, s: int = 1) -> bool:
    """Whether :func:`element_to_config` carries the left Cayley graph edge
    multiset exactly onto the rulial graph's."""
    cg = cayley_graph(n, k=k, s=s)
    g = build_rulial_graph(MachineSpec(s, k, tape="cyclic", n=n))
    mapped = Counter((element_to_config(a), element_to_config(b)) for a, b, _ in cg.edges)
    return mapped == Counter((a, b) for a, b, _ in g.edges)


def cube_connected_cycles(n: int) -> nx.Graph:
    """CCC_n: the hypercube Q_n with each vertex replaced by an n-cycle.

    Vertex (x, c) joins (x, c +- 1 mod n) around its cycle and (x ^ 2^c, c)
    across dimension c.
    """
    g = nx.Graph()
    for x in range(2 ** n):
        for c in range(n):
            g.add_node((x, c))
            g.add_edge((x, c), (x, (c + 1) % n))
            g.add_edge((x, c), (x ^ (1 << c), c))
    return g


def hypercube(n: int) -> nx.Graph:
    return nx.hypercube_graph(n)


def minimal_cayley_undirected(n: int) -> nx.Graph:
    return cayley_graph(n, list(minimal_generators(n))).to_networkx(directed=False)


def is_cube_connected_cycles(graph: nx.Graph, n: int) -> bool:
    """Whether ``graph`` (taken as a simple undirected graph) is CCC_n."""
    simple = nx.Graph(graph.to_undirected() if graph.is_directed() else graph)
    simple.remove_edges_from(list(nx.selfloop_edges(simple)))
    ccc = cube_connected_cycles(n)
    if _invariant_mismatch(simple, ccc):
        return False
    return nx.is_isomorphic(simple, ccc)


def multiplication_table(n: int, k: int = 2) -> list[list[int]]:
    """Row a, column b holds the index of a*b, indices in (i, u) order."""
    els = elements(n, k)
    index = {a: x for x, a in enumerate(els)}
    return [[index[a * b] for b in els] for a in els]
