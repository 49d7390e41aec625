from collections import Counter

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.combinatorics import Permutation, PermutationGroup
from sympy.combinatorics.named_groups import AlternatingGroup, CyclicGroup, DihedralGroup
from sympy.combinatorics.group_constructs import DirectProduct

from rulial import group as grp
from rulial.machine import MachineSpec
from rulial.multiway import build_rulial_graph


def sympy_order_stats(G):
    return Counter(g.order() for g in G.elements)


def elements_st(n):
    return st.builds(lambda i, u: grp.GroupElement(i, u, n),
                     st.integers(0, n - 1), st.integers(0, 2 ** n - 1))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_product_law(data):
    n = data.draw(st.integers(1, 6))
    a = data.draw(elements_st(n))
    b = data.draw(elements_st(n))
    c = a * b
    assert c.i == (a.i + b.i) % n
    assert c.u == grp.rotate_right(a.u, b.i, n) ^ b.u


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_associativity_random_n5(data):
    a, b, c = (data.draw(elements_st(5)) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_rotation_moves_digits():
    # digit at cell c moves to cell c - j
    u = grp.from_digits((1, 0, 0, 0), 2)
    assert grp.to_digits(grp.rotate_right(u, 1, 4), 4, 2) == (0, 0, 0, 1)
    assert grp.rotate_right(u, 4, 4) == u


@pytest.mark.parametrize("n", [2, 3])
def test_axioms_exhaustive(n):
    assert grp.check_axioms(n)


def test_axioms_sampled():
    rep = grp.check_axioms(4, samples=5000, seed=7)
    assert rep and set(rep.checks) == {"closure", "associativity", "identity", "inverses"}


@pytest.mark.parametrize("n", range(2, 7))
def test_order(n):
    assert len(grp.closure(list(grp.minimal_generators(n)))) == n * 2 ** n
    assert len(grp.elements(n)) == n * 2 ** n


@pytest.mark.parametrize("n", range(2, 9))
def test_relations(n):
    rep = grp.check_relations(n)
    assert rep
    assert len(rep.lines()) == 3 and all(x.startswith("PASS") for x in rep.lines())
    assert rep.details["permutation"]


def test_relations_fail_for_a_wrong_word():
    R, F = grp.minimal_generators(4)
    assert R * F != F * R


@pytest.mark.parametrize("n,order", [(2, 8), (3, 24), (4, 64)])
def test_permutation_closure_against_sympy(n, order):
    r, f = grp.permutation_representation(n)
    assert len(grp.perm_closure([r, f])) == order
    assert PermutationGroup([Permutation(list(r)), Permutation(list(f))]).order() == order


def test_permutation_product_order():
    p = grp.perm_from_cycles([(0, 1)], 3)
    q = grp.perm_from_cycles([(1, 2)], 3)
    # p first, then q: 0 -> 1 -> 2
    assert grp.perm_mul(p, q)[0] == 2
    assert grp.perm_mul(p, grp.perm_inverse(p)) == (0, 1, 2)


def test_d4_oracle():
    assert grp.d4_order_statistics() == sympy_order_stats(DihedralGroup(4))
    rep = grp.identify_group(2)
    assert rep and rep.details["center"] == 2


def test_a4_times_z2_oracle():
    oracle = sympy_order_stats(DirectProduct(AlternatingGroup(4), CyclicGroup(2)))
    assert grp.a4_times_z2_order_statistics() == oracle
    ours = grp.order_statistics(grp.elements(3), grp.multiply, grp.identity(3))
    assert ours == oracle
    assert grp.identify_group(3)


def test_element_order_and_inverse():
    R, F = grp.minimal_generators(5)
    assert grp.element_order(R) == 5
    assert grp.element_order(F) == 2
    for a in grp.elements(3):
        assert a * grp.inverse(a) == grp.identity(3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_left_cayley_isomorphic_to_rulial(n):
    res = grp.isomorphic_to_rulial(n)
    assert res and len(res.mapping) == n * 2 ** n
    assert grp.natural_isomorphism_holds(n)


def test_natural_bijection_generalizes():
    assert grp.natural_isomorphism_holds(3, k=2, s=2)
    assert grp.natural_isomorphism_holds(2, k=3, s=1)
    for a in grp.elements(3):
        assert grp.config_to_element(grp.element_to_config(a)) == a


def test_right_cayley_differs():
    res = grp.isomorphic_to_rulial(3, side="right")
    assert not res and res.reason


def test_cayley_graph_shape():
    cg = grp.cayley_graph(3)
    g = cg.to_networkx()
    assert g.number_of_nodes() == 24
    assert g.number_of_edges() == 24 * 4
    assert all(d == 4 for _, d in g.out_degree())
    with pytest.raises(ValueError):
        grp.cayley_graph(3, side="middle")


@pytest.mark.parametrize("n", [3, 4])
def test_minimal_generators_give_ccc(n):
    g = grp.minimal_cayley_undirected(n)
    assert grp.is_cube_connected_cycles(g, n)
    assert nx.is_regular(g) and g.number_of_nodes() == n * 2 ** n


def test_ccc_rejects_hypercube():
    assert not grp.is_cube_connected_cycles(grp.hypercube(3), 3)
    ccc = grp.cube_connected_cycles(3)
    assert ccc.number_of_nodes() == 24 and ccc.number_of_edges() == 36


def test_cyclic_graph_matches_group_size():
    g = build_rulial_graph(MachineSpec(1, 2, tape="cyclic", n=4))
    assert len(g) == len(grp.elements(4))


def test_multiplication_table_is_latin_square():
    t = grp.multiplication_table(3)
    n = len(t)
    assert all(sorted(row) == list(range(n)) for row in t)
    assert all(sorted(col) == list(range(n)) for col in zip(*t))
