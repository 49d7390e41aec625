import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_window_configs, naive_apply, naive_run
from rulial.machine import (Config, MachineSpec, MicroRule, apply_micro_rule, det_evolve,
                            enumerate_micro_rules, id_from_rule, make_config, parse_config,
                            predecessors, rule_from_id, successor_indices, successors)

tapes = st.dictionaries(st.integers(-6, 6), st.integers(0, 2), max_size=6)


def test_micro_rule_count_and_order():
    spec = MachineSpec(2, 2)
    rules = enumerate_micro_rules(spec)
    assert len(rules) == 2 * 2 * 2 * 2 * 2
    assert rules == sorted(rules)
    for i, m in enumerate(rules):
        assert spec.micro_rule(i) == m
        assert spec.micro_rule_index(m) == i
    assert rules[0].label() == "0,0->0,0,-1"


def test_single_state_single_color_rules():
    spec = MachineSpec(1, 1)
    assert enumerate_micro_rules(spec) == [MicroRule(0, 0, 0, 0, -1), MicroRule(0, 0, 0, 0, 1)]


@pytest.mark.parametrize("s,k", [(1, 2), (2, 2), (2, 3)])
def test_out_degree_everywhere(s, k):
    spec = MachineSpec(s, k)
    for c in all_window_configs(s, k, -1, 1, -2, 2):
        assert len(successors(spec, c)) == 2 * s * k
        assert len(predecessors(spec, c)) == 2 * s * k


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 1), st.integers(-7, 7), tapes, st.integers(0, 2 * 2 * 3 * 2 * 3 - 1))
def test_apply_matches_naive_tape(state, pos, tape, idx):
    spec = MachineSpec(2, 3)
    c = make_config(state, pos, tape)
    m = spec.micro_rule(idx)
    got = apply_micro_rule(spec, c, m)
    ref = naive_apply(state, pos, tape, m)
    if ref is None:
        assert got is None
    else:
        assert got == make_config(*ref)
        spec.check_config(got)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2), st.integers(-5, 5), tapes)
def test_key_round_trip(state, pos, tape):
    c = make_config(state, pos, tape)
    assert parse_config(c.key()) == c


def test_finite_key_round_trip():
    c = Config(1, 2, (0, 1, 0, 1), None)
    assert c.key() == "s1:p2:n4:0101"
    assert parse_config(c.key()) == c
    with pytest.raises(ValueError):
        parse_config("s1:p2:n5:0101")
    with pytest.raises(ValueError):
        parse_config("garbage")


def test_blank_is_empty_window():
    assert MachineSpec(1, 2).blank() == Config(0, 0, (), 0)
    assert MachineSpec(1, 2, tape="cyclic", n=3).blank() == Config(0, 0, (0, 0, 0), None)


def test_writing_blank_at_edge_trims():
    spec = MachineSpec(1, 2)
    c = make_config(0, 0, {0: 1, 3: 1})
    out = apply_micro_rule(spec, c, MicroRule(0, 1, 0, 0, 1))
    assert out == Config(0, 1, (1,), 3)


def test_successor_indices_agree_with_successors():
    spec = MachineSpec(2, 2, tape="bounded", n=3)
    for c in [spec.blank(), Config(1, 2, (1, 0, 1), None)]:
        a = successors(spec, c)
        b = successor_indices(spec, c)
        assert [x for _, x in a] == [x for _, x in b]
        assert [spec.micro_rule_index(m) for m, _ in a] == [i for i, _ in b]


def test_predecessors_brute_force():
    # every configuration with tape in [-3, 3]; targets kept two cells inside
    spec = MachineSpec(1, 2)
    universe = list(all_window_configs(1, 2, -3, 3, -3, 3))
    inverse = {}
    for p in universe:
        for m, c in successors(spec, p):
            inverse.setdefault(c, set()).add((m, p))
    targets = [c for c in all_window_configs(1, 2, -2, 2, -2, 2)]
    for c in targets:
        assert set(predecessors(spec, c)) == inverse.get(c, set()), c.key()


def test_predecessors_invert_on_finite_tapes():
    for tape in ("cyclic", "bounded"):
        spec = MachineSpec(2, 2, tape=tape, n=3)
        c = Config(1, 0, (1, 0, 1), None)
        for m, p in predecessors(spec, c):
            assert apply_micro_rule(spec, p, m) == c


def test_bounded_tape_blocks_moves():
    spec = MachineSpec(1, 2, tape="bounded", n=3)
    assert len(successors(spec, spec.blank())) == 2  # only rightward moves
    assert apply_micro_rule(spec, spec.blank(), MicroRule(0, 0, 0, 1, -1)) is None


def test_cyclic_tape_wraps():
    spec = MachineSpec(1, 2, tape="cyclic", n=3)
    out = apply_micro_rule(spec, spec.blank(), MicroRule(0, 0, 0, 1, -1))
    assert out == Config(0, 2, (1, 0, 0), None)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        MachineSpec(0, 2)
    with pytest.raises(ValueError):
        MachineSpec(1, 2, tape="cyclic")
    with pytest.raises(ValueError):
        MachineSpec(1, 2, tape="spiral")
    with pytest.raises(ValueError):
        MachineSpec(1, 2, moves=(1, 1))
    spec = MachineSpec(1, 2)
    with pytest.raises(ValueError):
        apply_micro_rule(spec, spec.blank(), MicroRule(0, 0, 0, 5, 1))
    with pytest.raises(ValueError):
        spec.check_config(Config(0, 0, (0, 1), 0))  # untrimmed
    with pytest.raises(ValueError):
        rule_from_id(spec, spec.rule_count)


def test_moves_are_sorted_and_custom():
    spec = MachineSpec(1, 2, moves=(2, -1, 0))
    assert spec.moves == (-1, 0, 2)
    assert len(successors(spec, spec.blank())) == 6


def test_rule_ids_round_trip():
    spec = MachineSpec(2, 2)
    assert spec.rule_count == 4096
    for rid in range(0, 4096, 37):
        assert id_from_rule(rule_from_id(spec, rid)) == rid
    assert rule_from_id(spec, 0).table == ((0, 0, -1),) * 4


def test_det_evolve_matches_naive_simulation():
    rng = random.Random(3)
    spec = MachineSpec(2, 3)
    for _ in range(40):
        rule = rule_from_id(spec, rng.randrange(spec.rule_count))
        table = {(q, a): rule.table[spec.case_index(q, a)] for q in range(2) for a in range(3)}
        assert list(det_evolve(rule, spec.blank(), 12)) == naive_run(table, 2, 3, spec.moves, 12)


def test_det_evolve_halts_on_bounded_tape():
    spec = MachineSpec(1, 2, tape="bounded", n=3)
    rule = rule_from_id(spec, 0)  # always move left
    trace = det_evolve(rule, spec.blank(), 5)
    assert trace.halted_at == 1
    assert len(trace) == 1
    with pytest.raises(ValueError):
        det_evolve(rule, spec.blank(), -1)
