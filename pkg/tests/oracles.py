"""Independent slow reference implementations used as test oracles."""

from itertools import product

from rulial.machine import MicroRule, make_config


def naive_apply(state, pos, tape, m, moves=(-1, 1), n=None, cyclic=False):
    """Apply a micro-rule to (state, pos, {cell: color}) with no trimming tricks."""
    color = tape.get(pos, 0)
    if state != m.read_state or color != m.read_color:
        return None
    tape = dict(tape)
    tape[pos] = m.write_color
    new = pos + m.move
    if n is not None:
        if cyclic:
            new %= n
        elif not 0 <= new < n:
            return None
    return m.write_state, new, {p: c for p, c in tape.items() if c}


def naive_run(table, s, k, moves, t):
    """Run a rule table {(q, a): (q', a', d)} from the blank tape for t steps."""
    state, pos, tape = 0, 0, {}
    out = [make_config(state, pos, tape)]
    for _ in range(t):
        q2, a2, d = table[state, tape.get(pos, 0)]
        res = naive_apply(state, pos, tape, MicroRule(state, tape.get(pos, 0), q2, a2, d), moves)
        state, pos, tape = res
        out.append(make_config(state, pos, tape))
    return out


def all_window_configs(s, k, lo, hi, head_lo, head_hi):
    """Every unbounded-tape configuration whose tape lies in [lo, hi]."""
    cells = range(lo, hi + 1)
    for q in range(s):
        for pos in range(head_lo, head_hi + 1):
            for colors in product(range(k), repeat=len(cells)):
                yield make_config(q, pos, dict(zip(cells, colors)))


def naive_ca(rule, t, width=None):
    """Rule evolution on a wide plain list with a tracked uniform border."""
    width = width or 2 * t + 7
    row = [0] * width
    row[width // 2] = 1
    bg = 0
    rows = [(bg, list(row))]
    for _ in range(t):
        padded = [bg] + row + [bg]
        row = [(rule >> (padded[i - 1] * 4 + padded[i] * 2 + padded[i + 1])) & 1
               for i in range(1, width + 1)]
        bg = (rule >> (bg * 7)) & 1
        rows.append((bg, list(row)))
    return rows
