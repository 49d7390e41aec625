"""Turing machine configurations, micro-rules and deterministic rules.

A configuration is a head state, an absolute head position and a tape.  The
unbounded tape is stored as a window ``cells`` starting at ``left`` and trimmed
so that neither end holds the blank color 0.  Finite tapes (cyclic or bounded)
store all ``n`` cells and use ``left=None``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import NamedTuple

BLANK = 0
TAPE_MODELS = ("unbounded", "cyclic", "bounded")

_DIGITS = "0123456789abcdefghijklmnopqrstuvwxyz"


class Config(NamedTuple):
    state: int
    pos: int
    cells: tuple[int, ...]
    left: int | None = 0

    @property
    def finite(self) -> bool:
        return self.left is None

    def key(self) -> str:
        """Canonical text form, used as the node key in every export."""
        body = "".join(_DIGITS[c] for c in self.cells)
        if self.left is None:
            return f"s{self.state}:p{self.pos}:n{len(self.cells)}:{body}"
        return f"s{self.state}:p{self.pos}:L{self.left}:{body}"

    def color_at(self, pos: int) -> int:
        if self.left is None:
            return self.cells[pos % len(self.cells)]
        i = pos - self.left
        if 0 <= i < len(self.cells):
            return self.cells[i]
        return BLANK

    def head_color(self) -> int:
        return self.color_at(self.pos)

    def tape_dict(self) -> dict[int, int]:
        """Non-blank cells as ``{position: color}``."""
        if self.left is None:
            return {i: c for i, c in enumerate(self.cells) if c != BLANK}
        return {self.left + i: c for i, c in enumerate(self.cells) if c != BLANK}


_KEY_RE = re.compile(r"^s(\d+):p(-?\d+):([Ln])(-?\d+):([0-9a-z]*)$")


def parse_config(key: str) -> Config:
    m = _KEY_RE.match(key)
    if m is None:
        raise ValueError(f"not a configuration key: {key!r}")
    state, pos, kind, num, body = m.groups()
    cells = tuple(_DIGITS.index(ch) for ch in body)
    if kind == "n":
        if len(cells) != int(num):
            raise ValueError(f"tape length mismatch in {key!r}")
        return Config(int(state), int(pos), cells, None)
    return Config(int(state), int(pos), cells, int(num))


def _trim(cells: tuple[int, ...], left: int) -> tuple[tuple[int, ...], int]:
    lo, hi = 0, len(cells)
    while lo < hi and cells[lo] == BLANK:
        lo += 1
    while hi > lo and cells[hi - 1] == BLANK:
        hi -= 1
    if lo == hi:
        return (), 0
    return cells[lo:hi], left + lo


def make_config(state: int, pos: int, tape: dict[int, int] | None = None) -> Config:
    """Build a canonical unbounded-tape configuration from a sparse tape."""
    tape = {p: c for p, c in (tape or {}).items() if c != BLANK}
    if not tape:
        return Config(state, pos, (), 0)
    lo, hi = min(tape), max(tape)
    cells = tuple(tape.get(p, BLANK) for p in range(lo, hi + 1))
    return Config(state, pos, cells, lo)


def _write(c: Config, color: int) -> tuple[tuple[int, ...], int | None]:
    """Return (cells, left) after writing ``color`` under the head."""
    cells, left = c.cells, c.left
    if left is None:
        p = c.pos
        if cells[p] == color:
            return cells, None
        return cells[:p] + (color,) + cells[p + 1:], None
    i = c.pos - left
    n = len(cells)
    if 0 <= i < n:
        if cells[i] == color:
            return cells, left
        new = cells[:i] + (color,) + cells[i + 1:]
        if color == BLANK and (i == 0 or i == n - 1):
            return _trim(new, left)
        return new, left
    if color == BLANK:
        return cells, left
    if n == 0:
        return (color,), c.pos
    if i < 0:
        return (color,) + (BLANK,) * (-i - 1) + cells, c.pos
    return cells + (BLANK,) * (i - n) + (color,), left


class MicroRule(NamedTuple):
    read_state: int
    read_color: int
    write_state: int
    write_color: int
    move: int

    def label(self) -> str:
        return (f"{self.read_state},{self.read_color}->"
                f"{self.write_state},{self.write_color},{self.move:+d}")


@dataclass(frozen=True)
class MachineSpec:
    """Number of head states ``s``, colors ``k``, allowed moves and tape model."""

    s: int
    k: int
    moves: tuple[int, ...] = (-1, 1)
    tape: str = "unbounded"
    n: int | None = None

    def __post_init__(self):
        if self.s < 1 or self.k < 1:
            raise ValueError("s and k must be positive")
        if self.k > len(_DIGITS):
            raise ValueError(f"at most {len(_DIGITS)} colors are supported")
        moves = tuple(self.moves)
        if not moves or len(set(moves)) != len(moves):
            raise ValueError("moves must be nonempty and duplicate-free")
        object.__setattr__(self, "moves", tuple(sorted(moves)))
        if self.tape not in TAPE_MODELS:
            raise ValueError(f"unknown tape model {self.tape!r}")
        if self.tape == "unbounded":
            if self.n is not None:
                raise ValueError("unbounded tape takes no length")
        elif self.n is None or self.n < 1:
            raise ValueError(f"{self.tape} tape needs n >= 1")

    @property
    def finite(self) -> bool:
        return self.tape != "unbounded"

    @property
    def n_cases(self) -> int:
        return self.s * self.k

    @property
    def n_outcomes(self) -> int:
        return len(self.moves) * self.s * self.k

    @property
    def rule_count(self) -> int:
        return self.n_outcomes ** self.n_cases

    @cached_property
    def outcomes(self) -> tuple[tuple[int, int, int], ...]:
        """All (write_state, write_color, move) outcomes in lexicographic order."""
        return tuple(product(range(self.s), range(self.k), self.moves))

    def blank(self) -> Config:
        if self.finite:
            return Config(0, 0, (BLANK,) * self.n, None)
        return Config(0, 0, (), 0)

    def case_index(self, state: int, color: int) -> int:
        return state * self.k + color

    def micro_rule_index(self, m: MicroRule) -> int:
        case = self.case_index(m.read_state, m.read_color)
        out = (m.write_state * self.k + m.write_color) * len(self.moves)
        return case * self.n_outcomes + out + self.moves.index(m.move)

    def micro_rule(self, index: int) -> MicroRule:
        case, out = divmod(index, self.n_outcomes)
        q, a = divmod(case, self.k)
        return MicroRule(q, a, *self.outcomes[out])

    def check_config(self, c: Config) -> None:
        if not 0 <= c.state < self.s:
            raise ValueError(f"state {c.state} out of range")
        if any(not 0 <= x < self.k for x in c.cells):
            raise ValueError("color out of range")
        if self.finite:
            if c.left is not None or len(c.cells) != self.n:
                raise ValueError(f"expected a finite tape of length {self.n}")
            if not 0 <= c.pos < self.n:
                raise ValueError(f"head position {c.pos} outside tape")
        else:
            if c.left is None:
                raise ValueError("expected an unbounded-tape configuration")
            if c.cells and (c.cells[0] == BLANK or c.cells[-1] == BLANK):
                raise ValueError("unbounded tape is not trimmed")
            if not c.cells and c.left != 0:
                raise ValueError("empty tape must have left index 0")


def enumerate_micro_rules(spec: MachineSpec) -> list[MicroRule]:
    return [MicroRule(q, a, *out)
            for q, a in product(range(spec.s), range(spec.k))
            for out in spec.outcomes]


def _moved(spec: MachineSpec, pos: int, move: int) -> int | None:
    p = pos + move
    if spec.tape == "cyclic":
        return p % spec.n
    if spec.tape == "bounded" and not 0 <= p < spec.n:
        return None
    return p


def apply_micro_rule(spec: MachineSpec, c: Config, m: MicroRule) -> Config | None:
    """Apply ``m`` to ``c``; ``None`` when the case does not match or the head
    would leave a bounded tape."""
    if not (0 <= m.read_state < spec.s and 0 <= m.write_state < spec.s
            and 0 <= m.read_color < spec.k and 0 <= m.write_color < spec.k
            and m.move in spec.moves):
        raise ValueError(f"micro-rule {m} is not valid for {spec}")
    if c.state != m.read_state or c.head_color() != m.read_color:
        return None
    pos = _moved(spec, c.pos, m.move)
    if pos is None:
        return None
    cells, left = _write(c, m.write_color)
    return Config(m.write_state, pos, cells, left)


def successors(spec: MachineSpec, c: Config) -> list[tuple[MicroRule, Config]]:
    """Every micro-rule application from ``c``, in micro-rule order."""
    q, a = c.state, c.head_color()
    writes = [_write(c, w) for w in range(spec.k)]
    targets = [_moved(spec, c.pos, d) for d in spec.moves]
    out = []
    for ws in range(spec.s):
        for wc in range(spec.k):
            cells, left = writes[wc]
            for d, p in zip(spec.moves, targets):
                if p is not None:
                    out.append((MicroRule(q, a, ws, wc, d), Config(ws, p, cells, left)))
    return out


def successor_indices(spec: MachineSpec, c: Config) -> list[tuple[int, Config]]:
    """Like :func:`successors` but labels each target by micro-rule index."""
    base = spec.case_index(c.state, c.head_color()) * spec.n_outcomes
    writes = [_write(c, w) for w in range(spec.k)]
    targets = [_moved(spec, c.pos, d) for d in spec.moves]
    out = []
    idx = base
    for ws in range(spec.s):
        for wc in range(spec.k):
            cells, left = writes[wc]
            for p in targets:
                if p is not None:
                    out.append((idx, Config(ws, p, cells, left)))
                idx += 1
    return out


def predecessors(spec: MachineSpec, c: Config) -> list[tuple[MicroRule, Config]]:
    """All ``(m, prior)`` with ``apply_micro_rule(spec, prior, m) == c``.

    For each move ``d`` the head came from ``pos - d``; the written color is
    whatever now sits there, and any state and color may have been read.
    """
    out = []
    for d in spec.moves:
        p = c.pos - d
        if spec.tape == "cyclic":
            p %= spec.n
        elif spec.tape == "bounded" and not 0 <= p < spec.n:
            continue
        written = c.color_at(p)
        at_p = c._replace(pos=p)
        rewrites = [_write(at_p, a) for a in range(spec.k)]
        for q in range(spec.s):
            for a in range(spec.k):
                cells, left = rewrites[a]
                out.append((MicroRule(q, a, c.state, written, d), Config(q, p, cells, left)))
    out.sort(key=lambda pair: spec.micro_rule_index(pair[0]))
    return out


def neighbors(spec: MachineSpec, c: Config) -> list[Config]:
    """Successor and predecessor configurations (undirected adjacency)."""
    return [t for _, t in successors(spec, c)] + [t for _, t in predecessors(spec, c)]


@dataclass(frozen=True)
class DeterministicRule:
    """A total rule table: case index ``state*k + color`` -> outcome."""

    spec: MachineSpec
    table: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.table) != self.spec.n_cases:
            raise ValueError("rule table must cover every case exactly once")
        for out in self.table:
            if out not in self.spec.outcomes:
                raise ValueError(f"invalid outcome {out}")

    @property
    def rule_id(self) -> int:
        return id_from_rule(self)

    def micro_rule(self, state: int, color: int) -> MicroRule:
        return MicroRule(state, color, *self.table[self.spec.case_index(state, color)])

    def micro_rules(self) -> list[MicroRule]:
        return [self.micro_rule(q, a) for q in range(self.spec.s) for a in range(self.spec.k)]


def rule_from_id(spec: MachineSpec, rule_id: int) -> DeterministicRule:
    """Decode ``rule_id`` written in base ``|moves|*s*k`` with ``s*k`` digits.

    Digit ``j`` (least significant first) is the outcome index for case ``j``,
    where cases and outcomes are both taken in lexicographic order.
    """
    if not 0 <= rule_id < spec.rule_count:
        raise ValueError(f"rule id {rule_id} outside [0, {spec.rule_count})")
    table = []
    for _ in range(spec.n_cases):
        rule_id, digit = divmod(rule_id, spec.n_outcomes)
        table.append(spec.outcomes[digit])
    return DeterministicRule(spec, tuple(table))


def id_from_rule(rule: DeterministicRule) -> int:
    spec = rule.spec
    index = {out: i for i, out in enumerate(spec.outcomes)}
    rid = 0
    for out in reversed(rule.table):
        rid = rid * spec.n_outcomes + index[out]
    return rid


class Trace(list):
    """Configurations visited by a deterministic run.

    ``halted_at`` is the step at which the head would have left a bounded
    tape, or ``None`` if the run completed.
    """

    halted_at: int | None = None


def det_step(rule: DeterministicRule, c: Config) -> Config | None:
    return apply_micro_rule(rule.spec, c, rule.micro_rule(c.state, c.head_color()))


def det_evolve(rule: DeterministicRule, init: Config, t: int) -> Trace:
    if t < 0:
        raise ValueError("t must be >= 0")
    trace = Trace([init])
    c = init
    for step in range(1, t + 1):
        c = det_step(rule, c)
        if c is None:
            trace.halted_at = step
            break
        trace.append(c)
    return trace
