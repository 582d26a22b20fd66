"""Exact acceptance of ultimately periodic words u·v^ω.

The engine simulates the run symbol by symbol and detects, at period
boundaries, a repeat of a finite abstraction of the configuration: the
control state, the top-W window of the stack with W = max(1, |v|), and a
flag telling whether the window reaches the stack bottom.  Within one
period the run descends at most |v| below the boundary height and the
stack below the window is never read, so the abstraction determines the
entire future once the period's net height change is non-negative.  A
period that drains the stack (negative net) always kills the run.

Once a repeated boundary pair (b1, b2) is found, the block of positions
between the two boundaries describes the whole tail of the run:

* plain Buchi/parity kinds classify by the maximal priority among the
  states of the block (all of them recur forever);
* stair kinds classify by the maximal priority among the block positions
  that stay steps forever: position i qualifies when its height is a
  future minimum inside the block and does not exceed mc + net*(b2-b1)
  for ascending periods (mc for level ones), where mc is the minimal
  height of the block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (CALL, RETURN, Dvpa, PartitionedAlphabet, ValidationError, VpaError)

REASON_CYCLE = "cycle"
REASON_DEAD = "dead-run"


@dataclass(frozen=True)
class LassoWord:
    """An ultimately periodic word, given as finite prefix and non-empty period."""

    prefix: tuple[str, ...]
    period: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValidationError("lasso period must be non-empty")

    def __str__(self) -> str:
        return format_lasso(self)


def parse_lasso(text: str) -> LassoWord:
    """Parse the ``u ; v`` syntax; u may be empty, symbols are whitespace-separated."""
    if text.count(";") != 1:
        raise ValidationError(f"lasso {text!r} must contain exactly one ';'")
    u_part, v_part = text.split(";")
    return LassoWord(tuple(u_part.split()), tuple(v_part.split()))


def format_lasso(lasso: LassoWord) -> str:
    return f"{' '.join(lasso.prefix)} ; {' '.join(lasso.period)}".strip()


@dataclass(frozen=True)
class LassoProfile:
    """Visible height data of a lasso: period net, maximal in-period descent,
    and the length of the shortest underflowing prefix of u·v·v, if any."""

    net: int
    max_dip: int
    illegal_prefix: Optional[int]


def profile(alphabet: PartitionedAlphabet, lasso: LassoWord) -> LassoProfile:
    """Compute the height profile of a lasso.

    Scanning u·v·v suffices for the underflow check: if no such prefix is
    negative and the period net is non-negative, no prefix of u·v^ω is.
    """
    deltas = {a: (1 if alphabet.kind_of(a) == CALL else -1 if alphabet.kind_of(a) == RETURN else 0)
              for a in set(lasso.prefix) | set(lasso.period)}
    net = sum(deltas[a] for a in lasso.period)
    peak = dip = level = 0
    for a in lasso.period:
        level += deltas[a]
        peak = max(peak, level)
        dip = max(dip, peak - level)
    illegal = None
    surplus = 0
    for i, a in enumerate(lasso.prefix + lasso.period + lasso.period):
        surplus += deltas[a]
        if surplus < 0:
            illegal = i + 1
            break
    return LassoProfile(net=net, max_dip=dip, illegal_prefix=illegal)


@dataclass(frozen=True)
class LassoVerdict:
    """Outcome of evaluating one lasso.

    ``recurring_step_priorities`` holds the priorities on forever-recurring
    steps for stair kinds, and the recurring priorities for plain kinds.
    ``recurring_step_positions`` (diagnostic) gives the qualifying block
    positions as absolute configuration indices, for stair kinds only.
    """

    accepted: bool
    reason: str
    death_pos: Optional[int] = None
    boundary_pair: Optional[tuple[int, int]] = None
    recurring_step_priorities: frozenset[int] = frozenset()
    recurring_step_positions: tuple[int, ...] = ()


def accepts(dvpa: Dvpa, lasso: LassoWord) -> LassoVerdict:
    """Evaluate ``lasso`` on ``dvpa`` under its acceptance condition."""
    eng = dvpa._engine
    u = [eng.sym_id[a] if a in eng.sym_id else _unknown(dvpa, a) for a in lasso.prefix]
    v = [eng.sym_id[a] if a in eng.sym_id else _unknown(dvpa, a) for a in lasso.period]
    prof = profile(dvpa.alphabet, lasso)

    kinds = eng.kinds
    call_tab, int_tab, ret_tab = eng.call_tab, eng.int_tab, eng.ret_tab
    state = eng.init
    stack: list[int] = []
    states = [state]
    heights = [0]

    def step(sym: int) -> bool:
        nonlocal state
        k = kinds[sym]
        if k == CALL:
            ent = call_tab[state][sym]
            if ent is None:
                return False
            state, z = ent
            stack.append(z)
        elif k == RETURN:
            if not stack:
                return False
            tgt = ret_tab[state].get((stack[-1], sym))
            if tgt is None:
                return False
            stack.pop()
            state = tgt
        else:
            tgt = int_tab[state][sym]
            if tgt is None:
                return False
            state = tgt
        states.append(state)
        heights.append(len(stack))
        return True

    for i, sym in enumerate(u):
        if not step(sym):
            return LassoVerdict(False, REASON_DEAD, death_pos=i)

    if prof.net < 0:
        # Each period lowers the boundary height, so the run must die.
        limit = len(u) + len(v) * ((len(stack) + len(v)) // -prof.net + 2)
        pos = len(u)
        while pos < limit:
            if not step(v[(pos - len(u)) % len(v)]):
                return LassoVerdict(False, REASON_DEAD, death_pos=pos)
            pos += 1
        raise VpaError("internal error: draining lasso failed to die within its bound")

    window = max(1, len(v))
    guard = eng.n_states * (len(eng.stack_names) + 1) ** window * 2 + 1
    seen: dict[tuple, int] = {}
    boundary = 0
    while True:
        key = (state, tuple(stack[-window:]), len(stack) <= window)
        if key in seen:
            b1, b2 = seen[key], boundary
            break
        seen[key] = boundary
        if boundary > guard:
            raise VpaError("internal error: boundary abstraction failed to repeat "
                           "within the pigeonhole bound")
        base = len(u) + boundary * len(v)
        for j, sym in enumerate(v):
            if not step(sym):
                return LassoVerdict(False, REASON_DEAD, death_pos=base + j)
        boundary += 1

    p1 = len(u) + b1 * len(v)
    p2 = len(u) + b2 * len(v)
    block_states = states[p1:p2]
    prio = eng.prio
    if not dvpa.acceptance.is_stair:
        prios = frozenset(prio[s] for s in block_states)
        return LassoVerdict(max(prios) % 2 == 0, REASON_CYCLE, boundary_pair=(b1, b2),
                            recurring_step_priorities=prios)

    block_heights = heights[p1:p2]
    mc = min(block_heights)
    allowance = prof.net * (b2 - b1) if prof.net > 0 else 0
    limit = mc + allowance
    positions = []
    suffix_min = block_heights[-1]
    for off in range(len(block_heights) - 1, -1, -1):
        h = block_heights[off]
        suffix_min = min(suffix_min, h)
        if h <= suffix_min and h <= limit:
            positions.append(p1 + off)
    positions.reverse()
    prios = frozenset(prio[states[i]] for i in positions)
    if not prios:
        raise VpaError("internal error: a repeating block always contains a recurring step")
    return LassoVerdict(max(prios) % 2 == 0, REASON_CYCLE, boundary_pair=(b1, b2),
                        recurring_step_priorities=prios,
                        recurring_step_positions=tuple(positions))


def _unknown(dvpa: Dvpa, symbol: str):
    dvpa.alphabet.kind_of(symbol)  # raises UnknownSymbolError
    raise VpaError(f"symbol {symbol!r} interned inconsistently")  # pragma: no cover
