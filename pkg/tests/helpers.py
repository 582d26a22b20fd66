"""Test-side helpers that need to stay fast on long emissions."""

from __future__ import annotations

import random

from stairvpa import Configuration, Dvpa


def random_moves(seed: int, max_moves: int = 100) -> tuple[str, ...]:
    """A legal reducer input: never more returns than calls in any prefix."""
    rng = random.Random(f"moves|{seed}|{max_moves}")
    moves = []
    open_calls = 0
    for _ in range(rng.randrange(1, max_moves + 1)):
        if open_calls > 0 and rng.random() < 0.45:
            moves.append("r")
            open_calls -= 1
        else:
            moves.append("c")
            open_calls += 1
    return tuple(moves)


def accepting_step_counts(dvpa: Dvpa, start: Configuration, word, boundaries):
    """Accepting-state-on-step counts of the runs on word prefixes.

    For each prefix length in ``boundaries`` (sorted ascending), counts the
    positions that are future minima of that prefix's trace and carry an
    accepting state.  A monotone stack keeps this linear in |word|: the
    stack always holds exactly the current future-minimum positions, so a
    prefix count is just the number of accepting entries on the stack.
    Equivalent to run_word(...).f_on_step_count per prefix.
    """
    eng = dvpa._engine
    accepting = eng.accepting
    kinds = eng.kinds
    state = eng.state_id[start.state]
    height = len(start.stack)
    stack = [eng.stack_id[z] for z in reversed(start.stack)]
    # entries (height, is_accepting); count tracks accepting entries
    mono: list[tuple[int, bool]] = []
    count = 0
    out = []
    bounds = iter(boundaries)
    nxt = next(bounds, None)

    def push_position(h: int, acc: bool) -> None:
        nonlocal count
        while mono and mono[-1][0] > h:
            _, was = mono.pop()
            if was:
                count -= 1
        mono.append((h, acc))
        if acc:
            count += 1

    push_position(height, accepting[state])
    pos = 0
    while nxt == pos:
        out.append(count)
        nxt = next(bounds, None)
    for a in word:
        sym = eng.sym_id[a]
        k = kinds[sym]
        if k == 0:
            state, z = eng.call_tab[state][sym]
            stack.append(z)
        elif k == 1:
            state = eng.ret_tab[state][(stack[-1], sym)]
            stack.pop()
        else:
            state = eng.int_tab[state][sym]
        pos += 1
        push_position(len(stack), accepting[state])
        while nxt == pos:
            out.append(count)
            nxt = next(bounds, None)
    return out
