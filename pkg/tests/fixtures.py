"""Fixture automata shared across the test suite."""

from __future__ import annotations

import random

from stairvpa import AcceptanceSpec, Dvpa, PartitionedAlphabet


def stair_buchi(alpha, states, init, stack, calls, rets, ints, final) -> Dvpa:
    return Dvpa(PartitionedAlphabet(*alpha), states, init, stack, calls, rets, ints,
                AcceptanceSpec("stair-buchi", final_states=frozenset(final)))


def hidden_pattern() -> Dvpa:
    """Three states over one call and two returns; contains a forbidden
    pattern although neither non-final state can loop back to itself at
    the bottom of the stack."""
    return stair_buchi(
        (("c",), ("r1", "r2"), ()),
        ("q", "qp", "qpp"), "q", ("Z", "Zp"),
        {("q", "c"): ("qpp", "Z"), ("qpp", "c"): ("q", "Z"), ("qp", "c"): ("q", "Zp")},
        {("qpp", "Z", "r1"): "qpp", ("qpp", "Zp", "r1"): "qpp", ("qpp", "Z", "r2"): "qp"},
        {},
        {"qpp"})


def hidden_pattern_witness():
    """A known-good forbidden pattern of :func:`hidden_pattern`."""
    from stairvpa import PatternWitness
    return PatternWitness(
        q="q", q_prime="qp", q_second="qpp",
        u=("c", "c"), v=("c", "r2"), w=("c",), x=("c", "r1"), y=("r1",),
        z=("r1", "r2"), sigma=("Z", "Z"), sigma_prime=("Zp",))


def strictly_unbounded() -> Dvpa:
    """Accepts exactly the words with infinitely many unmatched calls:
    every call enters the accepting state, every return leaves it."""
    return stair_buchi(
        (("c",), ("r",), ()),
        ("rej", "acc"), "rej", ("Z",),
        {("rej", "c"): ("acc", "Z"), ("acc", "c"): ("acc", "Z")},
        {("acc", "Z", "r"): "rej", ("rej", "Z", "r"): "rej"},
        {},
        {"acc"})


def simple_pattern_automaton() -> Dvpa:
    """Realizes the degenerate pattern where all three pattern states
    coincide and the four middle segments are empty."""
    return stair_buchi(
        (("c",), ("r",), ("i",)),
        ("n", "f"), "n", ("Z",),
        {("n", "c"): ("f", "Z")},
        {("n", "Z", "r"): "n"},
        {("f", "i"): "n"},
        {"f"})


def two_branch(kind: str, q1_priority: int = 2) -> Dvpa:
    """Five states; the junction q1 sits on both branches but any single
    run only ever uses one of them, keyed by the first pushed symbol."""
    alpha = PartitionedAlphabet(("c1", "c2"), ("r1", "r2"), ("i1", "i2"))
    return Dvpa(
        alpha, ("q0", "q1", "q2", "q3", "q4"), "q0", ("Z1", "Z2"),
        {("q0", "c1"): ("q1", "Z1"), ("q0", "c2"): ("q1", "Z2"),
         ("q2", "c1"): ("q1", "Z1"), ("q4", "c2"): ("q1", "Z2")},
        {("q1", "Z1", "r1"): "q2", ("q1", "Z2", "r2"): "q4"},
        {("q1", "i1"): "q1", ("q2", "i1"): "q3", ("q3", "i2"): "q3", ("q3", "i1"): "q2"},
        AcceptanceSpec(kind, priorities={"q0": 0, "q1": q1_priority, "q2": 1,
                                         "q3": 0, "q4": 3}))


def two_branch_split() -> Dvpa:
    """The same language as ``two_branch("parity")`` with the junction
    split per branch, which frees up priority 3."""
    alpha = PartitionedAlphabet(("c1", "c2"), ("r1", "r2"), ("i1", "i2"))
    return Dvpa(
        alpha, ("q0", "q1", "q1b", "q2", "q3", "q4"), "q0", ("Z1", "Z2"),
        {("q0", "c1"): ("q1", "Z1"), ("q0", "c2"): ("q1b", "Z2"),
         ("q2", "c1"): ("q1", "Z1"), ("q4", "c2"): ("q1b", "Z2")},
        {("q1", "Z1", "r1"): "q2", ("q1b", "Z2", "r2"): "q4"},
        {("q1", "i1"): "q1", ("q1b", "i1"): "q1b",
         ("q2", "i1"): "q3", ("q3", "i2"): "q3", ("q3", "i1"): "q2"},
        AcceptanceSpec("parity", priorities={"q0": 0, "q1": 2, "q1b": 0, "q2": 1,
                                             "q3": 0, "q4": 1}))


def always_accepting_loop() -> Dvpa:
    return stair_buchi(((), (), ("i",)), ("a",), "a", (), {}, {}, {("a", "i"): "a"}, {"a"})


def never_accepting_loop() -> Dvpa:
    return stair_buchi(((), (), ("i",)), ("x",), "x", (), {}, {}, {("x", "i"): "x"}, set())


def internal_alternator() -> Dvpa:
    return stair_buchi(((), (), ("i",)), ("a", "b"), "a", (), {}, {},
                       {("a", "i"): "b", ("b", "i"): "a"}, {"b"})


def internal_choice() -> Dvpa:
    """Internal-only automaton whose self-loops force two priorities."""
    return stair_buchi(((), (), ("x", "y")), ("a", "b"), "a", (), {}, {},
                       {("a", "x"): "a", ("a", "y"): "b",
                        ("b", "x"): "a", ("b", "y"): "b"},
                       {"b"})


def block_counter() -> Dvpa:
    """Accepting exactly at matched depth: the bottom-most pushed symbol is
    marked, and popping it is the only way back into the accepting state."""
    return stair_buchi(
        (("c",), ("r",), ()),
        ("qf", "q1"), "qf", ("B", "Z"),
        {("qf", "c"): ("q1", "B"), ("q1", "c"): ("q1", "Z")},
        {("q1", "Z", "r"): "q1", ("q1", "B", "r"): "qf"},
        {},
        {"qf"})


def block_counter_with_internals() -> Dvpa:
    return stair_buchi(
        (("c",), ("r",), ("i",)),
        ("qf", "w"), "qf", ("B", "Z"),
        {("qf", "c"): ("w", "B"), ("w", "c"): ("w", "Z")},
        {("w", "Z", "r"): "w", ("w", "B", "r"): "qf"},
        {("w", "i"): "w", ("qf", "i"): "qf"},
        {"qf"})


def graded_pair() -> Dvpa:
    """Pattern-free automaton whose precedes order is a single strict edge,
    so the pair heights reach 2: the only ascent leaves the initial state
    through the accepting one and can never come back to where it began."""
    return stair_buchi(
        (("c",), ("r",), ("i",)),
        ("q", "f", "p"), "q", ("Z",),
        {("q", "c"): ("f", "Z")},
        {("p", "Z", "r"): "p"},
        {("f", "i"): "p"},
        {"f"})


def pending_call_acceptor() -> Dvpa:
    """Every call enters the accepting state; internals keep it; the single
    return leaves it.  Dwelling in the accepting state is fine, but visits
    between a call and its matching return must not count."""
    return stair_buchi(
        (("c",), ("r",), ("i",)),
        ("s", "t"), "s", ("Z",),
        {("s", "c"): ("t", "Z"), ("t", "c"): ("t", "Z")},
        {("t", "Z", "r"): "s"},
        {("s", "i"): "s", ("t", "i"): "t"},
        {"t"})


REMOVABLE_FIXTURES = [
    ("always_accepting_loop", always_accepting_loop),
    ("never_accepting_loop", never_accepting_loop),
    ("internal_alternator", internal_alternator),
    ("internal_choice", internal_choice),
    ("block_counter", block_counter),
    ("block_counter_with_internals", block_counter_with_internals),
    ("graded_pair", graded_pair),
    ("pending_call_acceptor", pending_call_acceptor),
]

PATTERN_FIXTURES = [
    ("hidden_pattern", hidden_pattern),
    ("strictly_unbounded", strictly_unbounded),
    ("simple_pattern_automaton", simple_pattern_automaton),
]

SMALL_FIXTURES = PATTERN_FIXTURES + REMOVABLE_FIXTURES


def random_dvpa(seed: int, max_states: int = 4, kind: str | None = None,
                total: bool = False) -> Dvpa:
    """A small seeded automaton over the alphabet {c}/{r}/{i}."""
    rng = random.Random(f"dvpa|{seed}|{max_states}|{kind}|{total}")
    n = rng.randrange(1, max_states + 1)
    states = tuple(f"s{i}" for i in range(n))
    stack = ("X", "Y")
    calls, rets, ints = {}, {}, {}
    for q in states:
        if total or rng.random() < 0.85:
            calls[(q, "c")] = (rng.choice(states), rng.choice(stack))
        for z in stack:
            if total or rng.random() < 0.85:
                rets[(q, z, "r")] = rng.choice(states)
        if total or rng.random() < 0.85:
            ints[(q, "i")] = rng.choice(states)
    kind = kind or rng.choice(("buchi", "parity", "stair-buchi", "stair-parity"))
    if kind in ("buchi", "stair-buchi"):
        acc = AcceptanceSpec(kind, final_states=frozenset(
            q for q in states if rng.random() < 0.5))
    else:
        acc = AcceptanceSpec(kind, priorities={q: rng.randrange(0, 4) for q in states})
    return Dvpa(PartitionedAlphabet(("c",), ("r",), ("i",)), states, states[0], stack,
                calls, rets, ints, acc)


def random_lasso_over(seed: int, alphabet: PartitionedAlphabet, max_len: int = 8):
    """Uniform random lasso; may die, underflow, or anything else."""
    from stairvpa import LassoWord
    rng = random.Random(f"lasso|{seed}|{max_len}")
    symbols = alphabet.symbols
    u = tuple(rng.choice(symbols) for _ in range(rng.randrange(0, max_len + 1)))
    v = tuple(rng.choice(symbols) for _ in range(rng.randrange(1, max_len + 1)))
    return LassoWord(u, v)
