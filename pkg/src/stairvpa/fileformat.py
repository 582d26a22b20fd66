"""Text format for automata.

A file starts with the header ``vpa 1`` and then the sections ``calls``,
``returns``, ``internals``, ``stack``, ``states``, ``initial``,
``acceptance``, and ``final`` (Buchi kinds) or ``priorities`` (parity
kinds, entries ``state:priority``), in that order, followed by one
transition per line::

    call q a -> p Z      # read call a in q: push Z, go to p
    ret  q Z a -> p      # read return a in q popping Z: go to p
    int  q a -> p        # read internal a in q: go to p

``#`` starts a comment; tokens are whitespace-separated.  Serialization
is canonical: fixed section order, transitions and acceptance entries
sorted, declarations kept in declared order.
"""

from __future__ import annotations

from typing import Iterable, Union

from .core import (AutomatonDescription, BUCHI_KINDS, Dvpa, KINDS, VpaError, validate)


class ParseError(VpaError):
    """A syntax problem, reported with its line number."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


_SECTIONS = ("calls", "returns", "internals", "stack", "states", "initial", "acceptance")


def parse_description(text: Union[str, bytes]) -> AutomatonDescription:
    """Tokenize and shape the file; semantic checks happen in ``validate``."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines: list[tuple[int, list[str]]] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        tokens = body.split()
        if tokens:
            lines.append((no, tokens))
    if not lines:
        raise ParseError(0, "empty file")
    no, header = lines[0]
    if header != ["vpa", "1"]:
        raise ParseError(no, f"expected header 'vpa 1', got {' '.join(header)!r}")
    pos = 1
    desc = AutomatonDescription()

    def expect_section(name: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(lines[-1][0], f"missing section {name!r}")
        no, tokens = lines[pos]
        if tokens[0] != name:
            raise ParseError(no, f"expected section {name!r}, got {tokens[0]!r}")
        pos += 1
        return no, tokens[1:]

    _, desc.calls = expect_section("calls")
    _, desc.returns = expect_section("returns")
    _, desc.internals = expect_section("internals")
    _, desc.stack = expect_section("stack")
    no, states = expect_section("states")
    if not states:
        raise ParseError(no, "section 'states' must declare at least one state")
    desc.states = states
    no, initial = expect_section("initial")
    if len(initial) != 1:
        raise ParseError(no, "section 'initial' takes exactly one state")
    desc.initial = initial[0]
    no, kind = expect_section("acceptance")
    if len(kind) != 1 or kind[0] not in KINDS:
        raise ParseError(no, f"section 'acceptance' takes one of {', '.join(KINDS)}")
    desc.kind = kind[0]
    if desc.kind in BUCHI_KINDS:
        _, desc.final = expect_section("final")
    else:
        no, entries = expect_section("priorities")
        prios = []
        for entry in entries:
            state, sep, value = entry.partition(":")
            if not sep or not state:
                raise ParseError(no, f"priorities entry {entry!r} must look like state:number")
            try:
                prios.append((state, int(value)))
            except ValueError:
                raise ParseError(no, f"priority {value!r} of {state!r} is not a number") from None
        desc.priorities = prios

    while pos < len(lines):
        no, tokens = lines[pos]
        pos += 1
        kind = tokens[0]
        if kind == "call":
            if len(tokens) != 6 or tokens[3] != "->":
                raise ParseError(no, "call lines look like: call q a -> p Z")
            desc.transitions.append(("call", tokens[1], tokens[2], tokens[4], tokens[5]))
        elif kind == "ret":
            if len(tokens) != 6 or tokens[4] != "->":
                raise ParseError(no, "ret lines look like: ret q Z a -> p")
            desc.transitions.append(("ret", tokens[1], tokens[2], tokens[3], tokens[5]))
        elif kind == "int":
            if len(tokens) != 5 or tokens[3] != "->":
                raise ParseError(no, "int lines look like: int q a -> p")
            desc.transitions.append(("int", tokens[1], tokens[2], tokens[4]))
        else:
            raise ParseError(no, f"expected a transition line (call/ret/int), got {kind!r}")
    return desc


def parse(text: Union[str, bytes]) -> Dvpa:
    """Parse and validate an automaton file."""
    return validate(parse_description(text))


def serialize(dvpa: Dvpa) -> str:
    """Canonical textual form of an automaton; ``parse`` inverts it."""
    out = ["vpa 1"]

    def section(name: str, items: Iterable[str]) -> None:
        items = list(items)
        out.append(name + (" " + " ".join(items) if items else ""))

    section("calls", dvpa.alphabet.calls)
    section("returns", dvpa.alphabet.returns)
    section("internals", dvpa.alphabet.internals)
    section("stack", dvpa.stack_symbols)
    section("states", dvpa.states)
    section("initial", [dvpa.initial])
    section("acceptance", [dvpa.acceptance.kind])
    if dvpa.acceptance.is_buchi:
        section("final", sorted(dvpa.acceptance.final_states))
    else:
        section("priorities", [f"{q}:{p}" for q, p in sorted(dvpa.acceptance.priorities.items())])
    lines = []
    for (q, a), (p, z) in dvpa.call_trans.items():
        lines.append(f"call {q} {a} -> {p} {z}")
    for (q, z, a), p in dvpa.return_trans.items():
        lines.append(f"ret {q} {z} {a} -> {p}")
    for (q, a), p in dvpa.internal_trans.items():
        lines.append(f"int {q} {a} -> {p}")
    out.extend(sorted(lines))
    return "\n".join(out) + "\n"
