"""Deterministic visibly pushdown automata over partitioned alphabets.

The input alphabet of a DVPA is split into call, return, and internal
symbols; the symbol class alone decides the stack action (push, pop, or
nothing).  Transitions on calls and internals never inspect the stack;
returns read and consume the popped symbol.  Transition tables may be
partial: a missing entry, or a return on the empty stack, kills the run,
and dead runs reject.

Stacks are plain sequences over the declared stack alphabet, written top
first.  The bottom marker is implicit: the empty sequence stands for the
stack that holds only the marker.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

KINDS = ("buchi", "parity", "stair-buchi", "stair-parity")
BUCHI_KINDS = ("buchi", "stair-buchi")
PARITY_KINDS = ("parity", "stair-parity")
STAIR_KINDS = ("stair-buchi", "stair-parity")

CALL, RETURN, INTERNAL = 0, 1, 2


class VpaError(Exception):
    """Base class for every error this package raises on purpose."""


class ValidationError(VpaError):
    """An automaton description breaks a structural invariant."""


class UnknownSymbolError(VpaError):
    """A word uses a symbol the alphabet does not declare."""


class CapacityError(VpaError):
    """A configured resource cap was exceeded."""


class PartialTableWarning(UserWarning):
    """Some transition-table entries are missing (permitted; dead runs reject)."""


_FORBIDDEN_CHARS = frozenset(";#")


def _check_token(name: object, what: str) -> str:
    if not isinstance(name, str) or not name:
        raise ValidationError(f"{what} name must be a non-empty string, got {name!r}")
    if any(ch.isspace() or ch in _FORBIDDEN_CHARS for ch in name):
        raise ValidationError(
            f"bad {what} name {name!r}: tokens may not contain whitespace, ';' or '#'"
        )
    return name


def _ordered_unique(names: Iterable[str], what: str) -> tuple[str, ...]:
    out: list[str] = []
    seen = set()
    for n in names:
        _check_token(n, what)
        if n in seen:
            raise ValidationError(f"duplicate {what} name {n!r}")
        seen.add(n)
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class PartitionedAlphabet:
    """Input alphabet split into call, return, and internal symbols."""

    calls: tuple[str, ...]
    returns: tuple[str, ...]
    internals: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "calls", _ordered_unique(self.calls, "call symbol"))
        object.__setattr__(self, "returns", _ordered_unique(self.returns, "return symbol"))
        object.__setattr__(self, "internals", _ordered_unique(self.internals, "internal symbol"))
        everything = self.calls + self.returns + self.internals
        if not everything:
            raise ValidationError("alphabet must declare at least one symbol")
        if len(set(everything)) != len(everything):
            raise ValidationError("call/return/internal symbol sets must be pairwise disjoint")

    @cached_property
    def symbols(self) -> tuple[str, ...]:
        return self.calls + self.returns + self.internals

    @cached_property
    def _kind_map(self) -> dict[str, int]:
        m = {a: CALL for a in self.calls}
        m.update({a: RETURN for a in self.returns})
        m.update({a: INTERNAL for a in self.internals})
        return m

    def kind_of(self, symbol: str) -> int:
        try:
            return self._kind_map[symbol]
        except KeyError:
            raise UnknownSymbolError(f"symbol {symbol!r} is not in the alphabet") from None

    def __contains__(self, symbol: object) -> bool:
        return symbol in self._kind_map


@dataclass(frozen=True)
class AcceptanceSpec:
    """Acceptance condition: a final-state set or a total priority map.

    ``final_states`` is present exactly for the Buchi kinds, ``priorities``
    exactly for the parity kinds.  Stair kinds evaluate the same condition
    on the subsequence of steps of the run instead of the whole run.
    """

    kind: str
    final_states: Optional[frozenset[str]] = None
    priorities: Optional[Mapping[str, int]] = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown acceptance kind {self.kind!r}")
        if self.kind in BUCHI_KINDS:
            if self.final_states is None or self.priorities is not None:
                raise ValidationError(f"kind {self.kind!r} needs final_states and no priorities")
            object.__setattr__(self, "final_states", frozenset(self.final_states))
        else:
            if self.priorities is None or self.final_states is not None:
                raise ValidationError(f"kind {self.kind!r} needs priorities and no final_states")
            prios = dict(self.priorities)
            for q, p in prios.items():
                if not isinstance(p, int) or p < 0:
                    raise ValidationError(f"priority of {q!r} must be a natural number, got {p!r}")
            object.__setattr__(self, "priorities", prios)

    @property
    def is_stair(self) -> bool:
        return self.kind in STAIR_KINDS

    @property
    def is_buchi(self) -> bool:
        return self.kind in BUCHI_KINDS

    def priority_of(self, state: str) -> int:
        """Priority of a state; Buchi kinds map final states to 2, others to 1."""
        if self.is_buchi:
            return 2 if state in self.final_states else 1
        return self.priorities[state]

    def accepting(self, state: str) -> bool:
        return self.priority_of(state) % 2 == 0


@dataclass(frozen=True)
class Configuration:
    """A control state together with the stack contents, top first."""

    state: str
    stack: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "stack", tuple(self.stack))

    @property
    def height(self) -> int:
        return len(self.stack)


class _Engine:
    """Integer-interned transition tables for the tight simulation loops."""

    __slots__ = (
        "n_states", "state_id", "state_names", "stack_id", "stack_names",
        "sym_id", "sym_names", "kinds", "call_tab", "int_tab", "ret_tab",
        "init", "prio", "accepting",
    )

    def __init__(self, d: "Dvpa") -> None:
        self.state_names = d.states
        self.state_id = {q: i for i, q in enumerate(d.states)}
        self.stack_names = d.stack_symbols
        self.stack_id = {z: i for i, z in enumerate(d.stack_symbols)}
        self.sym_names = d.alphabet.symbols
        self.sym_id = {a: i for i, a in enumerate(self.sym_names)}
        self.kinds = [d.alphabet.kind_of(a) for a in self.sym_names]
        self.n_states = len(d.states)
        nsym = len(self.sym_names)
        self.call_tab = [[None] * nsym for _ in range(self.n_states)]
        self.int_tab = [[None] * nsym for _ in range(self.n_states)]
        self.ret_tab: list[dict[tuple[int, int], int]] = [dict() for _ in range(self.n_states)]
        for (q, a), (p, z) in d.call_trans.items():
            self.call_tab[self.state_id[q]][self.sym_id[a]] = (self.state_id[p], self.stack_id[z])
        for (q, a), p in d.internal_trans.items():
            self.int_tab[self.state_id[q]][self.sym_id[a]] = self.state_id[p]
        for (q, z, a), p in d.return_trans.items():
            self.ret_tab[self.state_id[q]][(self.stack_id[z], self.sym_id[a])] = self.state_id[p]
        self.init = self.state_id[d.initial]
        self.prio = [d.acceptance.priority_of(q) for q in d.states]
        self.accepting = [p % 2 == 0 for p in self.prio]


@dataclass(frozen=True)
class Dvpa:
    """A deterministic visibly pushdown automaton with an acceptance condition."""

    alphabet: PartitionedAlphabet
    states: tuple[str, ...]
    initial: str
    stack_symbols: tuple[str, ...]
    call_trans: Mapping[tuple[str, str], tuple[str, str]]
    return_trans: Mapping[tuple[str, str, str], str]
    internal_trans: Mapping[tuple[str, str], str]
    acceptance: AcceptanceSpec

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", _ordered_unique(self.states, "state"))
        object.__setattr__(self, "stack_symbols", _ordered_unique(self.stack_symbols, "stack symbol"))
        object.__setattr__(self, "call_trans", dict(self.call_trans))
        object.__setattr__(self, "return_trans", dict(self.return_trans))
        object.__setattr__(self, "internal_trans", dict(self.internal_trans))
        self._check()

    def _check(self) -> None:
        if not self.states:
            raise ValidationError("state set must be non-empty")
        states = set(self.states)
        stack = set(self.stack_symbols)
        if self.initial not in states:
            raise ValidationError(f"initial state {self.initial!r} is not declared")
        calls = set(self.alphabet.calls)
        rets = set(self.alphabet.returns)
        ints = set(self.alphabet.internals)
        for (q, a), (p, z) in self.call_trans.items():
            if q not in states or p not in states:
                raise ValidationError(f"call transition ({q!r},{a!r}) uses an undeclared state")
            if a not in calls:
                raise ValidationError(f"{a!r} is not a call symbol")
            if z not in stack:
                raise ValidationError(f"call transition ({q!r},{a!r}) pushes undeclared symbol {z!r}")
        for (q, z, a), p in self.return_trans.items():
            if q not in states or p not in states:
                raise ValidationError(f"return transition ({q!r},{z!r},{a!r}) uses an undeclared state")
            if a not in rets:
                raise ValidationError(f"{a!r} is not a return symbol")
            if z not in stack:
                raise ValidationError(f"return transition ({q!r},{z!r},{a!r}) pops undeclared symbol {z!r}")
        for (q, a), p in self.internal_trans.items():
            if q not in states or p not in states:
                raise ValidationError(f"internal transition ({q!r},{a!r}) uses an undeclared state")
            if a not in ints:
                raise ValidationError(f"{a!r} is not an internal symbol")
        acc = self.acceptance
        if acc.is_buchi:
            extra = acc.final_states - states
            if extra:
                raise ValidationError(f"final states {sorted(extra)} are not declared")
        else:
            missing = states - set(acc.priorities)
            if missing:
                raise ValidationError(f"priorities missing for states {sorted(missing)}")
            extra = set(acc.priorities) - states
            if extra:
                raise ValidationError(f"priorities given for undeclared states {sorted(extra)}")

    @cached_property
    def accepting_states(self) -> frozenset[str]:
        """States that count as accepting: F for Buchi kinds, even priority otherwise."""
        return frozenset(q for q in self.states if self.acceptance.accepting(q))

    @cached_property
    def _engine(self) -> _Engine:
        return _Engine(self)

    def check_configuration(self, config: Configuration) -> None:
        if config.state not in set(self.states):
            raise ValidationError(f"configuration state {config.state!r} is not declared")
        undeclared = set(config.stack) - set(self.stack_symbols)
        if undeclared:
            raise ValidationError(f"configuration stack uses undeclared symbols {sorted(undeclared)}")


@dataclass
class AutomatonDescription:
    """Raw parsed form of an automaton file, before semantic validation."""

    calls: list[str] = field(default_factory=list)
    returns: list[str] = field(default_factory=list)
    internals: list[str] = field(default_factory=list)
    stack: list[str] = field(default_factory=list)
    states: list[str] = field(default_factory=list)
    initial: Optional[str] = None
    kind: Optional[str] = None
    final: Optional[list[str]] = None
    priorities: Optional[list[tuple[str, int]]] = None
    transitions: list[tuple] = field(default_factory=list)


def validate(description: AutomatonDescription) -> Dvpa:
    """Build a :class:`Dvpa` from a parsed description.

    Structural problems (duplicate transition keys, undeclared names, a
    mismatched acceptance section, an empty state set) raise
    :class:`ValidationError`.  Partial transition tables are permitted and
    reported through :class:`PartialTableWarning`; a missing entry makes the
    run halt, and halted runs reject.
    """
    alphabet = PartitionedAlphabet(tuple(description.calls), tuple(description.returns),
                                   tuple(description.internals))
    if description.kind is None:
        raise ValidationError("missing acceptance kind")
    if description.initial is None:
        raise ValidationError("missing initial state")
    if description.kind in BUCHI_KINDS:
        if description.priorities is not None or description.final is None:
            raise ValidationError(f"kind {description.kind!r} requires a 'final' section")
        acceptance = AcceptanceSpec(description.kind, final_states=frozenset(description.final))
    else:
        if description.final is not None or description.priorities is None:
            raise ValidationError(f"kind {description.kind!r} requires a 'priorities' section")
        prios: dict[str, int] = {}
        for q, p in description.priorities:
            if q in prios:
                raise ValidationError(f"duplicate priority entry for state {q!r}")
            prios[q] = p
        acceptance = AcceptanceSpec(description.kind, priorities=prios)

    call_trans: dict[tuple[str, str], tuple[str, str]] = {}
    return_trans: dict[tuple[str, str, str], str] = {}
    internal_trans: dict[tuple[str, str], str] = {}
    for t in description.transitions:
        if t[0] == "call":
            _, q, a, p, z = t
            if (q, a) in call_trans:
                raise ValidationError(f"two call transitions for ({q!r},{a!r}): determinism violated")
            call_trans[(q, a)] = (p, z)
        elif t[0] == "ret":
            _, q, z, a, p = t
            if (q, z, a) in return_trans:
                raise ValidationError(f"two return transitions for ({q!r},{z!r},{a!r}): determinism violated")
            return_trans[(q, z, a)] = p
        elif t[0] == "int":
            _, q, a, p = t
            if (q, a) in internal_trans:
                raise ValidationError(f"two internal transitions for ({q!r},{a!r}): determinism violated")
            internal_trans[(q, a)] = p
        else:
            raise ValidationError(f"unknown transition record {t!r}")

    dvpa = Dvpa(alphabet, tuple(description.states), description.initial,
                tuple(description.stack), call_trans, return_trans, internal_trans, acceptance)
    _warn_partial(dvpa)
    return dvpa


def _warn_partial(d: Dvpa) -> None:
    nq = len(d.states)
    missing_calls = nq * len(d.alphabet.calls) - len(d.call_trans)
    missing_ints = nq * len(d.alphabet.internals) - len(d.internal_trans)
    missing_rets = nq * len(d.stack_symbols) * len(d.alphabet.returns) - len(d.return_trans)
    for count, what in ((missing_calls, "call"), (missing_rets, "return"), (missing_ints, "internal")):
        if count > 0:
            plural = "" if count == 1 else "s"
            warnings.warn(PartialTableWarning(f"partial: {count} missing {what} transition{plural}"))


WELL_MATCHED = "well-matched"
MINIMALLY_WELL_MATCHED = "minimally-well-matched"
PENDING = "pending"
ILLEGAL = "illegal"


@dataclass(frozen=True)
class WordClass:
    """Classification of a finite word by its call/return balance.

    ``pending(k)`` carries the positive number of unmatched calls;
    ``illegal(pos)`` carries the index of the return that underflows
    (the first position whose prefix has more returns than calls).
    The empty word counts as well-matched.
    """

    kind: str
    k: Optional[int] = None
    pos: Optional[int] = None

    @property
    def is_well_matched(self) -> bool:
        return self.kind in (WELL_MATCHED, MINIMALLY_WELL_MATCHED)


def classify_word(alphabet: PartitionedAlphabet, word: Sequence[str]) -> WordClass:
    """Classify ``word`` as well-matched, minimally well-matched, pending, or illegal."""
    surplus = 0
    min_interior = None
    kinds = [alphabet.kind_of(a) for a in word]
    for i, k in enumerate(kinds):
        if k == CALL:
            surplus += 1
        elif k == RETURN:
            surplus -= 1
        if surplus < 0:
            return WordClass(ILLEGAL, pos=i)
        if i < len(word) - 1:
            min_interior = surplus if min_interior is None else min(min_interior, surplus)
    if surplus > 0:
        return WordClass(PENDING, k=surplus)
    if (len(word) >= 2 and kinds[0] == CALL and kinds[-1] == RETURN
            and (min_interior is None or min_interior >= 1)):
        return WordClass(MINIMALLY_WELL_MATCHED)
    return WordClass(WELL_MATCHED)


@dataclass(frozen=True)
class RunTrace:
    """A finite run: configurations, step flags, and the accepting-step count.

    Position ``i`` is a step when no later configuration of the trace is
    lower; the flags only depend on the height profile.  ``death`` is the
    index of the symbol for which no transition applied (a return on the
    empty stack or a missing table entry); dead traces keep the
    configurations produced up to that point.
    """

    configs: tuple[Configuration, ...]
    consumed: tuple[str, ...]
    death: Optional[int]
    step_flags: tuple[bool, ...]
    f_on_step_count: int

    @property
    def heights(self) -> tuple[int, ...]:
        return tuple(c.height for c in self.configs)

    @property
    def final(self) -> Configuration:
        return self.configs[-1]


def run_word(dvpa: Dvpa, start: Configuration, word: Sequence[str]) -> RunTrace:
    """Simulate ``word`` from ``start`` and report the trace.

    Death is data, not an error: the trace simply stops at the position
    where no transition applied.
    """
    dvpa.check_configuration(start)
    alphabet = dvpa.alphabet
    word = tuple(word)
    stack = list(reversed(start.stack))  # top kept at the end
    state = start.state
    configs = [start]
    death: Optional[int] = None
    for i, a in enumerate(word):
        k = alphabet.kind_of(a)
        if k == CALL:
            ent = dvpa.call_trans.get((state, a))
            if ent is None:
                death = i
                break
            state, z = ent
            stack.append(z)
        elif k == RETURN:
            if not stack:
                death = i
                break
            tgt = dvpa.return_trans.get((state, stack[-1], a))
            if tgt is None:
                death = i
                break
            stack.pop()
            state = tgt
        else:
            tgt = dvpa.internal_trans.get((state, a))
            if tgt is None:
                death = i
                break
            state = tgt
        configs.append(Configuration(state, tuple(reversed(stack))))

    heights = [c.height for c in configs]
    flags = [False] * len(configs)
    suffix_min = heights[-1]
    for i in range(len(configs) - 1, -1, -1):
        suffix_min = min(suffix_min, heights[i])
        flags[i] = heights[i] <= suffix_min
    accepting = dvpa.accepting_states
    count = sum(1 for i, c in enumerate(configs) if flags[i] and c.state in accepting)
    return RunTrace(tuple(configs), word, death, tuple(flags), count)
