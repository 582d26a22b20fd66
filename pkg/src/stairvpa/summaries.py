"""Saturation-based summary relations for DVPAs.

Calls and internals never read the stack, so a run over a well-matched
word relativizes over any frozen stack suffix.  That makes state-pair
summaries exact: ``wm_reach`` holds the pairs connected by some
well-matched word, and the sees/avoid flags record whether a witness run
puts an accepting state on a step of the segment (the base-height
positions, position 0 included) or manages to avoid that.

``coupled_relations`` couples an ascent with a descent over the *same*
stack word: (q, p, d, d') is in the core relation when some non-empty
stack word sigma admits an ascent from (q, bottom) to (p, sigma) whose
first symbol pushes sigma's bottom, and a descent from (d, sigma) to
(d', bottom) whose last symbol pops it.  The full variant additionally
allows a well-matched lead-in before the first pending call and a
well-matched tail after the last pop.

Every derived tuple keeps a backpointer to its first derivation, so a
concrete witness word can be replayed later.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import CALL, Dvpa, ValidationError, VpaError

SEES = "sees"
AVOID = "avoid"
FLAGS = (SEES, AVOID)


def _join(a: str, b: str) -> str:
    return SEES if SEES in (a, b) else AVOID


@dataclass(frozen=True)
class FlaggedRelation:
    """Well-matched summary pairs with sees/avoid flags and witness backpointers."""

    wm_reach: frozenset[tuple[str, str]]
    wm_sees: frozenset[tuple[str, str]]
    wm_avoid: frozenset[tuple[str, str]]
    witnesses: dict = field(compare=False, repr=False)

    def reach_word(self, q: str, q2: str) -> tuple[str, ...]:
        """Some well-matched word driving q to q2 (first derivation found)."""
        return self._expand(self.witnesses["reach"][(q, q2)])

    def flag_word(self, q: str, q2: str, flag: str) -> tuple[str, ...]:
        """A well-matched witness word for the flagged pair."""
        return self._expand(self.witnesses["flag"][(q, q2, flag)])

    def _expand(self, rec) -> tuple[str, ...]:
        # record predecessors always point into the flagged table
        if rec[0] == "base":
            return ()
        if rec[0] == "int":
            _, prev, a = rec
            return self._expand(self.witnesses["flag"][prev]) + (a,)
        _, prev, c, inner, r = rec
        return self._expand(self.witnesses["flag"][prev]) + (c,) + self.reach_word(*inner) + (r,)


def wm_summaries(dvpa: Dvpa) -> FlaggedRelation:
    """Least fixpoint of the well-matched summary rules.

    Pairs grow left to right: the reflexive base (empty word, flagged by
    the finality of the state itself), extension by one internal symbol,
    and extension by a matched call/return bracket around an already
    summarized pair.  Positions strictly inside a bracket sit above the
    base height and are never steps of the outer segment, so only plain
    reachability of the bracket interior matters.
    """
    accepting = dvpa.accepting_states
    calls_from: dict[str, list[tuple[str, str, str]]] = {}
    for (q, c), (p, z) in dvpa.call_trans.items():
        calls_from.setdefault(q, []).append((c, p, z))
    rets_from: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for (q, z, r), p in dvpa.return_trans.items():
        rets_from.setdefault((q, z), []).append((r, p))
    ints_from: dict[str, list[tuple[str, str]]] = {}
    for (q, a), p in dvpa.internal_trans.items():
        ints_from.setdefault(q, []).append((a, p))

    flags: dict[tuple[str, str], set[str]] = {}
    reach_by_src: dict[str, set[str]] = {q: set() for q in dvpa.states}
    flag_wit: dict = {}
    reach_wit: dict = {}

    def add(q: str, q2: str, flag: str, record) -> bool:
        key = (q, q2)
        have = flags.setdefault(key, set())
        fresh = False
        if flag not in have:
            have.add(flag)
            flag_wit[(q, q2, flag)] = record
            fresh = True
        if q2 not in reach_by_src[q]:
            reach_by_src[q].add(q2)
            reach_wit[key] = record
        return fresh

    for q in dvpa.states:
        add(q, q, SEES if q in accepting else AVOID, ("base",))

    changed = True
    while changed:
        changed = False
        for (q, q1), have in list(flags.items()):
            for flag in tuple(have):
                prev = (q, q1, flag)
                for a, q2 in ints_from.get(q1, ()):
                    nf = _join(flag, SEES if q2 in accepting else AVOID)
                    if add(q, q2, nf, ("int", prev, a)):
                        changed = True
                for c, p, z in calls_from.get(q1, ()):
                    for p2 in tuple(reach_by_src[p]):
                        for r, q2 in rets_from.get((p2, z), ()):
                            nf = _join(flag, SEES if q2 in accepting else AVOID)
                            if add(q, q2, nf, ("call", prev, c, (p, p2), r)):
                                changed = True

    sees = frozenset(k for k, have in flags.items() if SEES in have)
    avoid = frozenset(k for k, have in flags.items() if AVOID in have)
    return FlaggedRelation(wm_reach=sees | avoid, wm_sees=sees, wm_avoid=avoid,
                           witnesses={"flag": flag_wit, "reach": reach_wit})


@dataclass(frozen=True)
class Reachability:
    """Reachable states and (state, top-of-stack) surface pairs.

    The surface is a stack symbol name, or ``None`` for the bare bottom
    marker.  ``access_word`` reconstructs a concrete input word leading
    from the initial configuration to some configuration in the state.
    """

    states: frozenset[str]
    surfaces: frozenset[tuple[str, Optional[str]]]
    _access: dict = field(compare=False, repr=False)
    _flagged: FlaggedRelation = field(compare=False, repr=False)

    def access_word(self, state: str) -> tuple[str, ...]:
        item = self._access["first_item"].get(state)
        if item is None:
            raise VpaError(f"state {state!r} is not reachable")
        out: list[str] = []
        deriv = self._access["deriv"]
        while True:
            rec = deriv[item]
            if rec[0] == "init":
                break
            if rec[0] == "int" or rec[0] == "call":
                _, item, a = rec
                out.append(a)
            else:
                _, item, pair = rec
                out.extend(reversed(self._flagged.reach_word(*pair)))
        out.reverse()
        return tuple(out)


def reachable(dvpa: Dvpa, flagged: Optional[FlaggedRelation] = None) -> Reachability:
    """Closure of the initial surface under internal, call, and summary moves.

    Pops below the current surface only ever happen inside a well-matched
    segment of the level below, so the well-matched summaries subsume
    explicit return moves here.
    """
    fr = flagged if flagged is not None else wm_summaries(dvpa)
    reach_by_src: dict[str, set[str]] = {}
    for (q, q2) in fr.wm_reach:
        reach_by_src.setdefault(q, set()).add(q2)
    calls_from: dict[str, list[tuple[str, str, str]]] = {}
    for (q, c), (p, z) in dvpa.call_trans.items():
        calls_from.setdefault(q, []).append((c, p, z))
    ints_from: dict[str, list[tuple[str, str]]] = {}
    for (q, a), p in dvpa.internal_trans.items():
        ints_from.setdefault(q, []).append((a, p))

    start = (dvpa.initial, None)
    deriv: dict = {start: ("init",)}
    first_item: dict[str, tuple] = {dvpa.initial: start}
    todo = [start]
    while todo:
        item = todo.pop()
        q, s = item

        def visit(nitem, rec):
            if nitem not in deriv:
                deriv[nitem] = rec
                first_item.setdefault(nitem[0], nitem)
                todo.append(nitem)

        for a, p in ints_from.get(q, ()):
            visit((p, s), ("int", item, a))
        for c, p, z in calls_from.get(q, ()):
            visit((p, z), ("call", item, c))
        for q2 in reach_by_src.get(q, ()):
            visit((q2, s), ("wm", item, (q, q2)))

    items = frozenset(deriv)
    return Reachability(states=frozenset(q for q, _ in items), surfaces=items,
                        _access={"deriv": deriv, "first_item": first_item}, _flagged=fr)


@dataclass(frozen=True)
class StepGraph:
    """States that can appear on successive steps, with their priorities.

    An edge stands for one internal symbol or one minimally well-matched
    word between two step positions at the same height; vertices are
    restricted to the closure of the initial state under the edges.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    vertex_priority: dict = field(compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertex_priority", dict(self.vertex_priority))


def step_graph(dvpa: Dvpa) -> StepGraph:
    """Build the successive-step graph of a stair automaton."""
    if not dvpa.acceptance.is_stair:
        raise ValidationError("the step graph is defined for stair acceptance kinds")
    fr = wm_summaries(dvpa)
    edges: set[tuple[str, str]] = set()
    for (q, _a), p in dvpa.internal_trans.items():
        edges.add((q, p))
    reach_by_src: dict[str, set[str]] = {}
    for (a, b) in fr.wm_reach:
        reach_by_src.setdefault(a, set()).add(b)
    for (q, _c), (q2, z) in dvpa.call_trans.items():
        for p2 in reach_by_src.get(q2, ()):
            for (src, zz, _r), p in dvpa.return_trans.items():
                if src == p2 and zz == z:
                    edges.add((q, p))
    succ: dict[str, set[str]] = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    vertices = [dvpa.initial]
    seen = {dvpa.initial}
    idx = 0
    while idx < len(vertices):
        for b in sorted(succ.get(vertices[idx], ())):
            if b not in seen:
                seen.add(b)
                vertices.append(b)
        idx += 1
    kept = frozenset((a, b) for a, b in edges if a in seen and b in seen)
    prio = {q: dvpa.acceptance.priority_of(q) for q in vertices}
    return StepGraph(vertices=tuple(vertices), edges=kept, vertex_priority=prio)


@dataclass(frozen=True)
class CoupledRelation:
    """Coupled ascent/descent quadruples, core and full variants, per flag."""

    cud_core: dict
    cud_full: dict
    flagged: FlaggedRelation = field(compare=False, repr=False)
    witnesses: dict = field(compare=False, repr=False)

    def core_witness(self, quad: tuple[str, str, str, str], flag: str):
        """Witness (ascent word, descent word, stack word) for a core tuple."""
        return self._expand("core", quad + (flag,))

    def full_witness(self, quad: tuple[str, str, str, str], flag: str):
        return self._expand("full", quad + (flag,))

    def _expand(self, which: str, key):
        rec = self.witnesses[which][key]
        fr = self.flagged
        if rec[0] == "base":
            _, c, z, q2, p, phi2, d, d1, r = rec
            return ((c,) + fr.flag_word(q2, p, phi2), fr.reach_word(d, d1) + (r,), (z,))
        if rec[0] == "step":
            _, c, z, fullkey, r = rec
            u, w, sigma = self._expand("full", fullkey)
            return ((c,) + u, w + (r,), sigma + (z,))
        _, lead, corekey, tail = rec
        u, w, sigma = self._expand("core", corekey)
        return (fr.flag_word(*lead) + u, w + fr.reach_word(*tail), sigma)


def coupled_relations(dvpa: Dvpa, flagged: Optional[FlaggedRelation] = None) -> CoupledRelation:
    """Least fixpoint of the coupled ascent/descent rules.

    The mutual recursion keeps the existential stack word finite: a core
    tuple with a one-symbol stack combines a call, a summarized interior,
    and a matching return; deeper stacks wrap a full tuple in one more
    call/return bracket; the full relation closes the core one under
    well-matched lead-ins (whose flag joins the ascent flag) and
    well-matched tails after the last pop.
    """
    if dvpa.acceptance.kind != "stair-buchi":
        raise ValidationError("coupled relations are defined for stair-buchi acceptance")
    fr = flagged if flagged is not None else wm_summaries(dvpa)
    accepting = dvpa.accepting_states
    reach_by_src: dict[str, set[str]] = {}
    for (a, b) in fr.wm_reach:
        reach_by_src.setdefault(a, set()).add(b)
    flags_of: dict[tuple[str, str], list[str]] = {}
    for pair in fr.wm_sees:
        flags_of.setdefault(pair, []).append(SEES)
    for pair in fr.wm_avoid:
        flags_of.setdefault(pair, []).append(AVOID)
    rets_from: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for (q, z, r), p in dvpa.return_trans.items():
        rets_from.setdefault((q, z), []).append((r, p))

    core: dict[str, set[tuple[str, str, str, str]]] = {SEES: set(), AVOID: set()}
    full: dict[str, set[tuple[str, str, str, str]]] = {SEES: set(), AVOID: set()}
    wit = {"core": {}, "full": {}}

    def add(which, quad, flag, record) -> bool:
        rel = core if which == "core" else full
        if quad in rel[flag]:
            return False
        rel[flag].add(quad)
        wit[which][quad + (flag,)] = record
        return True

    changed = True
    while changed:
        changed = False
        for (q, c), (q2, z) in dvpa.call_trans.items():
            lift = q in accepting
            # one-symbol stack: call, summarized interior, matching return
            for p in reach_by_src.get(q2, ()):
                for phi2 in flags_of[(q2, p)]:
                    nf = SEES if lift else phi2
                    for d in dvpa.states:
                        for d1 in reach_by_src.get(d, ()):
                            for r, d2 in rets_from.get((d1, z), ()):
                                if add("core", (q, p, d, d2), nf,
                                       ("base", c, z, q2, p, phi2, d, d1, r)):
                                    changed = True
            # deeper stacks: wrap a full tuple in one more bracket
            for psi in FLAGS:
                for (fq, p, d, e) in tuple(full[psi]):
                    if fq != q2:
                        continue
                    nf = SEES if lift else psi
                    for r, d2 in rets_from.get((e, z), ()):
                        if add("core", (q, p, d, d2), nf,
                               ("step", c, z, (q2, p, d, e, psi), r)):
                            changed = True
        for phi1 in FLAGS:
            for (qt, p, d, e) in tuple(core[phi1]):
                for q in dvpa.states:
                    if qt not in reach_by_src.get(q, ()):
                        continue
                    for phi0 in flags_of[(q, qt)]:
                        nf = _join(phi0, phi1)
                        for d2 in reach_by_src.get(e, ()):
                            if add("full", (q, p, d, d2), nf,
                                   ("wrap", (q, qt, phi0), (qt, p, d, e, phi1), (e, d2))):
                                changed = True

    return CoupledRelation(
        cud_core={f: frozenset(core[f]) for f in FLAGS},
        cud_full={f: frozenset(full[f]) for f in FLAGS},
        flagged=fr, witnesses=wit)
