"""Deciding whether a stair-Buchi DVPA is equivalent to a parity DVPA.

The decision runs through a strict partial order on pairs of non-final
states: (p, p') precedes (q, q') when the runs between q and q' can wrap
a complete occurrence of the (p, p') situation, witnessed by a coupled
ascent/descent whose ascent puts an accepting state on a step while the
surrounding segments avoid accepting states on theirs.  A reflexive pair
is exactly a forbidden pattern; its presence means the accepted language
embeds the strictly-unbounded-calls language and no parity DVPA exists.
Absent patterns, the order's height function bounds the priorities of an
explicitly constructed equivalent parity DVPA, and a transducer realizes
the reduction strategy in the positive case.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import (AcceptanceSpec, CapacityError, Configuration, Dvpa,
                   MINIMALLY_WELL_MATCHED, ValidationError, VpaError,
                   classify_word, run_word)
from .summaries import (AVOID, SEES, CoupledRelation, FlaggedRelation,
                        Reachability, coupled_relations, reachable, wm_summaries)


class PatternPresentError(VpaError):
    """The automaton contains a forbidden pattern; the operation needs a clean one."""


class WitnessReplayError(VpaError):
    """A pattern witness failed replay validation (an internal bug, not user error)."""


class ReducerDomainError(VpaError):
    """The reducer input has a prefix with more returns than calls."""


@dataclass(frozen=True)
class PatternWitness:
    """A forbidden pattern: three states, six words, and two stack words.

    ``u v w x y z`` concatenates to a minimally well-matched word; the six
    segment runs replay with the endpoint states and stacks below, the u
    segment putting an accepting state on a step and the v and w segments
    putting none on theirs.
    """

    q: str
    q_prime: str
    q_second: str
    u: tuple[str, ...]
    v: tuple[str, ...]
    w: tuple[str, ...]
    x: tuple[str, ...]
    y: tuple[str, ...]
    z: tuple[str, ...]
    sigma: tuple[str, ...]
    sigma_prime: tuple[str, ...]


@dataclass(frozen=True)
class PrecedesRelation:
    """The strict order on non-final state pairs, with witness backpointers."""

    pairs: frozenset[tuple[tuple[str, str], tuple[str, str]]]
    witnesses: dict = field(compare=False, repr=False)

    def reflexive_pairs(self) -> list[tuple[str, str]]:
        return sorted(pp for (pp, qq) in self.pairs if pp == qq)


@dataclass(frozen=True)
class HeightFunction:
    """Longest-chain heights of the precedes order; ``h`` is the maximum."""

    ht: dict = field(compare=False)
    h: int = 0


@dataclass(frozen=True)
class RemovalDecision:
    removable: bool
    pattern: Optional[PatternWitness] = None


@dataclass(frozen=True)
class _Analysis:
    flagged: FlaggedRelation
    coupled: CoupledRelation
    reach: Reachability
    relation: PrecedesRelation
    final: frozenset[str]
    state_order: tuple[str, ...]


def _analyze(dvpa: Dvpa) -> _Analysis:
    if dvpa.acceptance.kind != "stair-buchi":
        raise ValidationError("stair removal is defined for stair-buchi acceptance")
    fr = wm_summaries(dvpa)
    cr = coupled_relations(dvpa, fr)
    reach = reachable(dvpa, fr)
    final = dvpa.acceptance.final_states
    nonfinal = [q for q in dvpa.states if q in reach.states and q not in final]
    reach_pairs = fr.wm_reach
    avoid_pairs = fr.wm_avoid
    core_sees = cr.cud_core[SEES]
    full_avoid = cr.cud_full[AVOID]

    pairs: set[tuple[tuple[str, str], tuple[str, str]]] = set()
    evidence: dict = {}
    for q in nonfinal:
        for q2 in nonfinal:
            for p in nonfinal:
                for p2 in nonfinal:
                    if (p, p2) not in avoid_pairs:
                        continue
                    for mid in dvpa.states:
                        if (q, p, mid, q2) not in core_sees:
                            continue
                        if (p, mid) not in reach_pairs:
                            continue
                        if (p2, p) in avoid_pairs:
                            branch = "flat"
                        elif (p2, p, mid, mid) in full_avoid:
                            branch = "stacked"
                        else:
                            continue
                        key = ((p, p2), (q, q2))
                        if key not in pairs:
                            pairs.add(key)
                            evidence[key] = (mid, branch)
                        break
    rel = PrecedesRelation(pairs=frozenset(pairs), witnesses=evidence)
    return _Analysis(flagged=fr, coupled=cr, reach=reach, relation=rel,
                     final=final, state_order=dvpa.states)


def precedes(dvpa: Dvpa) -> PrecedesRelation:
    """Compute the order on pairs of reachable non-final states.

    ((p,p'),(q,q')) holds when some middle state admits a coupled
    sees-ascent/descent from q to p and back down to q', p avoids
    accepting steps on the way to p', and p' returns to p either at the
    same level or through an avoiding coupled excursion.
    """
    return _analyze(dvpa).relation


def check_removable(dvpa: Dvpa) -> RemovalDecision:
    """Report a forbidden pattern, or that the stair condition can be removed.

    A pattern is exactly a reflexive pair of the precedes order.  The
    returned witness is reconstructed from the saturation backpointers and
    replay-validated before it leaves this function.
    """
    analysis = _analyze(dvpa)
    reflexive = analysis.relation.reflexive_pairs()
    if not reflexive:
        return RemovalDecision(removable=True)
    q, q2 = reflexive[0]
    witness = _build_witness(analysis, q, q2)
    validate_witness(dvpa, witness)
    return RemovalDecision(removable=False, pattern=witness)


def _build_witness(analysis: _Analysis, q: str, q2: str) -> PatternWitness:
    mid, branch = analysis.relation.witnesses[((q, q2), (q, q2))]
    fr = analysis.flagged
    cr = analysis.coupled
    u, z, sigma = cr.core_witness((q, q, mid, q2), SEES)
    v = fr.flag_word(q, q2, AVOID)
    x = fr.reach_word(q, mid)
    if branch == "flat":
        w = fr.flag_word(q2, q, AVOID)
        y: tuple[str, ...] = ()
        sigma_prime: tuple[str, ...] = ()
    else:
        w, y, sigma_prime = cr.full_witness((q2, q, mid, mid), AVOID)
    return PatternWitness(q=q, q_prime=q2, q_second=mid, u=u, v=v, w=w, x=x, y=y, z=z,
                          sigma=sigma, sigma_prime=sigma_prime)


def validate_witness(dvpa: Dvpa, wit: PatternWitness) -> None:
    """Replay all six segments of a pattern witness; raise on any mismatch."""
    final = dvpa.acceptance.final_states
    if wit.q in final or wit.q_prime in final:
        raise WitnessReplayError("pattern endpoints must be non-final states")
    if not wit.sigma:
        raise WitnessReplayError("the ascent stack word must be non-empty")
    whole = wit.u + wit.v + wit.w + wit.x + wit.y + wit.z
    if classify_word(dvpa.alphabet, whole).kind != MINIMALLY_WELL_MATCHED:
        raise WitnessReplayError("u v w x y z must concatenate to a minimally well-matched word")

    def replay(name: str, start: Configuration, word: Sequence[str],
               state: str, stack: tuple[str, ...], f_count: Optional[bool]) -> None:
        trace = run_word(dvpa, start, word)
        if trace.death is not None:
            raise WitnessReplayError(f"segment {name} dies at position {trace.death}")
        got = trace.final
        if got.state != state or got.stack != stack:
            raise WitnessReplayError(
                f"segment {name} ends in ({got.state}, {got.stack}), "
                f"expected ({state}, {stack})")
        if f_count is True and trace.f_on_step_count < 1:
            raise WitnessReplayError(f"segment {name} must put an accepting state on a step")
        if f_count is False and trace.f_on_step_count != 0:
            raise WitnessReplayError(f"segment {name} must avoid accepting states on steps")

    replay("u", Configuration(wit.q), wit.u, wit.q, wit.sigma, True)
    replay("v", Configuration(wit.q), wit.v, wit.q_prime, (), False)
    replay("w", Configuration(wit.q_prime), wit.w, wit.q, wit.sigma_prime, False)
    replay("x", Configuration(wit.q), wit.x, wit.q_second, (), None)
    replay("y", Configuration(wit.q_second, wit.sigma_prime), wit.y, wit.q_second, (), None)
    replay("z", Configuration(wit.q_second, wit.sigma), wit.z, wit.q_prime, (), None)


def heights(dvpa: Dvpa) -> HeightFunction:
    """Longest-chain height of every reachable pair of non-final states.

    Minimal pairs get 1; ``h`` is 0 exactly when no non-final state is
    reachable.  Rejects a cyclic order: run :func:`check_removable` first.
    """
    return _heights_from_analysis(_analyze(dvpa))


def _heights_from_analysis(analysis: _Analysis) -> HeightFunction:
    nonfinal = [q for q in analysis.state_order if q in analysis.reach.states
                and q not in analysis.final]
    domain = [(a, b) for a in nonfinal for b in nonfinal]
    return chain_heights(domain, analysis.relation.pairs)


def chain_heights(domain, order_pairs) -> HeightFunction:
    """Longest-chain height over ``domain`` under the given strict order:
    height = 1 + the maximal height of a strict predecessor (0 if none)."""
    preds: dict = {}
    for (pp, qq) in order_pairs:
        preds.setdefault(qq, []).append(pp)

    ht: dict = {}
    visiting: set = set()

    def depth(pair) -> int:
        if pair in ht:
            return ht[pair]
        if pair in visiting:
            raise PatternPresentError("the precedes order is cyclic: a forbidden pattern exists")
        visiting.add(pair)
        best = 0
        for p in preds.get(pair, ()):
            best = max(best, depth(p))
        visiting.discard(pair)
        ht[pair] = best + 1
        return ht[pair]

    for pair in domain:
        depth(pair)
    return HeightFunction(ht=ht, h=max(ht.values(), default=0))


def product_state_parts(name: str) -> tuple[str, tuple[int, ...], tuple[int, ...]]:
    """Split a constructed parity-automaton state name into the original
    state, the counter vector, and the flag vector."""
    base, chi_part, flag_part = name.rsplit("~", 2)
    chi = tuple(int(tok) for tok in chi_part.split("."))
    flags = tuple(int(ch) for ch in flag_part)
    return base, chi, flags


def build_parity(dvpa: Dvpa, cap: int = 1_000_000) -> Dvpa:
    """Construct the equivalent parity DVPA of a pattern-free stair-Buchi one.

    Product states pair the original state with one counter and one flag
    per chain height in 0..h.  Counters range over 0..m with
    m = |Q|^3 + 1; a transition into a final state resets all counters to
    0 and all flags to 1; calls and internals bump counter 0; a return
    popping a saved non-final state q'' bumps every counter up to the
    height of (q'', target); flags drop to 0 one step after their counter
    shows m.  The priority is 0 while every counter is below m, and
    2d + 1 + f(d) for the highest counter d at m otherwise.  Only the
    product states reachable from the initial configuration are built;
    exceeding ``cap`` raises :class:`CapacityError`.
    """
    analysis = _analyze(dvpa)
    if analysis.relation.reflexive_pairs():
        raise PatternPresentError(
            "the automaton contains a forbidden pattern; no equivalent parity DVPA exists")
    hf = _heights_from_analysis(analysis)
    h = hf.h
    m = len(dvpa.states) ** 3 + 1
    final = dvpa.acceptance.final_states
    n_counters = h + 1

    eng = dvpa._engine
    is_final = [q in final for q in eng.state_names]
    ht_tab: dict[tuple[int, int], int] = {
        (eng.state_id[a], eng.state_id[b]): v for (a, b), v in hf.ht.items()}

    zero = (0,) * n_counters
    ones = (1,) * n_counters
    init = (eng.init, zero, ones)

    def bump_base(state):
        _q, chi, fl = state
        new_chi = tuple((c % m) + (1 if i == 0 else 0) for i, c in enumerate(chi))
        new_fl = tuple(fl[i] if chi[i] < m else 0 for i in range(n_counters))
        return new_chi, new_fl

    def successor(state, q2: int, saved=None):
        if is_final[q2]:
            return (q2, zero, ones)
        if saved is None:
            chi, fl = bump_base(state)
            return (q2, chi, fl)
        qs, chi_s, fl_s = saved
        if not is_final[qs]:
            limit = ht_tab[(qs, q2)]
            chi = tuple((c % m) + (1 if i <= limit else 0) for i, c in enumerate(chi_s))
        else:
            chi = tuple(c % m for c in chi_s)
        fl = tuple(fl_s[i] if chi_s[i] < m else 0 for i in range(n_counters))
        return (q2, chi, fl)

    state_ids: dict[tuple, int] = {}
    state_list: list[tuple] = []
    sym_ids: dict[tuple, int] = {}
    sym_list: list[tuple] = []

    def intern_state(s) -> int:
        sid = state_ids.get(s)
        if sid is None:
            if len(state_list) >= cap:
                raise CapacityError(
                    f"parity construction exceeded the cap of {cap} product states "
                    f"(m={m}, h={h}); rerun with a larger cap")
            sid = len(state_list)
            state_ids[s] = sid
            state_list.append(s)
        return sid

    def intern_sym(g) -> int:
        gid = sym_ids.get(g)
        if gid is None:
            gid = len(sym_list)
            sym_ids[g] = gid
            sym_list.append(g)
        return gid

    BOTTOM = -1
    init_id = intern_state(init)
    surfaces: set[tuple[int, int]] = set()
    todo: list[tuple[int, int]] = []
    push_ctx: dict[int, set[int]] = {}
    pop_res: dict[int, set[int]] = {}
    int_edges_of: dict[int, list[tuple[int, int]]] = {}
    call_edges_of: dict[int, list[tuple[int, int, int]]] = {}
    ret_edges: dict[tuple[int, int, int], int] = {}

    def expand(sid: int) -> None:
        state = state_list[sid]
        q = state[0]
        ints = []
        for a, tgt in enumerate(eng.int_tab[q]):
            if tgt is not None:
                ints.append((a, intern_state(successor(state, tgt))))
        calls = []
        for a, ent in enumerate(eng.call_tab[q]):
            if ent is not None:
                tgt, z = ent
                calls.append((a, intern_state(successor(state, tgt)), intern_sym((z, sid))))
        int_edges_of[sid] = ints
        call_edges_of[sid] = calls

    def add_surface(sid: int, gid: int) -> None:
        if (sid, gid) not in surfaces:
            surfaces.add((sid, gid))
            todo.append((sid, gid))

    # the pop target ignores the popping state's own counters, so it can be
    # memoized per (stack symbol, base state, return symbol)
    ret_target_cache: dict[tuple[int, int, int], int] = {}

    add_surface(init_id, BOTTOM)
    while todo:
        sid, gid = todo.pop()
        if sid not in int_edges_of:
            expand(sid)
        state = state_list[sid]
        q = state[0]
        for _a, tid in int_edges_of[sid]:
            add_surface(tid, gid)
        for _a, tid, g2 in call_edges_of[sid]:
            ctx = push_ctx.setdefault(g2, set())
            if gid not in ctx:
                ctx.add(gid)
                for popped in pop_res.get(g2, ()):
                    add_surface(popped, gid)
            add_surface(tid, g2)
        if gid != BOTTOM:
            z, saved_sid = sym_list[gid]
            for (zz, a), tgt in eng.ret_tab[q].items():
                if zz != z:
                    continue
                key = (gid, q, a)
                tid = ret_target_cache.get(key)
                if tid is None:
                    tid = intern_state(successor(state, tgt, saved=state_list[saved_sid]))
                    ret_target_cache[key] = tid
                ret_edges[(sid, gid, a)] = tid
                res = pop_res.setdefault(gid, set())
                if tid not in res:
                    res.add(tid)
                    for below in push_ctx.get(gid, ()):
                        add_surface(tid, below)

    def state_name(s) -> str:
        q, chi, fl = s
        return f"{eng.state_names[q]}~{'.'.join(map(str, chi))}~{''.join(map(str, fl))}"

    def sym_name(g) -> str:
        z, sid = g
        return f"{eng.stack_names[z]}@{state_name(state_list[sid])}"

    def priority(s) -> int:
        _q, chi, fl = s
        at_max = [i for i, c in enumerate(chi) if c == m]
        if not at_max:
            return 0
        d = max(at_max)
        return 2 * d + 1 + fl[d]

    names = [state_name(s) for s in state_list]
    gnames = [sym_name(g) for g in sym_list]
    call_trans = {}
    internal_trans = {}
    for sid, calls in call_edges_of.items():
        for a, tid, g2 in calls:
            call_trans[(names[sid], eng.sym_names[a])] = (names[tid], gnames[g2])
    for sid, ints in int_edges_of.items():
        for a, tid in ints:
            internal_trans[(names[sid], eng.sym_names[a])] = names[tid]
    return_trans = {}
    for (sid, gid, a), tid in ret_edges.items():
        return_trans[(names[sid], gnames[gid], eng.sym_names[a])] = names[tid]
    priorities = {names[i]: priority(s) for i, s in enumerate(state_list)}
    return Dvpa(alphabet=dvpa.alphabet, states=tuple(names), initial=names[init_id],
                stack_symbols=tuple(gnames), call_trans=call_trans,
                return_trans=return_trans, internal_trans=internal_trans,
                acceptance=AcceptanceSpec("parity", priorities=priorities))


@dataclass(frozen=True)
class ReducerState:
    """Transducer bookkeeping after a move: the 0/1 memory (leftmost = top of
    stack), total symbols emitted, open input calls, and the count of 0s."""

    memory: str
    emitted: int
    open_calls: int
    zero_count: int


@dataclass(frozen=True)
class TransductionResult:
    output: tuple[str, ...]
    states: tuple[ReducerState, ...]
    move_outputs: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class Reducer:
    """The reduction strategy extracted from a forbidden pattern.

    Fed a word over the two-letter alphabet {c, r}, it emits words over
    the automaton's alphabet: a call plays w u v and pushes 01 onto the
    memory; a return strips the leading 1^i 0 and plays w x y y^i z.  The
    access word leads the automaton from its initial configuration to the
    pattern's q' state; all strategy runs stay above the stack frozen by
    the access word, because calls and internals never read the stack.
    """

    dvpa: Dvpa
    witness: PatternWitness
    access_word: tuple[str, ...]
    accepting_steps_per_block: int

    def transduce(self, moves: Sequence[str]) -> TransductionResult:
        wit = self.witness
        memory = ""
        out: list[str] = []
        open_calls = 0
        states = [ReducerState("", 0, 0, 0)]
        per_move: list[tuple[str, ...]] = []
        for mv in moves:
            if mv == "c":
                emission = wit.w + wit.u + wit.v
                memory = "01" + memory
                open_calls += 1
            elif mv == "r":
                if "0" not in memory:
                    raise ReducerDomainError(
                        "reducer input has a prefix with more returns than calls")
                i = memory.index("0")
                emission = wit.w + wit.x + wit.y + wit.y * i + wit.z
                memory = memory[i + 1:]
                open_calls -= 1
            else:
                raise ValidationError(f"reducer moves must be 'c' or 'r', got {mv!r}")
            out.extend(emission)
            per_move.append(tuple(emission))
            states.append(ReducerState(memory, len(out), open_calls, memory.count("0")))
        return TransductionResult(tuple(out), tuple(states), tuple(per_move))


def su_reducer(dvpa: Dvpa, witness: PatternWitness) -> Reducer:
    """Build the reduction transducer for a validated pattern witness."""
    validate_witness(dvpa, witness)
    reach = reachable(dvpa)
    access = reach.access_word(witness.q_prime)
    k = run_word(dvpa, Configuration(witness.q), witness.u).f_on_step_count
    return Reducer(dvpa=dvpa, witness=witness, access_word=access,
                   accepting_steps_per_block=k)
