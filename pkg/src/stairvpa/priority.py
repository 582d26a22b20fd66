"""Minimal priority relabeling of finite priority graphs.

Every cycle of the output classifies (by the parity of its maximal label)
exactly as it does under the input priorities, and the output uses one
contiguous range of labels starting at 0 or 1, as small as the graph
permits.  The scheme peels each strongly connected component from its
maximal priority downward: remove the top-priority vertices, relabel the
remainder recursively, and give the removed vertices the smallest value
of the right parity that dominates the remainder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .core import AcceptanceSpec, Dvpa, ValidationError
from .summaries import step_graph


@dataclass(frozen=True)
class PriorityGraph:
    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    priority: dict = field(compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", frozenset(self.edges))
        object.__setattr__(self, "priority", dict(self.priority))
        vs = set(self.vertices)
        for (a, b) in self.edges:
            if a not in vs or b not in vs:
                raise ValidationError(f"edge ({a!r},{b!r}) uses an undeclared vertex")
        missing = vs - set(self.priority)
        if missing:
            raise ValidationError(f"priority missing for vertices {sorted(missing)}")


@dataclass(frozen=True)
class PriorityAssignment:
    """A relabeling, the size of its contiguous used range, and the parity
    of the smallest used value."""

    relabel: dict = field(compare=False)
    count: int = 0
    base_parity: int = 0


def _sccs(vertices: Iterable[str], succ: Mapping[str, Iterable[str]]) -> list[list[str]]:
    """Tarjan's algorithm, iterative to dodge the recursion limit."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    out: list[list[str]] = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(succ.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ.get(w, ()))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(comp)
    return out


def _cyclic_components(vertices: Iterable[str], edges: frozenset) -> list[list[str]]:
    succ: dict[str, list[str]] = {}
    for a, b in edges:
        succ.setdefault(a, []).append(b)
    comps = _sccs(vertices, succ)
    return [c for c in comps
            if len(c) > 1 or (c[0], c[0]) in edges]


def compress_labels(labels: Mapping[str, int]) -> dict[str, int]:
    """Close gaps in the used label values, keeping order and parity.

    Sorted used values map to a contiguous run that starts at 0 or 1;
    consecutive used values of equal parity collapse onto one label.
    Idempotent.
    """
    if not labels:
        return {}
    used = sorted(set(labels.values()))
    new_of: dict[int, int] = {used[0]: used[0] % 2}
    for prev, cur in zip(used, used[1:]):
        new_of[cur] = new_of[prev] + (0 if (cur - prev) % 2 == 0 else 1)
    return {v: new_of[val] for v, val in labels.items()}


def min_priorities(graph: PriorityGraph) -> PriorityAssignment:
    """Relabel ``graph`` with the fewest priorities that classify every
    cycle as the input does.

    Vertices on no cycle at all take the smallest label any cycle uses
    (or the single odd label 1 if the graph is cycle-free: one priority
    suffices to reject everything).
    """
    labels: dict[str, int] = {}
    edges = graph.edges

    def label_component(comp: list[str]) -> int:
        members = set(comp)
        top_prio = max(graph.priority[v] for v in comp)
        parity = top_prio % 2
        remainder = [v for v in comp if graph.priority[v] != top_prio]
        rem_set = set(remainder)
        rem_edges = frozenset((a, b) for (a, b) in edges
                              if a in rem_set and b in rem_set)
        sub = _cyclic_components(remainder, rem_edges)
        if not sub:
            top = parity
        else:
            ell = max(label_component(c) for c in sub)
            top = ell if ell % 2 == parity else ell + 1
        for v in members:
            if v not in labels:
                labels[v] = top
        return top

    for comp in _cyclic_components(graph.vertices, edges):
        label_component(comp)

    if labels:
        floor = min(labels.values())
    else:
        floor = 1
    for v in graph.vertices:
        labels.setdefault(v, floor)
    labels = compress_labels(labels)
    used = sorted(set(labels.values()))
    return PriorityAssignment(relabel=labels, count=used[-1] - used[0] + 1 if used else 0,
                              base_parity=used[0] % 2 if used else 0)


def classification_equivalent(graph: PriorityGraph, pi: Mapping[str, int],
                              pi2: Mapping[str, int]) -> bool:
    """Do two priority maps classify every cycle of ``graph`` identically?

    Checks every strongly connected vertex subset that carries a cycle
    through all its members; exponential, so guarded to 12 vertices.
    """
    verts = graph.vertices
    if len(verts) > 12:
        raise ValidationError("classification_equivalent is an exhaustive oracle; "
                              "it only accepts graphs with at most 12 vertices")
    idx = {v: i for i, v in enumerate(verts)}
    succ_masks = [0] * len(verts)
    for a, b in graph.edges:
        succ_masks[idx[a]] |= 1 << idx[b]
    n = len(verts)
    for mask in range(1, 1 << n):
        members = [i for i in range(n) if mask >> i & 1]
        if len(members) == 1:
            i = members[0]
            if not (succ_masks[i] >> i & 1):
                continue
        elif not _strongly_connected(members, succ_masks, mask):
            continue
        m1 = max(pi[verts[i]] for i in members)
        m2 = max(pi2[verts[i]] for i in members)
        if m1 % 2 != m2 % 2:
            return False
    return True


def _strongly_connected(members: list[int], succ_masks: list[int], mask: int) -> bool:
    def sweep(adj: list[int]) -> int:
        start = members[0]
        seen = 1 << start
        todo = [start]
        while todo:
            nxt = adj[todo.pop()] & mask & ~seen
            while nxt:
                b = nxt & -nxt
                seen |= b
                todo.append(b.bit_length() - 1)
                nxt ^= b
        return seen

    if sweep(succ_masks) != mask:
        return False
    rev = [0] * len(succ_masks)
    for i in members:
        nxt = succ_masks[i] & mask
        while nxt:
            b = nxt & -nxt
            rev[b.bit_length() - 1] |= 1 << i
            nxt ^= b
    return sweep(rev) == mask


def stair_index(dvpa: Dvpa) -> tuple[int, Dvpa]:
    """Minimal stair priority count, plus the relabeled automaton.

    Builds the successive-step graph, minimizes priorities on it, and
    writes the new labels back; states that never occur on steps take the
    smallest used label.  Accepts stair-parity and stair-Buchi input and
    always returns a stair-parity automaton.
    """
    graph = step_graph(dvpa)
    assignment = min_priorities(PriorityGraph(graph.vertices, graph.edges,
                                              graph.vertex_priority))
    floor = min(assignment.relabel.values())
    priorities = {q: assignment.relabel.get(q, floor) for q in dvpa.states}
    relabeled = Dvpa(alphabet=dvpa.alphabet, states=dvpa.states, initial=dvpa.initial,
                     stack_symbols=dvpa.stack_symbols, call_trans=dvpa.call_trans,
                     return_trans=dvpa.return_trans, internal_trans=dvpa.internal_trans,
                     acceptance=AcceptanceSpec("stair-parity", priorities=priorities))
    return assignment.count, relabeled
