"""Synthesis for coupling-constrained (superconducting) devices.

Blocks are embedded as trees on the device: the root sits on a well-connected
core qubit, SWAPs along low-error paths gather the block's active qubits into
one connected region, and each string walks that tree from the leaves to the
root. Small padded blocks run beside the main block when they can be routed
without touching its tree; otherwise they wait in a remain set that is
drained at the end.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping as TMapping, Sequence

from .circuit import CNOT, GY, GY_DAG, RZ, SWAP, Circuit, Gate, H, peephole_cancel
from .device import DeviceError, DeviceModel, cheapest_path
from .pauli import PauliBlock, PauliString, active_qubits, core_qubits, resolve_parameter
from .schedule import Schedule

log = logging.getLogger(__name__)

Order = list[tuple[PauliString, float]]


class Mapping:
    """Logical-to-physical bijection over every physical qubit.

    Logical indices at or above the program width are placeholders for
    unused physical qubits, so a SWAP is always a relabelling of two entries.
    """

    def __init__(self, phys_of: Sequence[int]):
        self.phys_of = list(phys_of)
        self.log_of = [0] * len(self.phys_of)
        for lq, pq in enumerate(self.phys_of):
            self.log_of[pq] = lq
        if sorted(self.phys_of) != list(range(len(self.phys_of))):
            raise ValueError("mapping is not a bijection")

    def copy(self) -> "Mapping":
        return Mapping(self.phys_of)

    def swap(self, a: int, b: int) -> None:
        la, lb = self.log_of[a], self.log_of[b]
        self.log_of[a], self.log_of[b] = lb, la
        self.phys_of[la], self.phys_of[lb] = b, a

    def layout(self) -> tuple[int, ...]:
        return tuple(self.phys_of)


@dataclass(frozen=True)
class EmbeddedTree:
    root: int
    parent: dict[int, int]
    hosts: frozenset[int]  # logical qubits on the tree

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    def depth_of(self, q: int) -> int:
        k = 0
        while q != self.root:
            q = self.parent[q]
            k += 1
        return k

    def leaves_to_root(self) -> list[int]:
        """Non-root nodes, deepest first (ties by physical index)."""
        return sorted(self.parent, key=lambda q: (-self.depth_of(q), q))


def initial_mapping(d: DeviceModel, n: int) -> Mapping:
    """Map logical 0..n-1 onto a densely connected region, in BFS order from its seed.

    The region grows from the highest-degree qubit by repeatedly adding the
    qubit with most edges into the region, then higher device degree, then
    lower index.
    """
    if n > d.n_physical:
        raise DeviceError(f"program needs {n} qubits, device {d.name} has {d.n_physical}")
    if n == 0:
        return Mapping(range(d.n_physical))
    seed = max(range(d.n_physical), key=lambda q: (d.degree(q), -q))
    chosen = {seed}
    while len(chosen) < n:
        best = None
        for q in range(d.n_physical):
            if q in chosen:
                continue
            links = sum(1 for v in d.adjacency[q] if v in chosen)
            key = (links, d.degree(q), -q)
            if best is None or key > best[0]:
                best = (key, q)
        chosen.add(best[1])
    order = [seed]
    seen = {seed}
    todo = deque([seed])
    while todo:
        u = todo.popleft()
        for v in d.adjacency[u]:
            if v in chosen and v not in seen:
                seen.add(v)
                order.append(v)
                todo.append(v)
    order += sorted(chosen - seen)
    order += [q for q in range(d.n_physical) if q not in chosen]
    return Mapping(order)


def _component(d: DeviceModel, start: int, allowed: set[int]) -> set[int]:
    comp = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for v in d.adjacency[u]:
            if v in allowed and v not in comp:
                comp.add(v)
                todo.append(v)
    return comp


LOOKAHEAD_CANDIDATES = 4
WINDOW = 8

# active-qubit sets of upcoming blocks, nearest first
Window = tuple[frozenset[int], ...]


def _window(blocks: Iterable[PauliBlock], tail: Window = ()) -> Window:
    sets = [active_qubits(b) for b in blocks]
    return tuple((sets + list(tail))[:WINDOW])


def _window_cost(window: Window, m: Mapping, d: DeviceModel) -> int:
    """Cumulative distance of the upcoming blocks; the first counts double."""
    return sum((2 if i == 0 else 1) * _pair_distance_qubits(w, m, d) for i, w in enumerate(window))


def _pair_distance_qubits(qubits: Iterable[int], m: Mapping, d: DeviceModel) -> int:
    phys = [m.phys_of[q] for q in sorted(qubits)]
    return sum(d.hops[a][c] for a, c in itertools.combinations(phys, 2))


def _gather(active: frozenset[int], root_l: int, m: Mapping, d: DeviceModel) -> tuple[list[Gate], set[int]]:
    """SWAP active qubits along cheapest paths until they form one region with the root."""
    swaps: list[Gate] = []

    def region() -> set[int]:
        return _component(d, m.phys_of[root_l], {m.phys_of[q] for q in active})

    comp = region()
    while len(comp) < len(active):
        best = None
        for q in sorted(active):
            src = m.phys_of[q]
            if src in comp:
                continue
            for t in sorted(comp):
                key = (d.path_cost(src, t), cheapest_path(d, src, t))
                if best is None or key < best:
                    best = key
        path = best[1]
        # walk the qubit up to the vertex next to the region
        for u, v in zip(path[:-2], path[1:-1]):
            swaps.append(SWAP(u, v))
            m.swap(u, v)
        comp = region()
    return swaps, comp


def _meet(
    active: frozenset[int], root_l: int, m: Mapping, d: DeviceModel, lookahead: Window
) -> tuple[list[Gate], set[int]]:
    """Join two qubits by walking both along one cheapest path.

    Every split of the path costs the same SWAPs; the split leaving the
    lookahead qubits closest together wins, ties toward moving only the non-root.
    """
    other = next(q for q in active if q != root_l)
    path = cheapest_path(d, m.phys_of[other], m.phys_of[root_l])
    hops = len(path) - 2
    if hops <= 0:
        return [], {path[0], path[-1]}
    best = None
    for k in range(hops, -1, -1):
        # ``other`` advances k steps, the root retreats the rest
        sw = [SWAP(path[i], path[i + 1]) for i in range(k)]
        sw += [SWAP(path[-1 - i], path[-2 - i]) for i in range(hops - k)]
        trial = m.copy()
        for g in sw:
            trial.swap(*g.qubits)
        score = _window_cost(lookahead, trial, d)
        if best is None or score < best[0]:
            best = (score, sw)
    for g in best[1]:
        m.swap(*g.qubits)
    return best[1], {m.phys_of[q] for q in active}


def _pick_root(
    active: frozenset[int],
    core: set[int],
    m: Mapping,
    d: DeviceModel,
    prev_core: set[int],
    lookahead: Window,
) -> int:
    pool = sorted(core) if core else sorted(active)
    phys = {m.phys_of[q] for q in pool}
    size = {q: len(_component(d, m.phys_of[q], phys)) for q in pool}
    top = max(size.values())
    pool = [q for q in pool if size[q] == top]
    if len(pool) == 1:
        return pool[0]
    # cheapest estimated gathering, then the mapping that best suits the next block
    est = {q: sum(d.hops[m.phys_of[q]][m.phys_of[a]] for a in active) for q in pool}
    low = min(est.values())
    pool = [q for q in pool if est[q] == low]
    pool.sort(key=lambda q: (q not in prev_core, q))
    if len(pool) == 1 or not lookahead:
        return pool[0]
    scored = []
    for rank, q in enumerate(pool[:LOOKAHEAD_CANDIDATES]):
        trial = m.copy()
        swaps, _ = _gather(active, q, trial, d)
        scored.append((len(swaps), _window_cost(lookahead, trial, d), rank, q))
    return min(scored)[-1]


def build_block_tree(
    b: PauliBlock,
    m: Mapping,
    d: DeviceModel,
    prev_core: Iterable[int] = (),
    lookahead: Window = (),
) -> tuple[EmbeddedTree, list[Gate], Mapping]:
    """Gather the block's active qubits around a root and return the embedding tree.

    ``lookahead`` lists the active qubits of the blocks expected next; it
    only breaks ties between equally cheap embeddings. The input mapping is left
    untouched; the returned mapping reflects the SWAPs.
    """
    m = m.copy()
    active = active_qubits(b)
    core = set(core_qubits(b))
    root_l = _pick_root(active, core, m, d, set(prev_core), lookahead)
    if len(active) == 2 and lookahead:
        swaps, comp = _meet(active, root_l, m, d, lookahead)
    else:
        swaps, comp = _gather(active, root_l, m, d)
    root = m.phys_of[root_l]
    parent: dict[int, int] = {}
    seen = {root}
    todo = deque([root])
    while todo:
        u = todo.popleft()
        for v in d.adjacency[u]:
            if v in comp and v not in seen:
                seen.add(v)
                parent[v] = u
                todo.append(v)
    return EmbeddedTree(root, parent, frozenset(active)), swaps, m


def _string_gates(p: PauliString, angle: float, t: EmbeddedTree, m: Mapping) -> list[Gate]:
    for q in p.support:
        if q not in t.hosts:
            raise ValueError(f"string {p} uses qubit {q} outside the embedded tree")
    opening, closing = [], []
    for q in sorted(p.support):
        pq = m.phys_of[q]
        if p[q] == "X":
            opening.append(H(pq))
            closing.append(H(pq))
        elif p[q] == "Y":
            opening.append(GY_DAG(pq))
            closing.append(GY(pq))
    n_log = len(p)

    def on(pq: int) -> bool:
        lq = m.log_of[pq]
        return lq < n_log and p[lq] != "I"

    walk: list[Gate] = []
    for child in t.leaves_to_root():
        par = t.parent[child]
        if not on(child):
            continue
        if on(par):
            walk.append(CNOT(child, par))
        else:
            walk.append(SWAP(child, par))
            m.swap(child, par)
    if not on(t.root):
        raise AssertionError("parity did not reach the root")
    centre = [RZ(t.root, angle)]
    for g in reversed(walk):
        if g.kind == "SWAP":
            m.swap(*g.qubits)
    return opening + walk + centre + walk[::-1] + closing


def sc_synthesize_block(
    b: PauliBlock, t: EmbeddedTree, m: Mapping, bindings: TMapping[str, float] | None = None
) -> tuple[list[Gate], Order]:
    """Gates for every string of ``b`` on tree ``t``; ``m`` is updated in place."""
    scale = resolve_parameter(b.parameter, bindings)
    gates: list[Gate] = []
    order: Order = []
    for ws in b.strings:
        if not ws.string.support:
            continue
        angle = scale * ws.weight
        gates += _string_gates(ws.string, angle, t, m)
        order.append((ws.string, angle))
    return gates, order


def _pair_distance(b: PauliBlock, m: Mapping, d: DeviceModel) -> int:
    return _pair_distance_qubits(active_qubits(b), m, d)


def _nearest(blocks: Sequence[PauliBlock], m: Mapping, d: DeviceModel) -> int:
    return min(range(len(blocks)), key=lambda i: (_pair_distance(blocks[i], m, d), i))


def _by_distance(blocks: Sequence[PauliBlock], m: Mapping, d: DeviceModel) -> list[PauliBlock]:
    keyed = sorted(range(len(blocks)), key=lambda i: (_pair_distance(blocks[i], m, d), i))
    return [blocks[i] for i in keyed[:WINDOW]]


def _units(b: PauliBlock) -> list[PauliBlock]:
    """A block without core qubits has no shared root; its strings are routed one by one."""
    strings = [ws for ws in b.strings if ws.string.support]
    if core_qubits(b) or len(strings) <= 1:
        return [b]
    return [PauliBlock((ws,), b.parameter) for ws in strings]


class _Router:
    def __init__(self, d: DeviceModel, n: int, bindings, initial: Sequence[int] | None = None):
        self.d = d
        self.bindings = bindings
        self.m = initial_mapping(d, n) if initial is None else complete_mapping(d, initial)
        self.gates: list[Gate] = []
        self.order: Order = []
        self.prev_core: set[int] = set()

    def plan(self, b: PauliBlock, lookahead: Window, guard: frozenset[int] = frozenset()):
        """Route every unit of ``b`` on a scratch mapping; None if a SWAP touches ``guard``."""
        m = self.m.copy()
        prev_core = self.prev_core
        units = _units(b)
        out: list[Gate] = []
        order: Order = []
        nodes: set[int] = set()
        while units:
            u = units.pop(_nearest(units, m, self.d))
            nxt = _window(_by_distance(units, m, self.d), lookahead)
            tree, swaps, m = build_block_tree(u, m, self.d, prev_core, nxt)
            if guard and (tree.nodes & guard or any(q in guard for g in swaps for q in g.qubits)):
                return None
            g, o = sc_synthesize_block(u, tree, m, self.bindings)
            out += swaps + g
            order += o
            nodes |= tree.nodes
            prev_core = set(core_qubits(u))
        return out, order, m, frozenset(nodes), prev_core

    def commit(self, result) -> frozenset[int]:
        gates, order, m, nodes, prev_core = result
        self.gates += gates
        self.order += order
        self.m = m
        self.prev_core = prev_core
        return nodes


def complete_mapping(d: DeviceModel, placement: Sequence[int]) -> Mapping:
    """Extend a logical-to-physical placement with the unused physical qubits in index order."""
    placement = [int(q) for q in placement]
    if len(set(placement)) != len(placement) or any(not 0 <= q < d.n_physical for q in placement):
        raise DeviceError(f"placement {placement} is not injective onto {d.name}")
    used = set(placement)
    return Mapping(placement + [q for q in range(d.n_physical) if q not in used])


def sc_synthesize_with_order(
    s: Schedule,
    d: DeviceModel,
    bindings: TMapping[str, float] | None = None,
    initial: Sequence[int] | None = None,
) -> tuple[Circuit, Order]:
    """Route and synthesize ``s`` on ``d``.

    ``initial`` optionally fixes where logical qubits start (logical i on
    physical ``initial[i]``); by default the densest region is used.
    """
    if s.n_qubits > d.n_physical:
        raise DeviceError(f"program needs {s.n_qubits} qubits, device {d.name} has {d.n_physical}")
    if initial is not None and len(initial) != s.n_qubits:
        raise DeviceError(f"placement covers {len(initial)} qubits, program has {s.n_qubits}")
    r = _Router(d, s.n_qubits, bindings, initial)
    start = r.m.layout()
    remain: list[PauliBlock] = []
    layers = list(s.layers)
    for li, layer in enumerate(layers):
        upcoming = [b for layer2 in layers[li + 1 : li + 2] for b in layer2.blocks]
        nxt = _window(upcoming)
        guard = r.commit(r.plan(layer.main_block, nxt))
        core_after_main = r.prev_core
        # padded blocks are routed nearest-first, like the remain set
        pads = list(layer.padded_blocks)
        while pads:
            k = _nearest(pads, r.m, d)
            b = pads.pop(k)
            ahead = _window(_by_distance(pads, r.m, d), nxt)
            res = r.plan(b, ahead, guard)
            if res is None:
                remain.append(b)
            else:
                r.commit(res)
        r.prev_core = core_after_main

    while remain:
        b = remain.pop(_nearest(remain, r.m, d))
        nxt = _window(_by_distance(remain, r.m, d))
        r.commit(r.plan(b, nxt))

    c = Circuit(d.n_physical, tuple(r.gates), start, r.m.layout())
    return peephole_cancel(c), r.order


def sc_synthesize(
    s: Schedule,
    d: DeviceModel,
    bindings: TMapping[str, float] | None = None,
    initial: Sequence[int] | None = None,
) -> Circuit:
    return sc_synthesize_with_order(s, d, bindings, initial)[0]


def naive_route(c: Circuit, d: DeviceModel) -> Circuit:
    """Per-gate router: SWAP the control toward the target until they touch."""
    m = initial_mapping(d, c.n_qubits)
    start = m.layout()
    out: list[Gate] = []
    for g in c:
        if len(g.qubits) == 1:
            out.append(Gate(g.kind, (m.phys_of[g.qubits[0]],), g.angle))
            continue
        a, b = (m.phys_of[q] for q in g.qubits)
        if not d.adjacent(a, b):
            path = cheapest_path(d, a, b)
            for u, v in zip(path[:-2], path[1:-1]):
                out.append(SWAP(u, v))
                m.swap(u, v)
            a = m.phys_of[g.qubits[0]]
        out.append(Gate(g.kind, (a, b), g.angle))
    return Circuit(d.n_physical, tuple(out), start, m.layout())


def coupling_violations(c: Circuit, d: DeviceModel) -> list[Gate]:
    return [g for g in c if len(g.qubits) == 2 and not d.adjacent(*g.qubits)]
