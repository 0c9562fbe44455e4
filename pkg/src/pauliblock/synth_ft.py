"""Synthesis for an all-to-all (fault-tolerant) backend.

Each Pauli exponential becomes a basis layer, a CNOT tree into a root, an RZ
on the root and the mirrored tree. The tree shape is free; this module picks
shapes (and string order inside blocks) so that neighbouring exponentials
cancel as many gates as possible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .circuit import CNOT, GY, GY_DAG, RZ, Circuit, Gate, H, IncrementalCircuit, peephole_cancel
from .pauli import PauliBlock, PauliString, resolve_parameter
from .schedule import Layer, Schedule, string_depth

SMALL_SUPPORT = 3
MAX_STRING_CANDIDATES = 8
EXHAUSTIVE_BLOCK = 12


@dataclass(frozen=True)
class TreePlan:
    """CNOT edges (child, parent) in leaves-to-root order, plus the root."""

    edges: tuple[tuple[int, int], ...]
    root: int

    def nodes(self) -> frozenset[int]:
        return frozenset([self.root] + [q for e in self.edges for q in e])

    def order(self) -> list[int]:
        """Qubits in the order they are folded in, root last."""
        seen: list[int] = []
        for child, _ in self.edges:
            if child not in seen:
                seen.append(child)
        return seen + [self.root]

    def validate(self, support: frozenset[int]) -> None:
        if self.nodes() != support:
            raise ValueError(f"plan spans {sorted(self.nodes())}, string support is {sorted(support)}")
        if len(self.edges) != len(support) - 1:
            raise ValueError("plan is not a tree")
        parent: dict[int, int] = {}
        for child, par in self.edges:
            if child == self.root or child in parent:
                raise ValueError(f"qubit {child} has two parents or is the root")
            parent[child] = par
        done: set[int] = set()
        for child, par in self.edges:
            for c2, p2 in self.edges:
                if p2 == child and c2 not in done:
                    raise ValueError(f"edge {child}->{par} emitted before its subtree")
            done.add(child)
        for q in support:
            seen = set()
            while q != self.root:
                if q in seen or q not in parent:
                    raise ValueError("plan is disconnected")
                seen.add(q)
                q = parent[q]


def chain_plan(order: Sequence[int]) -> TreePlan:
    order = list(order)
    return TreePlan(tuple(zip(order[:-1], order[1:])), order[-1])


def naive_plan(p: PauliString) -> TreePlan:
    return chain_plan(sorted(p.support))


def synth_string_gates(p: PauliString, angle: float, plan: TreePlan | None = None) -> list[Gate]:
    support = p.support
    if not support:
        raise ValueError("cannot synthesize an identity string")
    if plan is None:
        plan = naive_plan(p)
    plan.validate(support)
    opening, closing = [], []
    for q in sorted(support):
        if p[q] == "X":
            opening.append(H(q))
            closing.append(H(q))
        elif p[q] == "Y":
            opening.append(GY_DAG(q))
            closing.append(GY(q))
    left = [CNOT(c, t) for c, t in plan.edges]
    return opening + left + [RZ(plan.root, angle)] + left[::-1] + closing


def synth_string(p: PauliString, angle: float, plan: TreePlan | None = None) -> Circuit:
    """Circuit for exp(-i angle/2 P) with RZ(t) = exp(-i t Z/2)."""
    return Circuit(p.n_qubits, tuple(synth_string_gates(p, angle, plan)))


# ---------------------------------------------------------------------------
# layer pairing


def _layer_profiles(layer: Layer) -> tuple[dict[int, str], dict[int, str]]:
    head: dict[int, str] = {}
    tail: dict[int, str] = {}
    for b in layer.blocks:
        for ws in b.strings:
            for q in ws.string.support:
                head.setdefault(q, ws.string[q])
                tail[q] = ws.string[q]
    return head, tail


def layer_overlap(first: Layer, second: Layer) -> int:
    _, tail = _layer_profiles(first)
    head, _ = _layer_profiles(second)
    return sum(1 for q, a in tail.items() if head.get(q) == a)


def pair_layers(s: Schedule | Sequence[Layer]) -> tuple[list[tuple[int, int]], list[int]]:
    """Greedily pair adjacent layers by boundary overlap.

    Returns index pairs ``(i, i+1)`` in the order chosen, and the unpaired
    layer indices in schedule order.
    """
    layers = list(s.layers if isinstance(s, Schedule) else s)
    scores = [layer_overlap(layers[i], layers[i + 1]) for i in range(len(layers) - 1)]
    used: set[int] = set()
    pairs: list[tuple[int, int]] = []
    while True:
        best = None
        for i, sc in enumerate(scores):
            if i in used or i + 1 in used:
                continue
            if best is None or sc > scores[best]:
                best = i
        if best is None:
            break
        pairs.append((best, best + 1))
        used.update((best, best + 1))
    leftovers = [i for i in range(len(layers)) if i not in used]
    return pairs, leftovers


# ---------------------------------------------------------------------------
# plan candidates


def _shared(a: PauliString, b: PauliString) -> list[int]:
    return [q for q in range(len(a)) if a[q] != "I" and a[q] == b[q]]


def string_overlap(a: PauliString, b: PauliString) -> int:
    return len(_shared(a, b))


def aligned_plan(p: PauliString, prev: PauliString, prev_plan: TreePlan) -> TreePlan | None:
    """Chain whose leaf end follows the previous plan through the shared qubits."""
    shared = set(_shared(p, prev))
    if not shared:
        return None
    lead = [q for q in prev_plan.order() if q in shared]
    rest = sorted(p.support - shared)
    return chain_plan(lead + rest)


def grouped_plan(p: PauliString, successors: Sequence[PauliString]) -> TreePlan | None:
    """Tree with one chain subtree per run shared with a successor string.

    Each subtree sits at the leaf end so the successors can retrace it with
    aligned plans; subtree roots and the remaining qubits are chained to the root.
    """
    groups: list[list[int]] = []
    placed: set[int] = set()
    for s in successors:
        g = [q for q in _shared(p, s) if q not in placed]
        if g:
            groups.append(g)
            placed.update(g)
    if not groups:
        return None
    edges: list[tuple[int, int]] = []
    spine: list[int] = []
    for g in groups:
        edges.extend(zip(g[:-1], g[1:]))
        spine.append(g[-1])
    spine += sorted(p.support - placed)
    edges.extend(zip(spine[:-1], spine[1:]))
    return TreePlan(tuple(edges), spine[-1])


def candidate_plans(
    p: PauliString,
    context: Sequence[tuple[PauliString, TreePlan]] = (),
    successors: Sequence[PauliString] = (),
) -> list[TreePlan]:
    plans: list[TreePlan] = []
    grouped = grouped_plan(p, successors) if successors else None
    if grouped is not None:
        plans.append(grouped)
    for prev, prev_plan in context:
        ap = aligned_plan(p, prev, prev_plan)
        if ap is not None:
            plans.append(ap)
    support = sorted(p.support)
    if len(support) <= SMALL_SUPPORT:
        plans.extend(chain_plan(perm) for perm in itertools.permutations(support))
    else:
        plans.append(chain_plan(support))
        plans.append(chain_plan(support[::-1]))
    out, seen = [], set()
    for pl in plans:
        if pl not in seen:
            seen.add(pl)
            out.append(pl)
    return out


# ---------------------------------------------------------------------------
# emission


class _Emitter:
    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.circ = IncrementalCircuit(n_qubits)
        self.last_on: dict[int, tuple[PauliString, TreePlan]] = {}
        self.order: list[tuple[PauliString, float]] = []
        self._alone: dict[PauliString, int] = {}
        self.level: dict[int, int] = {}

    def context(self, p: PauliString) -> list[tuple[PauliString, TreePlan]]:
        out = []
        for q in sorted(p.support):
            item = self.last_on.get(q)
            if item is not None and item not in out:
                out.append(item)
        return out

    def frontier_overlap(self, p: PauliString) -> int:
        return sum(1 for q in p.support if q in self.last_on and self.last_on[q][0][q] == p[q])

    def best_plan(
        self, p: PauliString, angle: float, successors: Sequence[PauliString] = ()
    ) -> tuple[int, TreePlan]:
        best = None
        for plan in candidate_plans(p, self.context(p), successors):
            gates = synth_string_gates(p, angle, plan)
            if successors:
                for s in successors:
                    ap = aligned_plan(s, p, plan) or naive_plan(s)
                    gates = gates + synth_string_gates(s, 1.0, ap)
            cost = self.circ.price(gates)
            if best is None or cost < best[0]:
                best = (cost, plan)
        return best

    def standalone(self, p: PauliString) -> int:
        """Cheapest gate count of ``p`` in isolation (angle chosen away from 0 mod 2 pi)."""
        if p not in self._alone:
            ic = IncrementalCircuit(self.n_qubits)
            self._alone[p] = min(
                ic.price(synth_string_gates(p, 0.5, plan)) for plan in candidate_plans(p)
            )
        return self._alone[p]

    def ready(self, p: PauliString) -> int:
        """Estimated time at which every qubit of ``p`` is free."""
        return max((self.level.get(q, 0) for q in p.support), default=0)

    def emit(self, p: PauliString, angle: float, plan: TreePlan) -> None:
        self.circ.extend(synth_string_gates(p, angle, plan))
        done = self.ready(p) + string_depth(p)
        for q in p.support:
            self.level[q] = done
        for q in p.support:
            self.last_on[q] = (p, plan)
        self.order.append((p, angle))


def _junction_saving(a: PauliString, b: PauliString, cache: dict) -> int:
    key = (a, b)
    if key not in cache:
        n = len(a)
        alone = []
        for s in (a, b):
            e = _Emitter(n)
            alone.append(e.best_plan(s, 0.5)[0])
        joint, _ = _Emitter(n).best_plan(a, 0.5, successors=[b])
        cache[key] = alone[0] + alone[1] - joint
    return cache[key]


def _choose_tails(
    first: Layer, second: Layer, cache: dict
) -> dict[int, tuple[int, list[PauliString]]]:
    """For each block of ``first``: index of its junction string and the strings it faces."""
    pool = [ws.string for b in second.blocks for ws in b.strings]
    out = {}
    for bi, b in enumerate(first.blocks):
        best = None
        for si, ws in enumerate(b.strings):
            if not ws.string.support:
                continue
            facing = [s for s in pool if string_overlap(ws.string, s) > 0]
            facing.sort(key=lambda s: -string_overlap(ws.string, s))
            facing = facing[:MAX_STRING_CANDIDATES]
            gain = max((_junction_saving(ws.string, s, cache) for s in facing), default=0)
            if best is None or gain > best[0]:
                best = (gain, si, facing)
        if best is None:
            continue
        gain, si, facing = best
        if gain > 0:
            succ = []
            for blk in second.blocks:
                cands = [ws.string for ws in blk.strings if ws.string in facing]
                if cands:
                    s2 = max(cands, key=lambda s: _junction_saving(b.strings[si].string, s, cache))
                    succ.append(s2)
            out[bi] = (si, succ)
    return out


def _emit_block(
    em: _Emitter,
    b: PauliBlock,
    scale: float,
    tail: tuple[int, list[PauliString]] | None,
) -> None:
    # identity strings only contribute a global phase
    remaining = [k for k, ws in enumerate(b.strings) if ws.string.support]
    if tail is not None:
        remaining.remove(tail[0])
    prev: PauliString | None = None
    while remaining:
        cands = remaining
        if len(remaining) > EXHAUSTIVE_BLOCK:
            if prev is None:
                key = lambda k: (-em.frontier_overlap(b.strings[k].string), em.ready(b.strings[k].string), k)
            else:
                key = lambda k: (-string_overlap(prev, b.strings[k].string), em.ready(b.strings[k].string), k)
            cands = sorted(remaining, key=key)[:MAX_STRING_CANDIDATES]
            # keep one candidate that can start earliest so idle qubits get work
            early = min(remaining, key=lambda k: (em.ready(b.strings[k].string), k))
            if early not in cands:
                cands.append(early)
        best = None
        for k in cands:
            ws = b.strings[k]
            cost, plan = em.best_plan(ws.string, scale * ws.weight)
            # rank by gates saved, since every string is emitted eventually
            cost -= em.standalone(ws.string)
            key = (cost, em.ready(ws.string), k)
            if best is None or key < best[0]:
                best = (key, k, plan)
        _, k, plan = best
        ws = b.strings[k]
        remaining.remove(k)
        # let the plan anticipate the block string that shares the most with it
        follow = [j for j in remaining if string_overlap(ws.string, b.strings[j].string) > 0]
        if follow:
            nxt = max(follow, key=lambda j: (string_overlap(ws.string, b.strings[j].string), -j))
            _, plan = em.best_plan(ws.string, scale * ws.weight, successors=[b.strings[nxt].string])
        em.emit(ws.string, scale * ws.weight, plan)
        prev = ws.string
    if tail is not None:
        ws = b.strings[tail[0]]
        angle = scale * ws.weight
        _, plan = em.best_plan(ws.string, angle, successors=tail[1])
        em.emit(ws.string, angle, plan)


def ft_synthesize_with_order(
    s: Schedule, bindings: Mapping[str, float] | None = None
) -> tuple[Circuit, list[tuple[PauliString, float]]]:
    """Synthesize and also return the (string, angle) order the circuit realizes."""
    layers = list(s.layers)
    scales = [[resolve_parameter(b.parameter, bindings) for b in layer.blocks] for layer in layers]
    pairs, _ = pair_layers(layers)
    cache: dict = {}
    tails: dict[tuple[int, int], tuple[int, list[PauliString]]] = {}
    for i, j in pairs:
        for bi, t in _choose_tails(layers[i], layers[j], cache).items():
            tails[(i, bi)] = t
    em = _Emitter(s.n_qubits)
    for li, layer in enumerate(layers):
        for bi, b in enumerate(layer.blocks):
            _emit_block(em, b, scales[li][bi], tails.get((li, bi)))
    circ = peephole_cancel(em.circ.circuit())
    return circ, em.order


def ft_synthesize(s: Schedule, bindings: Mapping[str, float] | None = None) -> Circuit:
    return ft_synthesize_with_order(s, bindings)[0]


def naive_synthesize_with_order(
    s: Schedule, bindings: Mapping[str, float] | None = None
) -> tuple[Circuit, list[tuple[PauliString, float]]]:
    """Chain trees in schedule order with no cancellation; the baseline synthesis."""
    gates: list[Gate] = []
    order = []
    for b in s.blocks():
        scale = resolve_parameter(b.parameter, bindings)
        for ws in b.strings:
            if not ws.string.support:
                continue
            angle = scale * ws.weight
            gates += synth_string_gates(ws.string, angle)
            order.append((ws.string, angle))
    return Circuit(s.n_qubits, tuple(gates)), order


def naive_synthesize(s: Schedule, bindings: Mapping[str, float] | None = None) -> Circuit:
    return naive_synthesize_with_order(s, bindings)[0]
