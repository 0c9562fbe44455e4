"""Gate-level circuits: metrics, peephole cancellation and OpenQASM output."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SINGLE_KINDS = ("H", "GY", "GY_DAG", "RZ")
TWO_KINDS = ("CNOT", "SWAP")
SWAP_CNOT_COST = 3
SWAP_DEPTH = 3
ANGLE_TOL = 1e-12

# GY = S.H, so GY Z GY^dag = Y.
GY_MATRIX = np.array([[1, 1], [1j, -1j]], dtype=complex) / math.sqrt(2)
H_MATRIX = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if self.kind in SINGLE_KINDS:
            if len(self.qubits) != 1:
                raise ValueError(f"{self.kind} acts on one qubit")
        elif self.kind in TWO_KINDS:
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError(f"{self.kind} needs two distinct qubits")
        else:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "RZ" and self.angle is None:
            raise ValueError("RZ needs an angle")

    def __str__(self) -> str:
        if self.kind == "RZ":
            return f"RZ({self.angle:.6g}) q{self.qubits[0]}"
        return f"{self.kind} " + ",".join(f"q{q}" for q in self.qubits)


def H(q: int) -> Gate:
    return Gate("H", (q,))


def GY(q: int) -> Gate:
    return Gate("GY", (q,))


def GY_DAG(q: int) -> Gate:
    return Gate("GY_DAG", (q,))


def RZ(q: int, angle: float) -> Gate:
    return Gate("RZ", (q,), float(angle))


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


def SWAP(a: int, b: int) -> Gate:
    return Gate("SWAP", (a, b))


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list.

    ``initial_layout`` and ``final_layout`` map logical qubits to the wire they
    occupy before and after the circuit; ``None`` means the identity.
    """

    n_qubits: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)
    initial_layout: tuple[int, ...] | None = None
    final_layout: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"gate {g} outside register of {self.n_qubits} qubits")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, tuple(gates), self.initial_layout, self.final_layout)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(max(self.n_qubits, other.n_qubits), self.gates + other.gates)


@dataclass(frozen=True)
class Counts:
    cnot: int
    single: int
    total: int

    def __iter__(self):
        return iter((self.cnot, self.single, self.total))


def counts(c: Circuit | Sequence[Gate]) -> Counts:
    cnot = single = 0
    for g in c:
        if g.kind == "CNOT":
            cnot += 1
        elif g.kind == "SWAP":
            cnot += SWAP_CNOT_COST
        else:
            single += 1
    return Counts(cnot, single, cnot + single)


def swap_count(c: Circuit | Sequence[Gate]) -> int:
    return sum(1 for g in c if g.kind == "SWAP")


def depth(c: Circuit | Sequence[Gate]) -> int:
    level: dict[int, int] = {}
    best = 0
    for g in c:
        d = SWAP_DEPTH if g.kind == "SWAP" else 1
        lv = max((level.get(q, 0) for q in g.qubits), default=0) + d
        for q in g.qubits:
            level[q] = lv
        best = max(best, lv)
    return best


def metrics(c: Circuit) -> dict[str, int]:
    k = counts(c)
    return {"cnot": k.cnot, "single": k.single, "total": k.total, "depth": depth(c)}


# ---------------------------------------------------------------------------
# peephole

_INVERSE_1Q = {("H", "H"), ("GY", "GY_DAG"), ("GY_DAG", "GY")}
_COMMUTE_SCAN = 64
_REACH = 8


def _is_zero_angle(theta: float) -> bool:
    r = math.remainder(theta, 2 * math.pi)
    return abs(r) <= ANGLE_TOL


_MISSING = object()


class _GateGraph:
    """Per-qubit doubly linked gate lists supporting local rewrites.

    Mutations can be journaled (``begin``) and undone (``rollback``), which
    lets a synthesizer price a candidate gate sequence against the current
    circuit without copying it.
    """

    def __init__(self, gates: Sequence[Gate] = ()):
        self.gates: list[Gate | None] = []
        self.key: list[float] = []
        self.nxt: dict[tuple[int, int], int] = {}
        self.prv: dict[tuple[int, int], int] = {}
        self.tail: dict[int, int] = {}
        self.live = 0
        self._journal: list | None = None
        for g in gates:
            self.append(g)

    # -- journaled primitives
    def _dset(self, d: dict, k, v) -> None:
        if self._journal is not None:
            self._journal.append((d, k, d.get(k, _MISSING)))
        d[k] = v

    def _dpop(self, d: dict, k) -> None:
        if k in d:
            if self._journal is not None:
                self._journal.append((d, k, d[k]))
            del d[k]

    def _gset(self, i: int, g: Gate | None) -> None:
        if self._journal is not None:
            self._journal.append(("gate", i, self.gates[i]))
        self.gates[i] = g

    def _kset(self, i: int, k: float) -> None:
        if self._journal is not None:
            self._journal.append(("key", i, self.key[i]))
        self.key[i] = k

    def begin(self) -> None:
        self._journal = []

    def commit(self) -> None:
        self._journal = None

    def rollback(self) -> None:
        journal, self._journal = self._journal, None
        for entry in reversed(journal):
            tag = entry[0]
            if tag == "append":
                self.gates.pop()
                self.key.pop()
            elif tag == "live":
                self.live = entry[1]
            elif tag == "gate":
                self.gates[entry[1]] = entry[2]
            elif tag == "key":
                self.key[entry[1]] = entry[2]
            else:
                d, k, old = entry
                if old is _MISSING:
                    d.pop(k, None)
                else:
                    d[k] = old

    def _live_add(self, delta: int) -> None:
        if self._journal is not None:
            self._journal.append(("live", self.live))
        self.live += delta

    # -- structure
    def append(self, g: Gate) -> int:
        i = len(self.gates)
        self.gates.append(g)
        self.key.append(float(i))
        if self._journal is not None:
            self._journal.append(("append",))
        for q in g.qubits:
            last = self.tail.get(q)
            if last is not None:
                self._dset(self.nxt, (last, q), i)
                self._dset(self.prv, (i, q), last)
            self._dset(self.tail, q, i)
        self._live_add(1)
        return i

    def next_on(self, i: int, q: int) -> int | None:
        return self.nxt.get((i, q))

    def prev_on(self, i: int, q: int) -> int | None:
        return self.prv.get((i, q))

    def neighbours(self, i: int, reach: int = 1) -> list[int]:
        g = self.gates[i]
        out = []
        for q in g.qubits:
            j = self.prv.get((i, q))
            for _ in range(reach):
                if j is None:
                    break
                out.append(j)
                j = self.prv.get((j, q))
            j = self.nxt.get((i, q))
            if j is not None:
                out.append(j)
        return out

    def unlink(self, i: int, q: int) -> None:
        p = self.prv.get((i, q))
        n = self.nxt.get((i, q))
        self._dpop(self.prv, (i, q))
        self._dpop(self.nxt, (i, q))
        if p is not None:
            if n is not None:
                self._dset(self.nxt, (p, q), n)
            else:
                self._dpop(self.nxt, (p, q))
        if n is not None:
            if p is not None:
                self._dset(self.prv, (n, q), p)
            else:
                self._dpop(self.prv, (n, q))
        else:
            if p is not None:
                self._dset(self.tail, q, p)
            else:
                self._dpop(self.tail, q)

    def remove(self, i: int) -> None:
        for q in self.gates[i].qubits:
            self.unlink(i, q)
        self._gset(i, None)
        self._live_add(-1)

    def insert_after(self, i: int, anchor: int, q: int) -> None:
        n = self.nxt.get((anchor, q))
        self._dset(self.nxt, (anchor, q), i)
        self._dset(self.prv, (i, q), anchor)
        if n is not None:
            self._dset(self.nxt, (i, q), n)
            self._dset(self.prv, (n, q), i)
        else:
            self._dset(self.tail, q, i)

    def insert_before(self, i: int, anchor: int, q: int) -> None:
        p = self.prv.get((anchor, q))
        self._dset(self.prv, (anchor, q), i)
        self._dset(self.nxt, (i, q), anchor)
        if p is not None:
            self._dset(self.prv, (i, q), p)
            self._dset(self.nxt, (p, q), i)

    def linearize(self) -> list[Gate]:
        indeg: dict[int, int] = {}
        live = [i for i, g in enumerate(self.gates) if g is not None]
        for i in live:
            indeg[i] = sum(1 for q in self.gates[i].qubits if (i, q) in self.prv)
        heap = [(self.key[i], i) for i in live if indeg[i] == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            _, i = heapq.heappop(heap)
            out.append(self.gates[i])
            for q in self.gates[i].qubits:
                j = self.nxt.get((i, q))
                if j is not None:
                    indeg[j] -= 1
                    if indeg[j] == 0:
                        heapq.heappush(heap, (self.key[j], j))
        assert len(out) == len(live), "gate dependency cycle"
        return out

    def live_gates(self) -> list[Gate]:
        return [g for g in self.gates if g is not None]


def _commutes_through_cnot_on(g: Gate, q: int, control: int, target: int) -> bool:
    """Does ``g`` (touching wire ``q``) commute with CNOT(control, target)?"""
    if q == control:
        if g.kind == "RZ":
            return True
        return g.kind == "CNOT" and g.qubits[0] == control and g.qubits[1] != target
    return g.kind == "CNOT" and g.qubits[1] == target and g.qubits[0] != control


def _try_rewrite(G: _GateGraph, i: int) -> list[int] | None:
    """Apply one rewrite rooted at node ``i``; return touched nodes or None."""
    g = G.gates[i]
    if g is None:
        return None

    if g.kind in ("H", "GY", "GY_DAG"):
        q = g.qubits[0]
        j = G.next_on(i, q)
        if j is not None and (g.kind, G.gates[j].kind) in _INVERSE_1Q:
            touched = G.neighbours(i, _REACH) + G.neighbours(j, _REACH)
            G.remove(i)
            G.remove(j)
            return touched
        return None

    if g.kind == "RZ":
        q = g.qubits[0]
        if _is_zero_angle(g.angle):
            touched = G.neighbours(i)
            G.remove(i)
            return touched
        j = G.next_on(i, q)
        if j is not None and G.gates[j].kind == "RZ":
            theta = g.angle + G.gates[j].angle
            G.remove(j)
            G._gset(i, RZ(q, theta))
            touched = G.neighbours(i) + [i]
            if _is_zero_angle(theta):
                G.remove(i)
            return touched
        return None

    if g.kind == "SWAP":
        a, b = g.qubits
        j = G.next_on(i, a)
        if j is not None and G.next_on(i, b) == j and G.gates[j].kind == "SWAP":
            touched = G.neighbours(i) + G.neighbours(j)
            G.remove(i)
            G.remove(j)
            return touched
        return None

    # CNOT
    c, t = g.qubits
    match = {}
    for q in (c, t):
        j = G.next_on(i, q)
        steps = 0
        while j is not None and steps < _COMMUTE_SCAN:
            h = G.gates[j]
            if h.kind == "CNOT" and h.qubits == (c, t):
                break
            if not _commutes_through_cnot_on(h, q, c, t):
                j = None
                break
            j = G.next_on(j, q)
            steps += 1
        else:
            j = None
        match[q] = j
    if match[c] is not None and match[c] == match[t]:
        j = match[c]
        touched = G.neighbours(i, _REACH) + G.neighbours(j, _REACH)
        G.remove(i)
        G.remove(j)
        return touched

    # H(c) H(t) CNOT(c,t) [c idle] CNOT(c,t) H(c) H(t)  ->  CNOT(t,c) H(t) ... H(t) CNOT(t,c)
    h1, h2 = G.prev_on(i, c), G.prev_on(i, t)
    j = G.next_on(i, c)
    if (
        h1 is not None
        and h2 is not None
        and G.gates[h1].kind == "H"
        and G.gates[h2].kind == "H"
        and j is not None
        and G.gates[j].kind == "CNOT"
        and G.gates[j].qubits == (c, t)
    ):
        h3, h4 = G.next_on(j, c), G.next_on(j, t)
        if (
            h3 is not None
            and h4 is not None
            and G.gates[h3].kind == "H"
            and G.gates[h4].kind == "H"
        ):
            touched = G.neighbours(h1) + G.neighbours(h3) + G.neighbours(h2) + G.neighbours(h4)
            G.remove(h1)
            G.remove(h3)
            G.unlink(h2, t)
            G.unlink(h4, t)
            G._gset(i, CNOT(t, c))
            G._gset(j, CNOT(t, c))
            G.insert_after(h2, i, t)
            G.insert_before(h4, j, t)
            G._kset(h2, G.key[i] + 0.25)
            G._kset(h4, G.key[j] - 0.25)
            return touched + [i, j, h2, h4]
    return None


def _fixpoint(G: _GateGraph, seeds: Iterable[int]) -> bool:
    work = [i for i in seeds if G.gates[i] is not None]
    work.reverse()
    queued = set(work)
    changed = False
    while work:
        i = work.pop()
        queued.discard(i)
        touched = _try_rewrite(G, i)
        if touched is not None:
            changed = True
            for j in touched:
                if G.gates[j] is not None and j not in queued:
                    work.append(j)
                    queued.add(j)
    return changed


def peephole_cancel(c: Circuit) -> Circuit:
    """Cancel inverse pairs and merge rotations until nothing changes.

    Rules: self-inverse CNOT/SWAP/H pairs, GY with GY_DAG, RZ merging on one
    wire (results that vanish mod 2*pi are dropped), CNOT pairs separated only
    by gates that commute with them, and the Hadamard-conjugated CNOT fold
    that removes two H gates from an X-X parity pair.
    """
    G = _GateGraph(c.gates)
    while _fixpoint(G, range(len(G.gates))):
        pass
    return c.with_gates(G.linearize())


class IncrementalCircuit:
    """A circuit kept cancellation-reduced as gates are appended.

    ``price`` returns the cost the circuit would have after appending a
    candidate sequence, leaving the circuit unchanged.
    """

    def __init__(self, n_qubits: int):
        self.n_qubits = n_qubits
        self.graph = _GateGraph()

    def _push(self, gates: Sequence[Gate]) -> None:
        G = self.graph
        seeds = []
        for q in {q for g in gates for q in g.qubits}:
            j = G.tail.get(q)
            for _ in range(_REACH):
                if j is None:
                    break
                seeds.append(j)
                j = G.prev_on(j, q)
        seeds.sort()
        for g in gates:
            seeds.append(G.append(g))
        _fixpoint(G, seeds)

    def price(self, gates: Sequence[Gate]) -> int:
        """Gate count after appending ``gates``; the circuit itself is not modified."""
        G = self.graph
        G.begin()
        self._push(gates)
        cost = G.live
        G.rollback()
        return cost

    def extend(self, gates: Sequence[Gate]) -> None:
        self._push(gates)

    def __len__(self) -> int:
        return self.graph.live

    def circuit(self) -> Circuit:
        return Circuit(self.n_qubits, tuple(self.graph.linearize()))


# ---------------------------------------------------------------------------
# QASM

QASM_HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'


def emit_qasm(c: Circuit) -> str:
    lines = [QASM_HEADER.rstrip("\n"), f"qreg q[{c.n_qubits}];"]
    for g in c:
        q = g.qubits
        if g.kind == "H":
            lines.append(f"h q[{q[0]}];")
        elif g.kind == "GY":
            lines.append(f"h q[{q[0]}]; s q[{q[0]}];  // gy")
        elif g.kind == "GY_DAG":
            lines.append(f"sdg q[{q[0]}]; h q[{q[0]}];  // gy_dag")
        elif g.kind == "RZ":
            lines.append(f"rz({g.angle!r}) q[{q[0]}];")
        elif g.kind == "CNOT":
            lines.append(f"cx q[{q[0]}],q[{q[1]}];")
        else:
            lines.append(f"swap q[{q[0]}],q[{q[1]}];")
    return "\n".join(lines) + "\n"
