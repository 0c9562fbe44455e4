"""Block scheduling: lexicographic (gate-count oriented) and layered (depth oriented)."""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field

import numpy as np

from .pauli import (
    PauliBlock,
    PauliString,
    Program,
    active_length,
    active_qubits,
    lex_compare,
)

log = logging.getLogger(__name__)

AXIS_CODE = {"I": 0, "X": 1, "Y": 2, "Z": 3}


@dataclass(frozen=True)
class Layer:
    main_block: PauliBlock
    padded_blocks: tuple[PauliBlock, ...] = ()

    @property
    def blocks(self) -> tuple[PauliBlock, ...]:
        return (self.main_block,) + tuple(self.padded_blocks)


@dataclass(frozen=True)
class Schedule:
    n_qubits: int
    layers: tuple[Layer, ...] = field(default_factory=tuple)

    def blocks(self) -> list[PauliBlock]:
        return [b for layer in self.layers for b in layer.blocks]

    def to_program(self) -> Program:
        return Program(self.n_qubits, tuple(self.blocks()))


def _string_key(s: PauliString):
    return s.sort_key()


def sort_block_strings(b: PauliBlock) -> PauliBlock:
    strings = sorted(b.strings, key=lambda ws: _string_key(ws.string))
    return PauliBlock(tuple(strings), b.parameter)


def _nonempty_blocks(p: Program) -> list[PauliBlock]:
    out = []
    for k, b in enumerate(p.blocks):
        if not active_qubits(b):
            log.warning("block %d has no active qubits and is dropped", k)
            continue
        out.append(b)
    return out


def gco_schedule(p: Program) -> Schedule:
    blocks = [sort_block_strings(b) for b in _nonempty_blocks(p)]
    blocks.sort(key=lambda b: _string_key(b.first))
    return Schedule(p.n_qubits, tuple(Layer(b) for b in blocks))


def string_depth(s: PauliString) -> int:
    k = s.weight
    if k == 0:
        return 0
    basis = 2 if any(a in "XY" for a in s.axes) else 0
    return 2 * (k - 1) + 1 + basis


def estimate_depth(b: PauliBlock) -> int:
    return sum(string_depth(ws.string) for ws in b.strings)


def overlap(tail: PauliString, b: PauliBlock | PauliString) -> int:
    head = b.first if isinstance(b, PauliBlock) else b
    if len(tail) != len(head):
        raise ValueError("overlap needs strings of equal length")
    return sum(1 for x, y in zip(tail.axes, head.axes) if x != "I" and x == y)


def padded_load(blocks: list[PauliBlock]) -> int:
    """Depth of padding blocks stacked sequentially per qubit (max over qubits)."""
    load: dict[int, int] = {}
    for b in blocks:
        d = estimate_depth(b)
        for q in active_qubits(b):
            load[q] = load.get(q, 0) + d
    return max(load.values(), default=0)


def do_schedule(p: Program) -> Schedule:
    """Depth-oriented layering.

    Blocks are sorted by active length (descending) then lexicographically.
    Each layer opens with the remaining block whose first string best overlaps
    the last string of the previous main block, then is padded with remaining
    blocks disjoint from the main block as long as the padded work on every
    qubit stays within the main block's estimated depth.
    """
    blocks = [sort_block_strings(b) for b in _nonempty_blocks(p)]

    def cmp(a: PauliBlock, b: PauliBlock) -> int:
        la, lb = active_length(a), active_length(b)
        if la != lb:
            return -1 if la > lb else 1
        return lex_compare(a.first, b.first)

    blocks.sort(key=functools.cmp_to_key(cmp))
    active = [active_qubits(b) for b in blocks]
    depths = np.array([estimate_depth(b) for b in blocks], dtype=np.int64)
    n = p.n_qubits
    support = np.zeros((len(blocks), n), dtype=bool)
    for k, qs in enumerate(active):
        support[k, sorted(qs)] = True
    # axis codes of each block's first string; overlap is a row-wise match count
    heads = np.array([[AXIS_CODE[a] for a in b.first.axes] for b in blocks], dtype=np.int8).reshape(len(blocks), n)
    taken = np.zeros(len(blocks), dtype=bool)
    layers: list[Layer] = []
    prev_tail: PauliString | None = None

    while not taken.all():
        if prev_tail is None:
            main = 0
        else:
            tail = np.array([AXIS_CODE[a] for a in prev_tail.axes], dtype=np.int8)
            score = ((heads == tail) & (tail != 0)).sum(axis=1)
            score[taken] = -1
            main = int(np.argmax(score))
        taken[main] = True
        budget = int(depths[main])
        fits = ~taken & ~support[:, support[main]].any(axis=1) & (depths <= budget)
        load = np.zeros(n, dtype=np.int64)
        padded: list[int] = []
        for k in np.flatnonzero(fits):
            row = support[k]
            if (load[row] + depths[k] > budget).any():
                continue
            load[row] += depths[k]
            padded.append(int(k))
            taken[k] = True
        layers.append(Layer(blocks[main], tuple(blocks[k] for k in padded)))
        prev_tail = blocks[main].last
    return Schedule(p.n_qubits, tuple(layers))
