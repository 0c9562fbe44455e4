"""Benchmark program generators: spin lattices, random Hamiltonians, QAOA MaxCut."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np

from .pauli import PauliBlock, PauliString, Program, WeightedString

log = logging.getLogger(__name__)

QAOA_SYMBOL = "gamma"


@dataclass(frozen=True)
class LatticeSpec:
    dims: tuple[int, ...]
    model: str = "ising"

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        if not 1 <= len(dims) <= 3 or any(d < 1 for d in dims):
            raise ValueError(f"lattice dims must be 1-3 positive integers, got {dims}")
        if math.prod(dims) < 2:
            raise ValueError("lattice needs at least two sites")
        if self.model not in ("ising", "heisenberg"):
            raise ValueError(f"unknown lattice model {self.model!r}")

    @property
    def n_qubits(self) -> int:
        return math.prod(self.dims)


def lattice_edges(dims: tuple[int, ...]) -> list[tuple[int, int]]:
    """Nearest-neighbour edges of an open grid; the first coordinate varies fastest."""
    strides = [math.prod(dims[:k]) for k in range(len(dims))]
    edges = []
    for rev in itertools.product(*(range(d) for d in reversed(dims))):
        coord = rev[::-1]
        site = sum(c * s for c, s in zip(coord, strides))
        for axis, d in enumerate(dims):
            if coord[axis] + 1 < d:
                edges.append((site, site + strides[axis]))
    return edges


def _pair_string(n: int, a: int, b: int, axis: str) -> PauliString:
    return PauliString.from_dict(n, {a: axis, b: axis})


def gen_lattice(spec: LatticeSpec) -> Program:
    n = spec.n_qubits
    blocks = []
    for a, b in lattice_edges(spec.dims):
        axes = "Z" if spec.model == "ising" else "XYZ"
        strings = tuple(WeightedString(_pair_string(n, a, b, ax), 1.0) for ax in axes)
        blocks.append(PauliBlock(strings, 1.0))
    return Program(n, tuple(blocks))


def gen_random_hamiltonian(n: int, seed: int = 0) -> Program:
    """5 n^2 single-string blocks; each string has a uniformly drawn number of non-identities."""
    if n < 1:
        raise ValueError("need at least one qubit")
    rng = np.random.default_rng(seed)
    blocks = []
    for _ in range(5 * n * n):
        m = int(rng.integers(1, n + 1))
        qubits = rng.choice(n, size=m, replace=False)
        axes = rng.integers(0, 3, size=m)
        s = PauliString.from_dict(n, {int(q): "XYZ"[int(a)] for q, a in zip(qubits, axes)})
        w = float(rng.uniform(-1.0, 1.0))
        blocks.append(PauliBlock((WeightedString(s, w),), 1.0))
    return Program(n, tuple(blocks))


@dataclass(frozen=True)
class GraphSpec:
    """``kind`` is "regular" (uses ``degree``) or "random" (uses ``edge_prob``)."""

    kind: str
    n: int
    degree: int = 0
    edge_prob: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("regular", "random"):
            raise ValueError(f"unknown graph kind {self.kind!r}")
        if self.n < 1:
            raise ValueError("graph needs at least one node")
        if self.kind == "regular":
            if (self.n * self.degree) % 2:
                raise ValueError(f"n*degree must be even, got {self.n}*{self.degree}")
            if not 0 <= self.degree < self.n:
                raise ValueError("degree must be below node count")
        elif not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge probability must lie in [0, 1]")


def random_regular_edges(n: int, d: int, rng: np.random.Generator, max_tries: int = 1000):
    """Stub pairing that only joins stubs forming a new simple edge, restarting when stuck.

    Each step draws a stub uniformly, then a partner stub uniformly among those that
    would not create a loop or a repeated edge.
    """
    for _ in range(max_tries):
        left = np.full(n, d, dtype=np.int64)
        adj = np.zeros((n, n), dtype=bool)
        edges = []
        while left.any():
            a = int(rng.choice(n, p=left / left.sum()))
            ok = left.copy()
            ok[a] = 0
            ok[adj[a]] = 0
            if not ok.any():
                break
            b = int(rng.choice(n, p=ok / ok.sum()))
            adj[a, b] = adj[b, a] = True
            left[a] -= 1
            left[b] -= 1
            edges.append((min(a, b), max(a, b)))
        if not left.any():
            return sorted(edges)
    raise RuntimeError(f"failed to sample a {d}-regular graph on {n} nodes")


def graph_edges(g: GraphSpec) -> list[tuple[int, int]]:
    rng = np.random.default_rng(g.seed)
    if g.kind == "regular":
        if g.degree == 0:
            return []
        return random_regular_edges(g.n, g.degree, rng)
    return [(a, b) for a in range(g.n) for b in range(a + 1, g.n) if rng.random() < g.edge_prob]


def gen_qaoa_maxcut(g: GraphSpec, weights: dict[tuple[int, int], float] | None = None) -> Program:
    edges = graph_edges(g)
    if not edges:
        log.warning("graph has no edges; emitting an empty QAOA block")
    strings = tuple(
        WeightedString(_pair_string(g.n, a, b, "Z"), (weights or {}).get((a, b), 1.0))
        for a, b in edges
    )
    return Program(g.n, (PauliBlock(strings, QAOA_SYMBOL),))


def naive_counts(p: Program) -> tuple[int, int]:
    """CNOT and single-qubit counts of unoptimized chain synthesis."""
    cnot = single = 0
    for b in p.blocks:
        for ws in b.strings:
            k = ws.string.weight
            if k == 0:
                continue
            cnot += 2 * (k - 1)
            single += 1 + 2 * sum(1 for a in ws.string.axes if a in "XY")
    return cnot, single


# Table-1 style benchmark suite
LATTICE_DIMS = {"1D": (30,), "2D": (5, 6), "3D": (2, 3, 5)}


def benchmark_suite(seed: int = 0) -> dict[str, Program]:
    out = {}
    for tag, dims in LATTICE_DIMS.items():
        out[f"Ising-{tag}"] = gen_lattice(LatticeSpec(dims, "ising"))
    for tag, dims in LATTICE_DIMS.items():
        out[f"Heisen-{tag}"] = gen_lattice(LatticeSpec(dims, "heisenberg"))
    for d in (4, 8, 12):
        out[f"REG-20-{d}"] = gen_qaoa_maxcut(GraphSpec("regular", 20, degree=d, seed=seed))
    out["Rand-30"] = gen_random_hamiltonian(30, seed)
    return out
