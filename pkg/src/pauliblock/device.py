"""Coupling-graph device models and error-weighted routing paths."""

from __future__ import annotations

import heapq
import json
import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path

DEFAULT_EDGE_ERROR = 0.01
_TIE_TOL = 1e-12


class DeviceError(ValueError):
    pass


@dataclass(frozen=True)
class DeviceModel:
    n_physical: int
    edge_errors: dict[tuple[int, int], float]
    single_error: tuple[float, ...] | None = None
    name: str = "device"
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        norm = {}
        for (a, b), e in self.edge_errors.items():
            if a == b or not (0 <= a < self.n_physical and 0 <= b < self.n_physical):
                raise DeviceError(f"bad edge ({a}, {b}) on {self.n_physical} qubits")
            if not (math.isfinite(e) and 0 <= e < 1):
                raise DeviceError(f"edge ({a}, {b}) error {e} outside [0, 1)")
            norm[(min(a, b), max(a, b))] = float(e)
        object.__setattr__(self, "edge_errors", norm)
        if self.single_error is not None:
            se = tuple(float(x) for x in self.single_error)
            if len(se) != self.n_physical or any(not (0 <= x < 1) for x in se):
                raise DeviceError("single_error needs one value in [0, 1) per qubit")
            object.__setattr__(self, "single_error", se)
        if self.n_physical < 1:
            raise DeviceError("device needs at least one qubit")
        if len(self._bfs(0)) != self.n_physical:
            raise DeviceError(f"coupling graph of {self.name} is disconnected")

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edge_errors)

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_physical)]
        for a, b in self.edge_errors:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    def degree(self, q: int) -> int:
        return len(self.adjacency[q])

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edge_errors

    def weight(self, a: int, b: int) -> float:
        return -math.log1p(-self.edge_errors[(min(a, b), max(a, b))])

    def _bfs(self, src: int) -> dict[int, int]:
        adj: dict[int, list[int]] = {}
        for a, b in self.edge_errors:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        dist = {src: 0}
        todo = deque([src])
        while todo:
            u = todo.popleft()
            for v in adj.get(u, ()):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    todo.append(v)
        return dist

    @cached_property
    def hops(self) -> tuple[tuple[int, ...], ...]:
        """All-pairs hop distance."""
        out = []
        for s in range(self.n_physical):
            d = self._bfs(s)
            out.append(tuple(d[t] for t in range(self.n_physical)))
        return tuple(out)

    def _dijkstra(self, src: int) -> list[float]:
        dist = [math.inf] * self.n_physical
        dist[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u]:
                continue
            for v in self.adjacency[u]:
                nd = du + self.weight(u, v)
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    @cached_property
    def costs(self) -> tuple[tuple[float, ...], ...]:
        """All-pairs cheapest path cost under -ln(1 - error) edge weights."""
        return tuple(tuple(self._dijkstra(s)) for s in range(self.n_physical))

    def path_cost(self, a: int, b: int) -> float:
        return self.costs[a][b]


def cheapest_path(d: DeviceModel, a: int, b: int) -> tuple[int, ...]:
    """Minimum-error path from ``a`` to ``b``; ties go to the lexicographically smallest."""
    key = ("path", a, b)
    hit = d._cache.get(key)
    if hit is not None:
        return hit
    to_b = [row[b] for row in d.costs]
    path = [a]
    u = a
    while u != b:
        tol = _TIE_TOL * max(1.0, to_b[u])
        u = next(v for v in d.adjacency[u] if abs(d.weight(u, v) + to_b[v] - to_b[u]) <= tol)
        path.append(u)
    out = tuple(path)
    d._cache[key] = out
    return out


def linear_device(n: int, error: float = DEFAULT_EDGE_ERROR) -> DeviceModel:
    return DeviceModel(n, {(q, q + 1): error for q in range(n - 1)}, name=f"linear:{n}")


def grid_device(rows: int, cols: int, error: float = DEFAULT_EDGE_ERROR) -> DeviceModel:
    edges = {}
    for r in range(rows):
        for c in range(cols):
            q = r * cols + c
            if c + 1 < cols:
                edges[(q, q + 1)] = error
            if r + 1 < rows:
                edges[(q, q + cols)] = error
    return DeviceModel(rows * cols, edges, name=f"grid:{rows}x{cols}")


def full_device(n: int, error: float = DEFAULT_EDGE_ERROR) -> DeviceModel:
    edges = {(a, b): error for a in range(n) for b in range(a + 1, n)}
    return DeviceModel(n, edges, name=f"full:{n}")


def device_from_dict(doc: dict, name: str = "device") -> DeviceModel:
    try:
        n = int(doc["qubits"])
        edges = {(int(e["a"]), int(e["b"])): float(e.get("error", DEFAULT_EDGE_ERROR)) for e in doc["edges"]}
    except (KeyError, TypeError, ValueError) as exc:
        raise DeviceError(f"malformed device description: {exc}") from exc
    single = doc.get("single_error")
    return DeviceModel(n, edges, tuple(single) if single else None, name=name)


def device_to_dict(d: DeviceModel) -> dict:
    doc = {
        "qubits": d.n_physical,
        "edges": [{"a": a, "b": b, "error": e} for (a, b), e in sorted(d.edge_errors.items())],
    }
    if d.single_error is not None:
        doc["single_error"] = list(d.single_error)
    return doc


def load_device(spec: str) -> DeviceModel:
    """Resolve a built-in name (``linear:N``, ``grid:RxC``, ``full:N``, ``manhattan65``) or a JSON path."""
    m = re.fullmatch(r"linear:(\d+)", spec)
    if m:
        return linear_device(int(m.group(1)))
    m = re.fullmatch(r"grid:(\d+)x(\d+)", spec)
    if m:
        return grid_device(int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"full:(\d+)", spec)
    if m:
        return full_device(int(m.group(1)))
    if spec == "manhattan65":
        text = resources.files("pauliblock.data").joinpath("manhattan65.json").read_text()
        return device_from_dict(json.loads(text), name=spec)
    path = Path(spec)
    if not path.is_file():
        raise DeviceError(f"unknown device {spec!r}: not a built-in name or a readable file")
    return device_from_dict(json.loads(path.read_text()), name=path.name)
