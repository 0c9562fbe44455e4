"""Dense unitary oracle for small circuits."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .circuit import GY_MATRIX, H_MATRIX, Circuit, Gate
from .pauli import PauliString, pauli_matrix

MAX_QUBITS = 10

_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)


def gate_matrix(g: Gate) -> np.ndarray:
    """Matrix of ``g`` on its own qubits, first listed qubit most significant."""
    if g.kind == "H":
        return H_MATRIX
    if g.kind == "GY":
        return GY_MATRIX
    if g.kind == "GY_DAG":
        return GY_MATRIX.conj().T
    if g.kind == "RZ":
        t = g.angle / 2
        return np.diag([np.exp(-1j * t), np.exp(1j * t)])
    if g.kind == "CNOT":
        return _CNOT
    return _SWAP


def _check_size(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"{n} qubits exceeds the unitary oracle cap of {MAX_QUBITS}")


def _apply(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    # state has one axis per qubit (axis n-1-q holds qubit q) plus a trailing column axis
    axes = [n - 1 - q for q in g.qubits]
    k = len(axes)
    m = gate_matrix(g).reshape((2,) * (2 * k))
    out = np.tensordot(m, state, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def circuit_unitary(c: Circuit) -> np.ndarray:
    n = c.n_qubits
    _check_size(n)
    dim = 2**n
    state = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c:
        state = _apply(state, g, n)
    return state.reshape(dim, dim)


def string_exponential(p: PauliString, angle: float) -> np.ndarray:
    """exp(-i angle/2 P) via P^2 = I."""
    _check_size(p.n_qubits)
    dim = 2**p.n_qubits
    return np.cos(angle / 2) * np.eye(dim) - 1j * np.sin(angle / 2) * pauli_matrix(p)


def ordered_product(order: Sequence[tuple[PauliString, float]], n: int) -> np.ndarray:
    u = np.eye(2**n, dtype=complex)
    for p, angle in order:
        if len(p) < n:
            p = PauliString(tuple(p.axes) + ("I",) * (n - len(p)))
        u = string_exponential(p, angle) @ u
    return u


def permutation_matrix(layout: Sequence[int], n: int) -> np.ndarray:
    """Unitary moving the state of qubit ``j`` onto wire ``layout[j]``."""
    dim = 2**n
    perm = np.zeros((dim, dim))
    for b in range(dim):
        out = 0
        for j in range(n):
            if (b >> j) & 1:
                out |= 1 << layout[j]
        perm[out, b] = 1
    return perm


def _full_layout(layout: Sequence[int] | None, n: int) -> list[int]:
    if layout is None:
        return list(range(n))
    lay = list(layout)
    used = set(lay)
    lay += [w for w in range(n) if w not in used]
    return lay


def phase_aligned_deviation(u: np.ndarray, v: np.ndarray) -> float:
    """max |u - e^{i phi} v| with phi chosen from the largest-magnitude entry of v."""
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) == 0:
        return float(np.max(np.abs(u)))
    phase = u[idx] / v[idx]
    if abs(phase) > 0:
        phase /= abs(phase)
    return float(np.max(np.abs(u - phase * v)))


def check_equivalence(
    c: Circuit,
    emitted_order: Sequence[tuple[PauliString, float]],
    initial_layout: Sequence[int] | None = None,
    final_layout: Sequence[int] | None = None,
) -> float:
    """Deviation between ``c`` and the ordered product of string exponentials.

    Layouts default to those recorded on the circuit. The circuit is
    compared against P_final . U . P_initial^-1 up to global phase.
    """
    n = c.n_qubits
    _check_size(n)
    if initial_layout is None:
        initial_layout = c.initial_layout
    if final_layout is None:
        final_layout = c.final_layout
    target = ordered_product(emitted_order, n)
    if initial_layout is not None or final_layout is not None:
        p0 = permutation_matrix(_full_layout(initial_layout, n), n)
        p1 = permutation_matrix(_full_layout(final_layout, n), n)
        target = p1 @ target @ p0.T
    return phase_aligned_deviation(circuit_unitary(c), target)
