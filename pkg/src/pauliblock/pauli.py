"""Pauli IR data model: strings, blocks, programs, text format and matrix semantics."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Union

import numpy as np

AXES = "IXYZ"
# X < Y < Z < I
AXIS_RANK = {"X": 0, "Y": 1, "Z": 2, "I": 3}

ORACLE_MAX_QUBITS = 12

Parameter = Union[float, str]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnboundParameterError(KeyError):
    pass


@dataclass(frozen=True)
class PauliString:
    """A Pauli word; ``axes[i]`` acts on qubit ``i``.

    The textual form is written high-qubit-first, so ``PauliString.from_text("ZXI")``
    has ``Z`` on qubit 2 and ``I`` on qubit 0.
    """

    axes: tuple[str, ...]

    def __post_init__(self):
        for a in self.axes:
            if a not in AXES:
                raise ValueError(f"unknown Pauli axis {a!r}")

    @classmethod
    def from_text(cls, text: str) -> "PauliString":
        return cls(tuple(reversed(text)))

    @classmethod
    def from_dict(cls, n: int, ops: Mapping[int, str]) -> "PauliString":
        axes = ["I"] * n
        for q, a in ops.items():
            axes[q] = a
        return cls(tuple(axes))

    def __str__(self) -> str:
        return "".join(reversed(self.axes))

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __len__(self) -> int:
        return len(self.axes)

    def __getitem__(self, q: int) -> str:
        return self.axes[q]

    @property
    def n_qubits(self) -> int:
        return len(self.axes)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, a in enumerate(self.axes) if a != "I")

    @property
    def weight(self) -> int:
        return sum(1 for a in self.axes if a != "I")

    def sort_key(self) -> tuple[int, ...]:
        return tuple(AXIS_RANK[a] for a in reversed(self.axes))


@dataclass(frozen=True)
class WeightedString:
    string: PauliString
    weight: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.weight):
            raise ValueError("weight must be finite")


@dataclass(frozen=True)
class PauliBlock:
    strings: tuple[WeightedString, ...]
    parameter: Parameter = 1.0

    def __post_init__(self):
        object.__setattr__(self, "strings", tuple(self.strings))
        lengths = {len(ws.string) for ws in self.strings}
        if len(lengths) > 1:
            raise ValueError(f"strings in one block have different lengths {sorted(lengths)}")

    def __len__(self) -> int:
        return len(self.strings)

    @property
    def first(self) -> PauliString:
        return self.strings[0].string

    @property
    def last(self) -> PauliString:
        return self.strings[-1].string

    def angle_scale(self, bindings: Mapping[str, float] | None = None) -> float:
        return resolve_parameter(self.parameter, bindings)


@dataclass(frozen=True)
class Program:
    n_qubits: int
    blocks: tuple[PauliBlock, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.n_qubits < 1:
            raise ValueError("qubit count must be positive")
        for k, b in enumerate(self.blocks):
            for ws in b.strings:
                if len(ws.string) != self.n_qubits:
                    raise ValueError(
                        f"block {k}: string {ws.string} has length {len(ws.string)}, "
                        f"expected {self.n_qubits}"
                    )

    def symbols(self) -> set[str]:
        return {b.parameter for b in self.blocks if isinstance(b.parameter, str)}

    def n_strings(self) -> int:
        return sum(len(b) for b in self.blocks)


def resolve_parameter(param: Parameter, bindings: Mapping[str, float] | None = None) -> float:
    if isinstance(param, str):
        if bindings is None or param not in bindings:
            raise UnboundParameterError(f"parameter symbol {param!r} has no binding")
        return float(bindings[param])
    return float(param)


def lex_compare(a: PauliString, b: PauliString) -> int:
    """Compare from the highest qubit down under X < Y < Z < I; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise ValueError(f"cannot compare strings of lengths {len(a)} and {len(b)}")
    for q in range(len(a) - 1, -1, -1):
        ra, rb = AXIS_RANK[a[q]], AXIS_RANK[b[q]]
        if ra != rb:
            return -1 if ra < rb else 1
    return 0


def active_qubits(b: PauliBlock) -> frozenset[int]:
    out: set[int] = set()
    for ws in b.strings:
        out |= ws.string.support
    return frozenset(out)


def core_qubits(b: PauliBlock) -> frozenset[int]:
    if not b.strings:
        return frozenset()
    out = set(b.strings[0].string.support)
    for ws in b.strings[1:]:
        out &= ws.string.support
    return frozenset(out)


def active_length(b: PauliBlock) -> int:
    return len(active_qubits(b))


# ---------------------------------------------------------------------------
# text format

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_SYMBOL = r"[A-Za-z_][A-Za-z0-9_]*"
_HEADER_RE = re.compile(r"^qubits\s+(\d+)$")
_BLOCK_RE = re.compile(rf"^block(?:\s+param\s+(\S+))?\s*\{{$")
_STRING_RE = re.compile(rf"^(\S+)(?:\s*\*\s*(\S+))?$")


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _column(raw: str, token: str) -> int:
    idx = raw.find(token)
    return idx + 1 if idx >= 0 else 1


def parse_program(text: str, bindings: Mapping[str, float] | None = None) -> Program:
    """Parse the line-oriented Pauli IR text format.

    If ``bindings`` is given, every symbolic parameter must appear in it;
    otherwise symbols are kept unresolved and bound at compile time.
    """
    lines = text.splitlines()
    n_qubits = None
    blocks: list[PauliBlock] = []
    current: list[WeightedString] | None = None
    current_param: Parameter = 1.0
    block_line = 0

    for lineno, raw in enumerate(lines, start=1):
        line = _strip(raw)
        if not line:
            continue
        if n_qubits is None:
            m = _HEADER_RE.match(line)
            if not m:
                raise ParseError("expected header 'qubits <n>'", lineno, _column(raw, line))
            n_qubits = int(m.group(1))
            if n_qubits < 1:
                raise ParseError("qubit count must be positive", lineno, _column(raw, m.group(1)))
            continue
        if current is None:
            m = _BLOCK_RE.match(line)
            if not m:
                raise ParseError("expected 'block [param <value>] {'", lineno, _column(raw, line))
            tok = m.group(1)
            if tok is None:
                current_param = 1.0
            elif re.fullmatch(_NUMBER, tok):
                current_param = float(tok)
            elif re.fullmatch(_SYMBOL, tok):
                if bindings is not None and tok not in bindings:
                    raise ParseError(f"unbound parameter symbol {tok!r}", lineno, _column(raw, tok))
                current_param = tok
            else:
                raise ParseError(f"bad parameter {tok!r}", lineno, _column(raw, tok))
            current = []
            block_line = lineno
            continue
        if line == "}":
            blocks.append(PauliBlock(tuple(current), current_param))
            current = None
            continue
        m = _STRING_RE.match(line)
        if not m:
            raise ParseError("expected '<axes> * <weight>'", lineno, _column(raw, line))
        axes, weight_tok = m.group(1), m.group(2)
        for k, ch in enumerate(axes):
            if ch not in AXES:
                raise ParseError(f"unknown axis character {ch!r}", lineno, _column(raw, axes) + k)
        if len(axes) != n_qubits:
            raise ParseError(
                f"string length {len(axes)} does not match qubit count {n_qubits}",
                lineno,
                _column(raw, axes),
            )
        if weight_tok is None:
            weight = 1.0
        elif re.fullmatch(_NUMBER, weight_tok):
            weight = float(weight_tok)
        else:
            raise ParseError(f"bad weight {weight_tok!r}", lineno, _column(raw, weight_tok))
        current.append(WeightedString(PauliString.from_text(axes), weight))

    if n_qubits is None:
        raise ParseError("empty input, expected header 'qubits <n>'", max(len(lines), 1))
    if current is not None:
        raise ParseError("unterminated block", block_line)
    return Program(n_qubits, tuple(blocks))


def _fmt_number(x: float) -> str:
    return repr(float(x))


def emit_program(p: Program) -> str:
    out = [f"qubits {p.n_qubits}"]
    for b in p.blocks:
        param = b.parameter if isinstance(b.parameter, str) else _fmt_number(b.parameter)
        out.append(f"block param {param} {{")
        for ws in b.strings:
            out.append(f"  {ws.string} * {_fmt_number(ws.weight)}")
        out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# matrix semantics

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(s: PauliString) -> np.ndarray:
    """Kronecker product sigma_{n-1} x ... x sigma_0 (qubit 0 is the least significant bit)."""
    m = np.ones((1, 1), dtype=complex)
    for a in reversed(s.axes):
        m = np.kron(m, PAULI_MATRICES[a])
    return m


def hamiltonian_matrix(
    p: Program, bindings: Mapping[str, float] | None = None, max_qubits: int = ORACLE_MAX_QUBITS
) -> np.ndarray:
    if p.n_qubits > max_qubits:
        raise ValueError(f"{p.n_qubits} qubits exceeds the dense-matrix cap of {max_qubits}")
    dim = 2**p.n_qubits
    h = np.zeros((dim, dim), dtype=complex)
    for b in p.blocks:
        scale = resolve_parameter(b.parameter, bindings)
        for ws in b.strings:
            h += scale * ws.weight * pauli_matrix(ws.string)
    return h


def block_strings(blocks: Sequence[PauliBlock]) -> list[tuple[PauliString, float, Parameter]]:
    return [(ws.string, ws.weight, b.parameter) for b in blocks for ws in b.strings]
