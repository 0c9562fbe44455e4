import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pauliblock.pauli import (
    ParseError,
    PauliBlock,
    PauliString,
    Program,
    UnboundParameterError,
    WeightedString,
    active_length,
    active_qubits,
    core_qubits,
    emit_program,
    hamiltonian_matrix,
    lex_compare,
    parse_program,
    resolve_parameter,
)

from conftest import programs, random_program


def block(*texts, param=1.0):
    return PauliBlock(tuple(WeightedString(PauliString.from_text(t)) for t in texts), param)


def test_text_is_high_qubit_first():
    p = PauliString.from_text("ZXI")
    assert p[2] == "Z" and p[1] == "X" and p[0] == "I"
    assert str(p) == "ZXI"
    assert p.support == {1, 2}


def test_minimal_program():
    prog = parse_program("qubits 2\nblock param 0.5 {\n  ZZ * 1.0\n}\n")
    assert prog.n_qubits == 2 and len(prog.blocks) == 1
    assert prog.blocks[0].parameter == 0.5
    assert prog.blocks[0].strings[0].string == PauliString.from_text("ZZ")


def test_qaoa_shaped_program_shares_symbol():
    text = "qubits 4\nblock param gamma {\n" + "".join(
        f"  {''.join('Z' if q in e else 'I' for q in range(3, -1, -1))} * 1.0\n"
        for e in [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
    ) + "}\n"
    prog = parse_program(text)
    assert len(prog.blocks) == 1 and len(prog.blocks[0]) == 5
    assert prog.symbols() == {"gamma"}


def test_mixed_lengths_in_one_block_rejected():
    with pytest.raises(ValueError):
        PauliBlock((WeightedString(PauliString.from_text("ZZZ")), WeightedString(PauliString.from_text("ZZZZ"))))


def test_comments_defaults_and_blank_lines():
    prog = parse_program("# header next\nqubits 3\n\nblock {  # no param\n  XYZ\n  ZIZ * -0.25\n}\n")
    b = prog.blocks[0]
    assert b.parameter == 1.0
    assert [ws.weight for ws in b.strings] == [1.0, -0.25]


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("", 1, 1),
        ("qubit 2\n", 1, 1),
        ("qubits 2\nblock {\n  ZQ\n}\n", 3, 4),
        ("qubits 2\nblock {\n  ZZZ\n}\n", 3, 3),
        ("qubits 2\nblock {\n  ZZ * abc\n}\n", 3, 8),
        ("qubits 2\nblock {\n  ZZ\n", 2, 1),
        ("qubits 2\nZZ\n", 2, 1),
    ],
)
def test_parse_errors_carry_location(text, line, column):
    with pytest.raises(ParseError) as err:
        parse_program(text)
    assert (err.value.line, err.value.column) == (line, column)


def test_binding_checked_at_parse_when_given():
    text = "qubits 1\nblock param theta {\n  Z\n}\n"
    with pytest.raises(ParseError):
        parse_program(text, bindings={})
    assert parse_program(text, bindings={"theta": 0.1}).blocks[0].parameter == "theta"
    with pytest.raises(UnboundParameterError):
        resolve_parameter("theta", {})
    assert resolve_parameter("theta", {"theta": 0.3}) == 0.3


def test_emit_empty_and_single():
    assert emit_program(Program(3)) == "qubits 3\n"
    text = emit_program(Program(2, (block("ZZ", param=0.5),)))
    assert text.splitlines() == ["qubits 2", "block param 0.5 {", "  ZZ * 1.0", "}"]


def test_round_trip_random_three_qubit():
    rng = np.random.default_rng(11)
    for _ in range(20):
        prog = random_program(rng, n_max=3, blocks_max=5)
        assert parse_program(emit_program(prog)) == prog


@given(programs())
@settings(max_examples=60, deadline=None)
def test_round_trip_property(prog):
    assert parse_program(emit_program(prog)) == prog


def test_lex_examples():
    P = PauliString.from_text
    assert lex_compare(P("XII"), P("YII")) == -1
    assert lex_compare(P("XYZ"), P("XYZ")) == 0
    assert lex_compare(P("IIX"), P("IIY")) == -1
    assert lex_compare(P("ZII"), P("IXX")) == -1


def test_lex_is_total_order():
    words = [PauliString(a) for a in itertools.product("IXYZ", repeat=3)]
    for a, b in itertools.product(words, repeat=2):
        assert lex_compare(a, b) == -lex_compare(b, a)
        assert (lex_compare(a, b) == 0) == (a == b)
        assert (lex_compare(a, b) < 0) == (a.sort_key() < b.sort_key())


def test_active_and_core():
    assert active_qubits(block("ZZI")) == {1, 2}
    assert active_qubits(block("XII", "IIX")) == {0, 2}
    assert active_qubits(block("III")) == frozenset()
    assert core_qubits(block("ZZI", "ZIZ")) == {2}
    assert core_qubits(block("XYI")) == {1, 2}
    assert core_qubits(block("XII", "IIX")) == frozenset()
    assert [active_length(block("ZZI")), active_length(block("XII", "IIX")), active_length(block("III"))] == [2, 2, 0]


def test_hamiltonian_examples():
    z = hamiltonian_matrix(Program(1, (block("Z"),)))
    assert np.allclose(z, np.diag([1, -1]))
    cancel = Program(1, (PauliBlock((WeightedString(PauliString.from_text("X"), 1.0), WeightedString(PauliString.from_text("X"), -1.0))),))
    assert np.allclose(hamiltonian_matrix(cancel), 0)


def test_hamiltonian_rejects_large():
    with pytest.raises(ValueError):
        hamiltonian_matrix(Program(13, (block("Z" * 13),)))


@given(programs(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_block_permutation_keeps_hamiltonian(prog, rnd):
    blocks = list(prog.blocks)
    rnd.shuffle(blocks)
    h1 = hamiltonian_matrix(prog)
    h2 = hamiltonian_matrix(Program(prog.n_qubits, tuple(blocks)))
    assert np.allclose(h1, h2)
    assert np.allclose(h1, h1.conj().T)
