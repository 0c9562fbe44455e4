import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pauliblock.circuit import (
    CNOT,
    GY,
    GY_DAG,
    RZ,
    SWAP,
    Circuit,
    Gate,
    H,
    IncrementalCircuit,
    counts,
    depth,
    emit_qasm,
    metrics,
    peephole_cancel,
)
from pauliblock.verify import circuit_unitary, phase_aligned_deviation


def test_counts_and_swap_cost():
    assert tuple(counts(Circuit(2))) == (0, 0, 0)
    c = Circuit(3, (H(0), CNOT(0, 1), SWAP(1, 2), RZ(2, 0.3)))
    assert tuple(counts(c)) == (4, 2, 6)


def test_depth_examples():
    assert depth(Circuit(2, (CNOT(0, 1),))) == 1
    assert depth(Circuit(4, (CNOT(0, 1), CNOT(2, 3)))) == 1
    assert depth(Circuit(2, (CNOT(0, 1), RZ(1, 0.2), CNOT(0, 1)))) == 3
    assert depth(Circuit(2, (SWAP(0, 1), H(0)))) == 4
    assert depth(Circuit(1)) == 0


def test_gate_validation():
    with pytest.raises(ValueError):
        Gate("CNOT", (1, 1))
    with pytest.raises(ValueError):
        Gate("RZ", (0,))
    with pytest.raises(ValueError):
        Gate("T", (0,))
    with pytest.raises(ValueError):
        Circuit(2, (CNOT(0, 2),))


def test_peephole_examples():
    assert peephole_cancel(Circuit(2, (CNOT(0, 1), CNOT(0, 1)))).gates == ()
    assert peephole_cancel(Circuit(3, (CNOT(0, 1), RZ(2, 0.4), CNOT(0, 1)))).gates == (RZ(2, 0.4),)
    assert peephole_cancel(Circuit(1, (H(0), H(0), GY_DAG(0), GY(0)))).gates == ()
    assert peephole_cancel(Circuit(1, (RZ(0, 0.3), RZ(0, -0.3)))).gates == ()
    assert peephole_cancel(Circuit(1, (RZ(0, 0.3), RZ(0, 0.2)))).gates == (RZ(0, 0.5),)


def test_peephole_cancels_across_commuting_gates():
    # RZ on the control and a CNOT sharing the control commute with CNOT(0,1)
    c = Circuit(3, (CNOT(0, 1), RZ(0, 0.7), CNOT(0, 2), CNOT(0, 1)))
    out = peephole_cancel(c)
    assert counts(out).cnot == 1
    assert phase_aligned_deviation(circuit_unitary(out), circuit_unitary(c)) < 1e-12


def test_peephole_keeps_layouts():
    c = Circuit(2, (CNOT(0, 1), CNOT(0, 1)), (1, 0), (0, 1))
    out = peephole_cancel(c)
    assert (out.initial_layout, out.final_layout) == ((1, 0), (0, 1))


def test_incremental_price_matches_peephole():
    inc = IncrementalCircuit(3)
    first = [H(0), CNOT(0, 1), RZ(1, 0.2), CNOT(0, 1), H(0)]
    second = [H(0), CNOT(0, 1), RZ(1, 0.5), CNOT(0, 1), H(0)]
    inc.extend(first)
    before = len(inc)
    price = inc.price(second)
    assert len(inc) == before
    inc.extend(second)
    assert len(inc) == price == 5
    whole = peephole_cancel(Circuit(3, tuple(first + second)))
    assert phase_aligned_deviation(circuit_unitary(inc.circuit()), circuit_unitary(whole)) < 1e-12


_gate = st.one_of(
    st.builds(H, st.integers(0, 2)),
    st.builds(GY, st.integers(0, 2)),
    st.builds(GY_DAG, st.integers(0, 2)),
    st.builds(RZ, st.integers(0, 2), st.sampled_from([0.3, -0.3, 0.7, np.pi])),
    st.builds(lambda a, k: CNOT(a, (a + k) % 3), st.integers(0, 2), st.integers(1, 2)),
)


@given(st.lists(_gate, max_size=30))
@settings(max_examples=200, deadline=None)
def test_peephole_preserves_unitary_and_never_grows(gates):
    c = Circuit(3, tuple(gates))
    out = peephole_cancel(c)
    assert counts(out).total <= counts(c).total
    assert phase_aligned_deviation(circuit_unitary(out), circuit_unitary(c)) < 1e-9


def test_qasm_output():
    assert emit_qasm(Circuit(2)) == 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[2];\n'
    assert emit_qasm(Circuit(2, (CNOT(0, 1),))).splitlines()[-1] == "cx q[0],q[1];"
    body = emit_qasm(Circuit(2, (H(1), RZ(0, 0.25), SWAP(0, 1)))).splitlines()[3:]
    assert body == ["h q[1];", "rz(0.25) q[0];", "swap q[0],q[1];"]


def test_metrics_keys():
    assert metrics(Circuit(1, (H(0),))) == {"cnot": 0, "single": 1, "total": 1, "depth": 1}
