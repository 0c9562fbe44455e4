import itertools

import numpy as np
import pytest

from pauliblock.circuit import CNOT, Circuit, counts, swap_count
from pauliblock.device import DeviceError, full_device, grid_device, linear_device, load_device
from pauliblock.pauli import PauliBlock, PauliString, Program, WeightedString, active_qubits
from pauliblock.schedule import do_schedule, gco_schedule
from pauliblock.synth_ft import naive_synthesize, naive_synthesize_with_order
from pauliblock.synth_sc import (
    EmbeddedTree,
    Mapping,
    build_block_tree,
    coupling_violations,
    initial_mapping,
    naive_route,
    sc_synthesize,
    sc_synthesize_block,
    sc_synthesize_with_order,
)
from pauliblock.verify import check_equivalence

from conftest import random_program


def block(*texts, param=1.0):
    return PauliBlock(tuple(WeightedString(PauliString.from_text(t)) for t in texts), param)


def induced_edges(d, qubits):
    return sum(1 for a, b in d.edges if a in qubits and b in qubits)


def test_initial_mapping_linear_uses_whole_chain():
    m = initial_mapping(linear_device(5), 5)
    assert sorted(m.phys_of) == [0, 1, 2, 3, 4]
    # BFS order from the seed keeps consecutive logical qubits close
    assert m.phys_of[0] == 1


def test_initial_mapping_grid_square():
    d = grid_device(2, 3)
    chosen = set(initial_mapping(d, 4).phys_of[:4])
    best = max(induced_edges(d, set(c)) for c in itertools.combinations(range(6), 4))
    assert induced_edges(d, chosen) == best == 4


def test_initial_mapping_too_large():
    with pytest.raises(DeviceError):
        initial_mapping(linear_device(3), 4)


def test_mapping_swap_keeps_bijection():
    m = Mapping([2, 0, 1, 3])
    m.swap(0, 2)
    assert m.phys_of == [0, 2, 1, 3]
    assert all(m.log_of[m.phys_of[lq]] == lq for lq in range(4))


def test_adjacent_pair_needs_no_swaps():
    d = linear_device(3)
    m = Mapping([0, 1, 2])
    b = block("IZZ")
    tree, swaps, m2 = build_block_tree(b, m, d)
    assert swaps == []
    gates, _ = sc_synthesize_block(b, tree, m2)
    assert [g.kind for g in gates] == ["CNOT", "RZ", "CNOT"]


def test_string_walk_swaps_through_inactive_middle():
    m = Mapping([0, 1, 2])
    tree = EmbeddedTree(0, {1: 0, 2: 1}, frozenset({0, 1, 2}))
    gates, order = sc_synthesize_block(block("ZIZ"), tree, m)
    assert [g.kind for g in gates] == ["SWAP", "CNOT", "RZ", "CNOT", "SWAP"]
    assert gates[0].qubits in {(2, 1), (1, 2)} and gates[2].qubits == (0,)
    assert m.phys_of == [0, 1, 2]
    c = Circuit(3, tuple(gates))
    assert check_equivalence(c, order) < 1e-10


def test_gather_pulls_separated_qubits_together():
    d = linear_device(3)
    tree, swaps, m2 = build_block_tree(block("ZIZ"), Mapping([0, 1, 2]), d)
    assert len(swaps) == 1
    assert tree.nodes == {m2.phys_of[0], m2.phys_of[2]}
    assert d.adjacent(m2.phys_of[0], m2.phys_of[2])


def test_connected_block_no_swaps():
    d = grid_device(2, 3)
    m = initial_mapping(d, 6)
    b = PauliBlock((WeightedString(PauliString.from_dict(6, {m.log_of[0]: "Z", m.log_of[1]: "X", m.log_of[3]: "Y"})),))
    _, swaps, _ = build_block_tree(b, m, d)
    assert swaps == []


def test_full_device_never_swaps():
    rng = np.random.default_rng(3)
    d = full_device(5)
    for _ in range(20):
        prog = random_program(rng)
        for sched in (gco_schedule, do_schedule):
            assert swap_count(sc_synthesize(sched(prog), d)) == 0


def test_ising_chain_on_matching_line(suite):
    c = sc_synthesize(do_schedule(suite["Ising-1D"]), linear_device(30), initial=range(30))
    assert swap_count(c) == 0
    k = counts(c)
    assert (k.cnot, k.single) == (58, 29)


@pytest.mark.parametrize("seed", range(30))
@pytest.mark.parametrize("device", ["linear:5", "grid:2x3"])
def test_sc_equivalence_random(seed, device):
    d = load_device(device)
    prog = random_program(np.random.default_rng(1000 + seed))
    for sched in (gco_schedule, do_schedule):
        c, order = sc_synthesize_with_order(sched(prog), d)
        assert not coupling_violations(c, d)
        assert check_equivalence(c, order) < 1e-9


def test_padded_blocks_share_a_layer():
    # two disjoint blocks on a line can run beside each other without SWAPs
    d = linear_device(4)
    prog = Program(4, (block("ZZZI"), block("IIIZ")))
    c, order = sc_synthesize_with_order(do_schedule(prog), d, initial=range(4))
    assert swap_count(c) == 0
    assert check_equivalence(c, order) < 1e-10


def test_naive_route_distance_examples():
    d = linear_device(6)
    for dist in range(1, 6):
        c = naive_route(Circuit(6, (CNOT(0, dist),)), d)
        m = initial_mapping(d, 6)
        hops = d.hops[m.phys_of[0]][m.phys_of[dist]]
        assert swap_count(c) == hops - 1
        assert not coupling_violations(c, d)


def test_naive_route_full_device_unchanged():
    c = naive_synthesize(gco_schedule(random_program(np.random.default_rng(2))))
    out = naive_route(c, full_device(c.n_qubits))
    assert swap_count(out) == 0 and len(out) == len(c)


@pytest.mark.parametrize("seed", range(10))
def test_naive_route_preserves_semantics(seed):
    prog = random_program(np.random.default_rng(2000 + seed))
    c, order = naive_synthesize_with_order(gco_schedule(prog))
    d = linear_device(5)
    routed = naive_route(c, d)
    assert not coupling_violations(routed, d)
    assert check_equivalence(routed, order) < 1e-9


def test_placement_validation():
    s = gco_schedule(Program(2, (block("ZZ"),)))
    with pytest.raises(DeviceError):
        sc_synthesize(s, linear_device(3), initial=[0, 0])
    with pytest.raises(DeviceError):
        sc_synthesize(gco_schedule(Program(4, (block("ZZZZ"),))), linear_device(3))
