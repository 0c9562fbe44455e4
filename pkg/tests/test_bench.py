import logging

import numpy as np
import pytest

from pauliblock.bench import (
    GraphSpec,
    LatticeSpec,
    gen_lattice,
    gen_qaoa_maxcut,
    gen_random_hamiltonian,
    graph_edges,
    lattice_edges,
    naive_counts,
    random_regular_edges,
)
from pauliblock.pauli import emit_program


def test_ising_chain():
    p = gen_lattice(LatticeSpec((30,), "ising"))
    assert p.n_strings() == 29 and naive_counts(p) == (58, 29)
    assert all(str(b.first).count("Z") == 2 for b in p.blocks)


def test_ising_grid_edge_count():
    assert gen_lattice(LatticeSpec((5, 6))).n_strings() == 5 * 5 + 4 * 6


def test_heisenberg_cube():
    p = gen_lattice(LatticeSpec((2, 3, 5), "heisenberg"))
    assert len(p.blocks) == 59 and p.n_strings() == 177
    assert naive_counts(p) == (354, 649)
    assert [str(ws.string).replace("I", "") for ws in p.blocks[0].strings] == ["XX", "YY", "ZZ"]


def test_lattice_first_coordinate_fastest():
    assert lattice_edges((3, 2)) == [(0, 1), (0, 3), (1, 2), (1, 4), (2, 5), (3, 4), (4, 5)]


@pytest.mark.parametrize("dims", [(), (0,), (1,), (2, 2, 2, 2)])
def test_bad_lattices(dims):
    with pytest.raises(ValueError):
        LatticeSpec(dims)


def test_random_hamiltonian():
    p = gen_random_hamiltonian(30, seed=0)
    assert p.n_strings() == 4500
    one = gen_random_hamiltonian(1, seed=4)
    assert one.n_strings() == 5 and all(b.first.weight == 1 for b in one.blocks)
    assert emit_program(gen_random_hamiltonian(6, 9)) == emit_program(gen_random_hamiltonian(6, 9))
    assert emit_program(gen_random_hamiltonian(6, 9)) != emit_program(gen_random_hamiltonian(6, 10))


@pytest.mark.parametrize("degree", [3, 4, 8, 12])
def test_regular_graphs_are_simple_and_regular(degree):
    n = 20 if degree % 2 == 0 else 10
    for seed in range(5):
        edges = random_regular_edges(n, degree, np.random.default_rng(seed))
        assert len(set(edges)) == len(edges) == n * degree // 2
        assert all(a < b for a, b in edges)
        assert (np.bincount(np.array(edges).ravel(), minlength=n) == degree).all()


def test_qaoa_programs():
    p = gen_qaoa_maxcut(GraphSpec("regular", 20, degree=4, seed=0))
    assert len(p.blocks) == 1 and p.n_strings() == 40
    assert p.blocks[0].parameter == "gamma"
    assert naive_counts(p) == (80, 40)
    assert gen_qaoa_maxcut(GraphSpec("regular", 20, degree=12, seed=1)).n_strings() == 120
    assert graph_edges(GraphSpec("random", 8, edge_prob=1.0)) == [(a, b) for a in range(8) for b in range(a + 1, 8)]


def test_qaoa_empty_graph_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="pauliblock"):
        p = gen_qaoa_maxcut(GraphSpec("random", 5, edge_prob=0.0))
    assert p.n_strings() == 0 and len(p.blocks) == 1
    assert "no edges" in caplog.text


@pytest.mark.parametrize("kw", [dict(kind="regular", n=5, degree=3), dict(kind="regular", n=4, degree=4), dict(kind="random", n=4, edge_prob=1.5), dict(kind="tree", n=4)])
def test_bad_graph_specs(kw):
    with pytest.raises(ValueError):
        GraphSpec(**kw)
