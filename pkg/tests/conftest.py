import logging

import numpy as np
import pytest
from hypothesis import strategies as st

from pauliblock.bench import benchmark_suite
from pauliblock.device import load_device
from pauliblock.pauli import PauliBlock, PauliString, Program, WeightedString

logging.getLogger("pauliblock").setLevel(logging.ERROR)


@pytest.fixture(scope="session")
def suite():
    return benchmark_suite(0)


@pytest.fixture(scope="session")
def manhattan():
    return load_device("manhattan65")


def random_program(rng: np.random.Generator, n_max=5, blocks_max=6, strings_max=3, allow_identity=False) -> Program:
    n = int(rng.integers(1, n_max + 1))
    blocks = []
    for _ in range(int(rng.integers(1, blocks_max + 1))):
        strings = []
        for _ in range(int(rng.integers(1, strings_max + 1))):
            axes = tuple("IXYZ"[int(a)] for a in rng.integers(0, 4, size=n))
            if not allow_identity and set(axes) == {"I"}:
                axes = ("Z",) + axes[1:]
            strings.append(WeightedString(PauliString(axes), float(rng.uniform(-1.5, 1.5))))
        blocks.append(PauliBlock(tuple(strings), float(rng.uniform(-1.0, 1.0))))
    return Program(n, tuple(blocks))


@st.composite
def programs(draw, n_max=4, blocks_max=5, strings_max=3):
    n = draw(st.integers(1, n_max))
    axes = st.tuples(*[st.sampled_from("IXYZ")] * n).filter(lambda a: set(a) != {"I"})
    weight = st.floats(-2.0, 2.0, allow_nan=False).filter(lambda w: abs(w) > 1e-3)
    block = st.builds(
        lambda ss, p: PauliBlock(tuple(WeightedString(PauliString(a), w) for a, w in ss), p),
        st.lists(st.tuples(axes, weight), min_size=1, max_size=strings_max),
        st.floats(-1.0, 1.0, allow_nan=False),
    )
    return Program(n, tuple(draw(st.lists(block, min_size=1, max_size=blocks_max))))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in lines:
        terminalreporter.write_line(line)
