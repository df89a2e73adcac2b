"""Shared helpers: seeded random circuits over the full gate catalog."""
from __future__ import annotations

import numpy as np
import pytest
from hypothesis import strategies as st

from pswap.circuit import Circuit
from pswap.gates import Gate, Op

CATALOG = tuple(Gate)
ONE_QUBIT = tuple(g for g in Gate if g.arity == 1)
TWO_QUBIT = tuple(g for g in Gate if g.arity == 2)


def random_op(rng: np.random.Generator, n: int, gates=CATALOG) -> Op:
    if n < 2:
        gates = tuple(g for g in gates if g.arity == 1)
    g = gates[rng.integers(len(gates))]
    qubits = tuple(int(q) for q in rng.choice(n, size=g.arity, replace=False))
    theta = None
    if g.n_params:
        # mix exact multiples of pi/4 with arbitrary angles
        theta = float(rng.integers(-8, 9) * np.pi / 4) if rng.random() < 0.5 else float(rng.uniform(-7, 7))
    return Op(g, qubits, theta)


def random_circuit(rng: np.random.Generator, n: int | None = None, length: int | None = None, gates=CATALOG) -> Circuit:
    n = n if n is not None else int(rng.integers(2, 4))
    length = length if length is not None else int(rng.integers(0, 16))
    return Circuit(n, tuple(random_op(rng, n, gates) for _ in range(length)))


@st.composite
def circuits(draw, min_qubits: int = 1, max_qubits: int = 3, max_len: int = 12):
    n = draw(st.integers(min_qubits, max_qubits))
    seed = draw(st.integers(0, 2**32 - 1))
    length = draw(st.integers(0, max_len))
    return random_circuit(np.random.default_rng(seed), n, length)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
