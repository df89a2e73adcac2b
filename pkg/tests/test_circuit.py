import numpy as np
import pytest
from hypothesis import given, settings

from conftest import circuits, random_circuit
from pswap.circuit import (
    Circuit,
    RegisterError,
    compose,
    depth,
    evolve,
    format_label,
    gate_counts,
    inverse,
    parse_label,
    schedule,
    simulate,
    structurally_equal,
    unitary_of,
)
from pswap.gates import Gate, Op, op_matrix, rz
from pswap.linalg import equal_up_to_global_phase

H, CX, X = Gate.H, Gate.CX, Gate.X


def kron_reference(c: Circuit) -> np.ndarray:
    """Independent dense build: embed every op with explicit Kronecker products and swaps."""
    n = c.n_qubits
    dim = 1 << n
    u = np.eye(dim, dtype=complex)
    for op in c.ops:
        m = op_matrix(op)
        full = np.zeros((dim, dim), dtype=complex)
        for col in range(dim):
            local = sum(((col >> q) & 1) << k for k, q in enumerate(op.qubits))
            for row_local in range(1 << len(op.qubits)):
                amp = m[row_local, local]
                if amp == 0:
                    continue
                row = col
                for k, q in enumerate(op.qubits):
                    row = (row & ~(1 << q)) | (((row_local >> k) & 1) << q)
                full[row, col] += amp
        u = full @ u
    return u


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=4))
def test_unitary_matches_reference_embedding(c):
    assert np.allclose(unitary_of(c), kron_reference(c), atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=4))
def test_depth_equals_schedule_length(c):
    assert depth(c) == len(schedule(c))
    flat = [op for layer in schedule(c).layers for op in layer]
    assert sorted(map(str, flat)) == sorted(map(str, c.ops))


@settings(max_examples=60, deadline=None)
@given(circuits(max_qubits=3))
def test_inverse_undoes(c):
    u = unitary_of(compose(c, inverse(c)))
    assert np.allclose(u, np.eye(1 << c.n_qubits), atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(circuits(max_qubits=3))
def test_simulate_is_unitary_column(c):
    u = unitary_of(c)
    for j in range(1 << c.n_qubits):
        psi = simulate(c, format_label(j, c.n_qubits))
        assert np.allclose(psi, u[:, j], atol=1e-10)
        assert np.linalg.norm(psi) == pytest.approx(1.0)


def test_little_endian_labels():
    c = Circuit(2, (Op(X, (0,)),))
    out = simulate(c, "00")
    assert out[parse_label("01", 2)] == pytest.approx(1)
    assert format_label(1, 2) == "01"


@pytest.mark.parametrize("label", ["0", "012", "ab", ""])
def test_parse_label_rejects(label):
    with pytest.raises(ValueError):
        parse_label(label, 2)


def test_depth_examples():
    assert depth(Circuit(2)) == 0
    assert depth(Circuit(2, (Op(H, (0,)), Op(H, (1,))))) == 1
    assert depth(Circuit(2, (Op(H, (0,)), Op(CX, (0, 1)), Op(H, (1,))))) == 3
    assert gate_counts(Circuit(2, (Op(H, (0,)), Op(H, (1,))))) == {H: 2}


def test_schedule_parallel_layers():
    c = Circuit(3, (Op(H, (0,)), Op(H, (2,)), Op(CX, (0, 1)), rz(2, 0.3)))
    layers = schedule(c).layers
    assert [len(layer) for layer in layers] == [2, 2]


def test_register_errors():
    with pytest.raises(RegisterError):
        Circuit(2, (Op(H, (2,)),))
    with pytest.raises(RegisterError):
        Circuit(0)
    with pytest.raises(RegisterError):
        compose(Circuit(1), Circuit(2))
    with pytest.raises(ValueError):
        unitary_of(Circuit(11))


def test_evolve_batch_columns(rng):
    c = random_circuit(rng, 3, 10)
    u = unitary_of(c)
    assert np.allclose(evolve(c.ops, np.eye(8, dtype=complex)), u)


def test_structural_equality():
    a = Circuit(1, (rz(0, 0.5),))
    assert structurally_equal(a, Circuit(1, (rz(0, 0.5 + 1e-14),)))
    assert not structurally_equal(a, Circuit(1, (rz(0, 0.6),)))
    assert not structurally_equal(a, Circuit(2, (rz(0, 0.5),)))


def test_circuit_is_immutable():
    c = Circuit(1)
    d = c.append(Op(H, (0,)))
    assert len(c) == 0 and len(d) == 1
    with pytest.raises(AttributeError):
        c.n_qubits = 3


def test_global_phase_of_hzh_is_x():
    c = Circuit(1, (Op(H, (0,)), Op(Gate.Z, (0,)), Op(H, (0,))))
    assert equal_up_to_global_phase(unitary_of(c), op_matrix(Op(X, (0,)))) == pytest.approx(0, abs=1e-12)
