"""
Circuit intermediate representation.

Contains:
    - Circuit: immutable register size + ordered ops
    - unitary_of, simulate: dense simulation (registers up to 10 qubits)
    - schedule, depth: as-soon-as-possible layering
    - gate_counts, compose, inverse, structurally_equal

Basis labels are written ``|q_{n-1} ... q_1 q_0>``, i.e. the rightmost
character is qubit 0, and the label read as a binary number is the index
into the state vector.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import isclose

import numpy as np

from .gates import Gate, Op, inverse_of, op_matrix
from .linalg import MAX_QUBITS, basis_state, num_qubits


class RegisterError(ValueError):
    """Register size problem: mismatch, out-of-range index or oversize."""


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: tuple[Op, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise RegisterError("a circuit needs at least one qubit")
        object.__setattr__(self, "ops", tuple(self.ops))
        for op in self.ops:
            if max(op.qubits) >= self.n_qubits:
                raise RegisterError(f"{op} is outside a {self.n_qubits}-qubit register")

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def append(self, *ops: Op) -> "Circuit":
        return Circuit(self.n_qubits, self.ops + ops)


@dataclass(frozen=True)
class LayerSchedule:
    layers: tuple[tuple[Op, ...], ...]

    def __len__(self) -> int:
        return len(self.layers)


def _apply_op(psi: np.ndarray, op: Op, n: int) -> np.ndarray:
    """Apply ``op`` to a batch of states shaped (2,)*n + (batch,)."""
    m = op_matrix(op)
    # tensor axis for qubit q is n-1-q (C-order reshape of a little-endian index)
    axes = [n - 1 - q for q in reversed(op.qubits)]
    k = len(axes)
    gate = m.reshape((2,) * (2 * k))
    out = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(out, list(range(k)), axes)


def _check_size(c: Circuit):
    if c.n_qubits > MAX_QUBITS:
        raise RegisterError(f"{c.n_qubits} qubits exceeds the {MAX_QUBITS}-qubit cap")


def evolve(ops, state: np.ndarray) -> np.ndarray:
    """Apply ``ops`` in order to a state vector (or to the columns of a matrix)."""
    n = num_qubits(state.shape[0])
    batch = state.shape[1:] or (1,)
    psi = np.asarray(state, dtype=complex).reshape((2,) * n + batch)
    for op in ops:
        psi = _apply_op(psi, op, n)
    return psi.reshape(state.shape)


def unitary_of(c: Circuit) -> np.ndarray:
    """Full register operator; later gates multiply on the left."""
    _check_size(c)
    return evolve(c.ops, np.eye(1 << c.n_qubits, dtype=complex))


def parse_label(label: str, n_qubits: int) -> int:
    if len(label) != n_qubits or any(ch not in "01" for ch in label):
        raise ValueError(f"bad basis label {label!r} for {n_qubits} qubits")
    return int(label, 2)


def format_label(index: int, n_qubits: int) -> str:
    return format(index, f"0{n_qubits}b")


def simulate(c: Circuit, label: str) -> np.ndarray:
    _check_size(c)
    return evolve(c.ops, basis_state(parse_label(label, c.n_qubits), c.n_qubits))


def schedule(c: Circuit) -> LayerSchedule:
    """Greedy ASAP layering: a gate lands one layer after the latest gate on any of its qubits."""
    level = [0] * c.n_qubits
    layers: list[list[Op]] = []
    for op in c.ops:
        k = max(level[q] for q in op.qubits)
        for q in op.qubits:
            level[q] = k + 1
        if k == len(layers):
            layers.append([])
        layers[k].append(op)
    return LayerSchedule(tuple(tuple(layer) for layer in layers))


def depth(c: Circuit) -> int:
    level = [0] * c.n_qubits
    for op in c.ops:
        k = max(level[q] for q in op.qubits) + 1
        for q in op.qubits:
            level[q] = k
    return max(level, default=0)


def gate_counts(c: Circuit) -> Counter:
    return Counter(op.gate for op in c.ops)


def compose(a: Circuit, b: Circuit) -> Circuit:
    """``a`` followed by ``b``."""
    if a.n_qubits != b.n_qubits:
        raise RegisterError(f"cannot compose {a.n_qubits}- and {b.n_qubits}-qubit circuits")
    return Circuit(a.n_qubits, a.ops + b.ops)


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.n_qubits, tuple(inverse_of(op) for op in reversed(c.ops)))


def structurally_equal(a: Circuit, b: Circuit, tol: float = 1e-12) -> bool:
    """Same register, same gate sequence and operands; RZ angles within ``tol``."""
    if a.n_qubits != b.n_qubits or len(a.ops) != len(b.ops):
        return False
    for x, y in zip(a.ops, b.ops):
        if x.gate is not y.gate or x.qubits != y.qubits:
            return False
        if x.theta is not None and not isclose(x.theta, y.theta, rel_tol=0, abs_tol=tol):
            return False
    return True
