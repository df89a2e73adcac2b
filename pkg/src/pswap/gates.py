"""
Gate catalog: named gates, their exact matrices, native-basis membership
and inverses.

Basis ordering is little-endian throughout: for a 2-qubit gate acting on
operands (a, b) the local index is ``bit_a + 2*bit_b``, so the first
operand is the least-significant bit. For CX the first operand is the
control; for ECR it is the first operand of the echoed cross-resonance.

Conventions:
    RZ(t) = diag(exp(-i t/2), exp(+i t/2))
    SX    = 1/2 [[1+i, 1-i], [1-i, 1+i]]
    ECR   = 1/sqrt(2) (IX - XY)
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import isfinite, pi, sqrt

import numpy as np


class Gate(Enum):
    I = "id"
    X = "x"
    SX = "sx"
    SXDG = "sxdg"
    Y = "y"
    Z = "z"
    H = "h"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RZ = "rz"
    CX = "cx"
    ECR = "ecr"
    SWAP = "swap"
    ISWAP = "iswap"
    ISWAPDG = "iswapdg"

    @property
    def arity(self) -> int:
        return 2 if self in _TWO_QUBIT else 1

    @property
    def n_params(self) -> int:
        return 1 if self is Gate.RZ else 0

    @classmethod
    def from_name(cls, name: str) -> "Gate":
        return _BY_NAME[name]


_TWO_QUBIT = frozenset({Gate.CX, Gate.ECR, Gate.SWAP, Gate.ISWAP, Gate.ISWAPDG})
_BY_NAME = {g.value: g for g in Gate}

NATIVE_GATES = frozenset({Gate.I, Gate.X, Gate.SX, Gate.RZ, Gate.ECR})


@dataclass(frozen=True)
class Op:
    """A gate applied to specific register indices.

    ``theta`` is only set for RZ and is stored exactly as given.
    """

    gate: Gate
    qubits: tuple[int, ...]
    theta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(self.qubits) != self.gate.arity:
            raise ValueError(f"{self.gate.value} takes {self.gate.arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit in {self.gate.value}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        if self.gate is Gate.RZ:
            if self.theta is None or not isfinite(self.theta):
                raise ValueError("rz needs a finite angle")
            object.__setattr__(self, "theta", float(self.theta))
        elif self.theta is not None:
            raise ValueError(f"{self.gate.value} takes no parameter")

    def __str__(self) -> str:
        args = ",".join(f"q{q}" for q in self.qubits)
        if self.theta is not None:
            return f"{self.gate.value}({self.theta:.6g}) {args}"
        return f"{self.gate.value} {args}"


def rz(q: int, theta: float) -> Op:
    return Op(Gate.RZ, (q,), theta)


_R2 = 1 / sqrt(2)

_FIXED = {
    Gate.I: np.eye(2, dtype=complex),
    Gate.X: np.array([[0, 1], [1, 0]], dtype=complex),
    Gate.SX: 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex),
    Gate.SXDG: 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]], dtype=complex),
    Gate.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    Gate.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    Gate.H: _R2 * np.array([[1, 1], [1, -1]], dtype=complex),
    Gate.S: np.diag([1, 1j]).astype(complex),
    Gate.SDG: np.diag([1, -1j]).astype(complex),
    Gate.T: np.diag([1, np.exp(1j * pi / 4)]),
    Gate.TDG: np.diag([1, np.exp(-1j * pi / 4)]),
    # control = local bit 0
    Gate.CX: np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex
    ),
    Gate.ECR: _R2 * np.array(
        [[0, 1, 0, 1j], [1, 0, -1j, 0], [0, 1j, 0, 1], [-1j, 0, 1, 0]], dtype=complex
    ),
    Gate.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
    Gate.ISWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
    Gate.ISWAPDG: np.array(
        [[1, 0, 0, 0], [0, 0, -1j, 0], [0, -1j, 0, 0], [0, 0, 0, 1]], dtype=complex
    ),
}
for _m in _FIXED.values():
    _m.setflags(write=False)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def matrix_of(gate: Gate, theta: float | None = None) -> np.ndarray:
    """Exact local matrix of a catalog gate (2x2 or 4x4)."""
    if gate is Gate.RZ:
        if theta is None:
            raise ValueError("rz needs an angle")
        return rz_matrix(theta)
    return _FIXED[gate].copy()


def op_matrix(op: Op) -> np.ndarray:
    return matrix_of(op.gate, op.theta)


def is_native(gate: Gate) -> bool:
    return gate in NATIVE_GATES


_INVERSE = {
    Gate.S: Gate.SDG,
    Gate.SDG: Gate.S,
    Gate.T: Gate.TDG,
    Gate.TDG: Gate.T,
    Gate.SX: Gate.SXDG,
    Gate.SXDG: Gate.SX,
    Gate.ISWAP: Gate.ISWAPDG,
    Gate.ISWAPDG: Gate.ISWAP,
}


def inverse_of(op: Op) -> Op:
    """Gate whose matrix is the conjugate transpose of ``op``'s."""
    if op.gate is Gate.RZ:
        return Op(Gate.RZ, op.qubits, -op.theta)
    return Op(_INVERSE.get(op.gate, op.gate), op.qubits)
