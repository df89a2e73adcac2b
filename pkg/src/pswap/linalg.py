"""
Dense complex linear algebra for small qubit registers.

Contains:
    - matmul, kron, dagger: basic operator arithmetic
    - is_unitary, equal_up_to_global_phase: equivalence checks
    - apply, basis_state: state-vector helpers
    - wrap_angle: fold an angle into (-pi, pi]

Matrices and state vectors are plain complex numpy arrays. Every public
function validates its inputs (square, finite, matching dimensions) and
never mutates them.
"""
from __future__ import annotations

from math import pi

import numpy as np

DEFAULT_TOL = 1e-9
MAX_QUBITS = 10


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def as_state(s) -> np.ndarray:
    v = np.asarray(s, dtype=complex)
    if v.ndim != 1 or v.shape[0] == 0:
        raise DimensionError(f"expected a non-empty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("state has non-finite amplitudes")
    return v


def num_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim <= 0 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def wrap_angle(theta: float) -> float:
    """Fold ``theta`` into (-pi, pi]; +pi is kept, -pi maps to +pi."""
    w = float(np.remainder(theta + pi, 2 * pi)) - pi
    if w <= -pi + 1e-15:
        w = pi
    return w


def matmul(a, b) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return as_matrix(a).conj().T


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    """True iff ``max|a^dagger a - I| <= tol``."""
    m = as_matrix(a)
    err = np.abs(m.conj().T @ m - np.eye(m.shape[0]))
    return bool(err.max() <= tol)


def equal_up_to_global_phase(a, b, tol: float = DEFAULT_TOL) -> float | None:
    """Return phi in (-pi, pi] with ``a ~= exp(i*phi) * b``, or None.

    The phase is read off the first entry (row-major) of ``b`` whose modulus
    exceeds ``tol``; the match is then checked entrywise against ``tol``.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    flat_b = b.ravel()
    big = np.flatnonzero(np.abs(flat_b) > tol)
    if big.size == 0:
        return 0.0 if np.abs(a).max() <= tol else None
    k = big[0]
    ratio = a.ravel()[k] / flat_b[k]
    phi = wrap_angle(float(np.angle(ratio)))
    if np.abs(a - np.exp(1j * phi) * b).max() <= tol:
        return phi
    return None


def apply(a, s) -> np.ndarray:
    a, s = as_matrix(a), as_state(s)
    if a.shape[0] != s.shape[0]:
        raise DimensionError(f"operator dim {a.shape[0]} does not match state dim {s.shape[0]}")
    return a @ s


def basis_state(index: int, n_qubits: int) -> np.ndarray:
    dim = 1 << n_qubits
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for {n_qubits} qubits")
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v
