"""
Swap-family constructors and phased-permutation analysis.

Contains:
    - standard_swap, iswap, pswap_core: fixed two-qubit swap circuits
    - Cofactors, pswap_from_cofactors: the phase-customized p-SWAP
    - SwapConcept, CONCEPTS, pswap_from_concept: the six reference designs
    - PhasedPermutation, extract_phased_permutation, relative_phase,
      is_boolean_swap: semantic analysis of swap-like unitaries

The p-SWAP places two RZ "cofactor" gates (nu on q0, omega on q1) in front
of the two-CNOT core H(q0) CX(q0,q1) CX(q1,q0) H(q1). Both are diagonal,
so they only re-phase the input basis states; the core then carries those
phases through the swap.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import pi

import numpy as np

from .circuit import Circuit, evolve, format_label
from .gates import Gate, Op, rz
from .linalg import DEFAULT_TOL, as_matrix, basis_state, num_qubits, wrap_angle

log = logging.getLogger(__name__)

LABELS_2Q = ("00", "01", "10", "11")


class NotPhasedPermutation(ValueError):
    """Some column of the unitary does not have exactly one unit-modulus entry."""


class InconsistentPhases(ValueError):
    """The declared effected set does not split the phases into two uniform groups."""


def _cx(c: int, t: int) -> Op:
    return Op(Gate.CX, (c, t))


_CORE = (Op(Gate.H, (0,)), _cx(0, 1), _cx(1, 0), Op(Gate.H, (1,)))


def standard_swap() -> Circuit:
    return Circuit(2, (_cx(0, 1), _cx(1, 0), _cx(0, 1)))


def iswap() -> Circuit:
    return Circuit(2, (Op(Gate.S, (0,)), Op(Gate.S, (1,))) + _CORE)


def pswap_core() -> Circuit:
    """Boolean p-SWAP: swaps basis states using two CNOTs, phase ignored."""
    return Circuit(2, _CORE)


@dataclass(frozen=True)
class Cofactors:
    """Angles nu = nu_sign*A*pi/B on q0 and omega = omega_sign*C*pi/D on q1.

    ``A`` (or ``C``) may be 0 to leave that gate out.
    """

    nu_sign: int
    A: int
    B: int
    omega_sign: int
    C: int
    D: int

    def __post_init__(self):
        for name in ("nu_sign", "omega_sign"):
            if getattr(self, name) not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1")
        if self.B == 0 or self.D == 0:
            raise ValueError("cofactor denominators B and D must be nonzero")
        if self.A < 0 or self.C < 0 or self.B < 0 or self.D < 0:
            raise ValueError("cofactors A, B, C, D must be non-negative; use the sign fields")

    @classmethod
    def from_angles(cls, nu: float, omega: float) -> "Cofactors":
        """Nearest cofactors with denominators up to 64 (exact for k*pi/d angles)."""
        from fractions import Fraction

        def split(angle):
            f = Fraction(angle / pi).limit_denominator(64)
            sign = -1 if f < 0 else 1
            return sign, abs(f.numerator), f.denominator

        return cls(*split(nu), *split(omega))

    @staticmethod
    def _angle(sign: int, num: int, den: int, label: str) -> float:
        raw = sign * num * pi / den
        wrapped = wrap_angle(raw)
        if abs(wrapped - raw) > 1e-12:
            log.warning("%s angle %r wrapped into (-pi, pi] as %r", label, raw, wrapped)
        return wrapped

    @property
    def nu(self) -> float:
        return self._angle(self.nu_sign, self.A, self.B, "nu")

    @property
    def omega(self) -> float:
        return self._angle(self.omega_sign, self.C, self.D, "omega")


def pswap_from_cofactors(cf: Cofactors) -> Circuit:
    """nu, omega as the first layer, then the two-CNOT core; zero angles are omitted."""
    head = []
    if cf.A:
        head.append(rz(0, cf.nu))
    if cf.C:
        head.append(rz(1, cf.omega))
    return Circuit(2, tuple(head) + _CORE)


@dataclass(frozen=True)
class SwapConcept:
    id: int
    effected: frozenset[str]
    nu: float | None
    omega: float | None
    expected_p: float

    def cofactors(self) -> Cofactors:
        return Cofactors.from_angles(self.nu or 0.0, self.omega or 0.0)


CONCEPTS: dict[int, SwapConcept] = {
    1: SwapConcept(1, frozenset({"01", "10"}), pi / 2, pi / 2, pi / 2),
    2: SwapConcept(2, frozenset({"00", "11"}), -pi / 2, -pi / 2, pi / 2),
    3: SwapConcept(3, frozenset({"00"}), pi, pi, pi),
    4: SwapConcept(4, frozenset({"01"}), pi, None, pi),
    5: SwapConcept(5, frozenset({"10"}), None, pi, pi),
    6: SwapConcept(6, frozenset({"11"}), None, None, pi),
}


def pswap_from_concept(k: int | SwapConcept) -> tuple[Circuit, frozenset[str], float]:
    concept = k if isinstance(k, SwapConcept) else CONCEPTS.get(k)
    if concept is None:
        raise ValueError(f"concept id must be 1..6, got {k!r}")
    return pswap_from_cofactors(concept.cofactors()), concept.effected, concept.expected_p


@dataclass(frozen=True)
class PhasedPermutation:
    """``u|j> = exp(i*phases[j]) |perm[j]>`` for every basis index j.

    Phases are raw arguments of the matrix entries (reference="absolute");
    relative_phase picks the zero reference from the complement set.
    """

    perm: tuple[int, ...]
    phases: tuple[float, ...]
    reference: str = "absolute"

    @property
    def n_qubits(self) -> int:
        return num_qubits(len(self.perm))

    def transitions(self) -> list[tuple[str, str, float]]:
        n = self.n_qubits
        return [
            (format_label(j, n), format_label(i, n), self.phases[j])
            for j, i in enumerate(self.perm)
        ]

    def relative_to(self, index: int) -> tuple[float, ...]:
        ref = self.phases[index]
        return tuple(wrap_angle(p - ref) for p in self.phases)


def extract_phased_permutation(u, tol: float = DEFAULT_TOL) -> PhasedPermutation:
    m = as_matrix(u)
    mag = np.abs(m)
    perm, phases = [], []
    for j in range(m.shape[1]):
        big = np.flatnonzero(mag[:, j] >= 1 - tol)
        small = mag[:, j] <= tol
        if big.size != 1 or np.count_nonzero(~small) != 1:
            raise NotPhasedPermutation(f"column {j} is not a single unit-modulus entry")
        i = int(big[0])
        perm.append(i)
        phases.append(wrap_angle(float(np.angle(m[i, j]))))
    if len(set(perm)) != len(perm):
        raise NotPhasedPermutation("two columns map to the same basis state")
    return PhasedPermutation(tuple(perm), tuple(phases))


def phased_permutation_by_simulation(c: Circuit, tol: float = DEFAULT_TOL) -> PhasedPermutation:
    """Same analysis as extract_phased_permutation, one basis input at a time.

    Each input is evolved on its own as a state vector, so this path never
    forms the full unitary.
    """
    n = c.n_qubits
    perm, phases = [], []
    for j in range(1 << n):
        out = evolve(c.ops, basis_state(j, n))
        mag = np.abs(out)
        hits = np.flatnonzero(mag >= 1 - tol)
        if hits.size != 1 or np.count_nonzero(mag > tol) != 1:
            raise NotPhasedPermutation(f"input {format_label(j, n)} does not map to a single basis state")
        i = int(hits[0])
        perm.append(i)
        phases.append(wrap_angle(float(np.angle(out[i]))))
    if len(set(perm)) != len(perm):
        raise NotPhasedPermutation("two inputs map to the same basis state")
    return PhasedPermutation(tuple(perm), tuple(phases))


def _uniform(values: list[float], tol: float) -> bool:
    ref = values[0]
    return all(abs(wrap_angle(v - ref)) <= tol for v in values)


def relative_phase(pp: PhasedPermutation, effected, tol: float = DEFAULT_TOL) -> float:
    """Phase p carried by the effected inputs, measured against the rest.

    If ``effected`` covers every input, the phase of input 0 is the reference
    and the result is the spread-free offset relative to it (i.e. 0).
    """
    n = pp.n_qubits
    idx = set()
    for label in effected:
        if isinstance(label, str):
            if len(label) != n or any(ch not in "01" for ch in label):
                raise ValueError(f"bad basis label {label!r}")
            idx.add(int(label, 2))
        else:
            idx.add(int(label))
    if not idx:
        raise ValueError("effected set must be nonempty")
    rest = [j for j in range(len(pp.perm)) if j not in idx]
    eff_phases = [pp.phases[j] for j in sorted(idx)]
    if not _uniform(eff_phases, tol):
        raise InconsistentPhases("effected inputs do not share one phase")
    if not rest:
        return wrap_angle(eff_phases[0] - pp.phases[0])
    rest_phases = [pp.phases[j] for j in rest]
    if not _uniform(rest_phases, tol):
        raise InconsistentPhases("complement inputs do not share one phase")
    return wrap_angle(eff_phases[0] - rest_phases[0])


SWAP_PERM = (0, 2, 1, 3)


def is_boolean_swap(pp: PhasedPermutation) -> bool:
    return pp.perm == SWAP_PERM
