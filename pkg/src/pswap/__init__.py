"""Two-CNOT phase-customizable swap gates: synthesis, analysis, transpilation."""

from .circuit import Circuit, depth, gate_counts, simulate, unitary_of
from .gates import Gate, Op
from .synth import (
    CONCEPTS,
    Cofactors,
    extract_phased_permutation,
    iswap,
    pswap_core,
    pswap_from_cofactors,
    pswap_from_concept,
    relative_phase,
    standard_swap,
)

__all__ = [
    "CONCEPTS",
    "Circuit",
    "Cofactors",
    "Gate",
    "Op",
    "depth",
    "extract_phased_permutation",
    "gate_counts",
    "iswap",
    "pswap_core",
    "pswap_from_cofactors",
    "pswap_from_concept",
    "relative_phase",
    "simulate",
    "standard_swap",
    "unitary_of",
]
