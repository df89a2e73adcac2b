"""
Lowering to the native basis {X, SX, RZ, ECR} and transpilation cost.

Contains:
    - RewriteRule: one-gate rewrite verified against the catalog at construction
    - derive_cx_to_ecr: bounded search for a single-ECR CX decomposition
    - decompose_to_native: recursive rule application with phase tracking
    - peephole_optimize: phase-exact wire-local merges to a fixed point
    - transpile: decompose + optimize
    - metrics / TranspileReport: N1, N2, D, TQC
    - compare_report: cost table with pairwise reductions

Global phase is tracked rather than discarded: every function returning a
``(circuit, phase)`` pair guarantees ``U_out == exp(i*phase) * U_in``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import pi

import numpy as np

from .circuit import Circuit, depth, evolve, gate_counts
from .gates import Gate, Op, is_native, matrix_of
from .linalg import DEFAULT_TOL, equal_up_to_global_phase, wrap_angle
from . import synth


class SearchExhausted(RuntimeError):
    pass


class NonNativeGate(ValueError):
    pass


# (gate, operand positions into the pattern's qubits, angle)
Template = tuple[Gate, tuple[int, ...], "float | None"]


def _local_unitary(templates, arity: int) -> np.ndarray:
    ops = [Op(g, pos, theta) for g, pos, theta in templates]
    return evolve(ops, np.eye(1 << arity, dtype=complex))


@dataclass(frozen=True)
class RewriteRule:
    """``pattern`` on operands (q0, q1, ...) becomes ``replacement``.

    The replacement's unitary equals the pattern's times
    ``exp(i*global_phase_delta)``; this is checked on construction.
    """

    pattern: Gate
    replacement: tuple[Template, ...]
    global_phase_delta: float

    def __post_init__(self):
        object.__setattr__(self, "replacement", tuple(self.replacement))
        target = matrix_of(self.pattern)
        got = _local_unitary(self.replacement, self.pattern.arity)
        want = np.exp(1j * self.global_phase_delta) * target
        if np.abs(got - want).max() > DEFAULT_TOL:
            raise ValueError(f"rewrite rule for {self.pattern.value} does not reproduce its pattern")

    @classmethod
    def derive(cls, pattern: Gate, replacement) -> "RewriteRule":
        """Build a rule, reading the phase delta off the matrices."""
        phase = equal_up_to_global_phase(
            _local_unitary(replacement, pattern.arity), matrix_of(pattern)
        )
        if phase is None:
            raise ValueError(f"replacement is not equivalent to {pattern.value}")
        return cls(pattern, tuple(replacement), phase)

    def apply(self, op: Op) -> list[Op]:
        return [Op(g, tuple(op.qubits[p] for p in pos), theta) for g, pos, theta in self.replacement]


# -- CX -> ECR search -------------------------------------------------------

# RZ(k*pi/2) for k in {1, -1, 2} (k = 0 is the empty word), then SX, X
GENERATORS: tuple[tuple[Gate, float | None], ...] = (
    (Gate.RZ, pi / 2),
    (Gate.RZ, -pi / 2),
    (Gate.RZ, pi),
    (Gate.SX, None),
    (Gate.X, None),
)
MAX_WORD = 3


def _phase_key(m: np.ndarray) -> tuple:
    flat = m.ravel()
    k = np.flatnonzero(np.abs(flat) > 1e-9)[0]
    norm = flat * np.exp(-1j * np.angle(flat[k]))
    norm = np.round(norm, 9) + 0.0  # drop -0.0
    return tuple(complex(z) for z in norm)


def _word_matrix(word: tuple[int, ...]) -> np.ndarray:
    m = np.eye(2, dtype=complex)
    for g in word:
        gate, theta = GENERATORS[g]
        m = matrix_of(gate, theta) @ m
    return m


def _word_classes() -> dict[tuple, tuple[int, ...]]:
    """Shortest, then lexicographically first, word for each unitary up to phase."""
    classes: dict[tuple, tuple[int, ...]] = {}
    for length in range(MAX_WORD + 1):
        for word in itertools.product(range(len(GENERATORS)), repeat=length):
            classes.setdefault(_phase_key(_word_matrix(word)), word)
    return classes


def _word_templates(word, pos: int) -> list[Template]:
    return [(GENERATORS[g][0], (pos,), GENERATORS[g][1]) for g in word]


# CX with the control on local bit 1, i.e. CX(1 -> 0) in local operands
_CX_REVERSED = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


@lru_cache(maxsize=2)
def derive_cx_to_ecr(reverse: bool = False) -> RewriteRule:
    """Find CX = (L1 x L0) ECR (R1 x R0) up to global phase.

    Each dressing L0, L1, R0, R1 is a word of at most three generators. The
    search enumerates every right dressing, solves for the left one and
    checks whether it factors into two dressing words. Ties are broken by
    total gate count, then lexicographically on (R0, R1, L0, L1).

    With ``reverse`` the rule still matches CX(c, t) but emits ECR(t, c), for
    targets whose ECR only runs the other way round.
    """
    target = _CX_REVERSED if reverse else matrix_of(Gate.CX)
    classes = _word_classes()
    reps = sorted(classes.values(), key=lambda w: (len(w), w))
    mats = {w: _word_matrix(w) for w in reps}
    left_pairs = {}
    for l1, l0 in itertools.product(reps, repeat=2):
        left_pairs.setdefault(_phase_key(np.kron(mats[l1], mats[l0])), (l0, l1))

    ecr_dag = matrix_of(Gate.ECR).conj().T
    best = None
    for r0, r1 in itertools.product(reps, repeat=2):
        right = np.kron(mats[r1], mats[r0])
        left = target @ right.conj().T @ ecr_dag
        hit = left_pairs.get(_phase_key(left))
        if hit is None:
            continue
        l0, l1 = hit
        key = (len(r0) + len(r1) + len(l0) + len(l1), (r0, r1, l0, l1))
        if best is None or key < best:
            best = key
    if best is None:
        raise SearchExhausted("no single-ECR decomposition of CX within the generator bounds")
    r0, r1, l0, l1 = best[1]
    templates = (
        _word_templates(r0, 0)
        + _word_templates(r1, 1)
        + [(Gate.ECR, (0, 1), None)]
        + _word_templates(l0, 0)
        + _word_templates(l1, 1)
    )
    if reverse:
        templates = [(g, tuple(1 - p for p in pos), theta) for g, pos, theta in templates]
    return RewriteRule.derive(Gate.CX, templates)


# -- rule table -------------------------------------------------------------


def _iswap_templates() -> list[Template]:
    return [(op.gate, op.qubits, op.theta) for op in synth.iswap().ops]


@lru_cache(maxsize=1)
def rules() -> dict[Gate, RewriteRule]:
    d = RewriteRule.derive
    table = [
        d(Gate.H, [(Gate.RZ, (0,), pi / 2), (Gate.SX, (0,), None), (Gate.RZ, (0,), pi / 2)]),
        d(Gate.S, [(Gate.RZ, (0,), pi / 2)]),
        d(Gate.SDG, [(Gate.RZ, (0,), -pi / 2)]),
        d(Gate.Z, [(Gate.RZ, (0,), pi)]),
        d(Gate.T, [(Gate.RZ, (0,), pi / 4)]),
        d(Gate.TDG, [(Gate.RZ, (0,), -pi / 4)]),
        d(Gate.Y, [(Gate.RZ, (0,), pi), (Gate.X, (0,), None)]),
        d(Gate.SXDG, [(Gate.SX, (0,), None), (Gate.X, (0,), None)]),
        d(Gate.SWAP, [(Gate.CX, (0, 1), None), (Gate.CX, (1, 0), None), (Gate.CX, (0, 1), None)]),
        d(Gate.ISWAP, _iswap_templates()),
        d(
            Gate.ISWAPDG,
            [
                (Gate.H, (1,), None),
                (Gate.CX, (1, 0), None),
                (Gate.CX, (0, 1), None),
                (Gate.H, (0,), None),
                (Gate.SDG, (1,), None),
                (Gate.SDG, (0,), None),
            ],
        ),
        derive_cx_to_ecr(),
    ]
    return {r.pattern: r for r in table}


ECR_DIRECTIONS = ("free", "ascending", "descending")


def _cx_rule(op: Op, ecr_direction: str) -> RewriteRule:
    c, t = op.qubits
    if ecr_direction == "free":
        return derive_cx_to_ecr()
    wants_forward = (c < t) == (ecr_direction == "ascending")
    return derive_cx_to_ecr(reverse=not wants_forward)


def decompose_to_native(c: Circuit, ecr_direction: str = "free") -> tuple[Circuit, float]:
    """Rewrite until only native gates remain; returns (circuit, phase).

    ``ecr_direction`` constrains the orientation of the ECR gates emitted for
    CX: "free" uses ECR(control, target); "ascending"/"descending" force the
    first ECR operand to be the lower/higher register index. ECR gates already
    present in the input are kept as they are.
    """
    if ecr_direction not in ECR_DIRECTIONS:
        raise ValueError(f"ecr_direction must be one of {ECR_DIRECTIONS}")
    table = rules()
    out: list[Op] = []
    phase = 0.0
    stack = list(reversed(c.ops))
    while stack:
        op = stack.pop()
        if is_native(op.gate):
            out.append(op)
            continue
        rule = _cx_rule(op, ecr_direction) if op.gate is Gate.CX else table.get(op.gate)
        if rule is None:
            raise ValueError(f"no rewrite rule for {op.gate.value}")
        phase += rule.global_phase_delta
        stack.extend(reversed(rule.apply(op)))
    return Circuit(c.n_qubits, tuple(out)), wrap_angle(phase)


# -- peephole optimizer -----------------------------------------------------


def _normalize_rz(q: int, theta: float) -> tuple[Op | None, float]:
    """RZ(theta) as RZ(w) with w in (-pi, pi], or None if w == 0.

    RZ(theta - 2*pi*k) = (-1)^k RZ(theta), so shifting by k turns costs k*pi
    of global phase, which is returned alongside.
    """
    w = wrap_angle(theta)
    k = round((theta - w) / (2 * pi))
    phase = -k * pi
    if abs(w) <= 1e-12:
        return None, phase
    return Op(Gate.RZ, (q,), w), phase


def _merge(a: Op, b: Op) -> tuple[bool, Op | None, float]:
    """Combine ``a`` then ``b`` on one wire. Returns (merged?, result, phase)."""
    if a.gate is Gate.RZ and b.gate is Gate.RZ:
        res, phase = _normalize_rz(a.qubits[0], a.theta + b.theta)
        return True, res, phase
    if a.gate is Gate.X and b.gate is Gate.X:
        return True, None, 0.0
    if a.gate is Gate.SX and b.gate is Gate.SX:
        return True, Op(Gate.X, a.qubits), 0.0
    return False, None, 0.0


def _optimize_pass(c: Circuit) -> tuple[list[Op], float]:
    out: list[Op | None] = []
    wires: list[list[int]] = [[] for _ in range(c.n_qubits)]
    phase = 0.0
    for op in c.ops:
        if len(op.qubits) == 1:
            q = op.qubits[0]
            cur: Op | None = op
            if cur.gate is Gate.I:
                continue
            if cur.gate is Gate.RZ:
                cur, dp = _normalize_rz(q, cur.theta)
                phase += dp
            while cur is not None and wires[q]:
                top = out[wires[q][-1]]
                if len(top.qubits) != 1:
                    break
                merged, res, dp = _merge(top, cur)
                if not merged:
                    break
                phase += dp
                out[wires[q].pop()] = None
                cur = res
            if cur is not None:
                wires[q].append(len(out))
                out.append(cur)
        else:
            for q in op.qubits:
                wires[q].append(len(out))
            out.append(op)
    return [op for op in out if op is not None], phase


def peephole_optimize_tracked(c: Circuit) -> tuple[Circuit, float]:
    """Fixed point of the wire-local rules; returns (circuit, phase).

    Rules: drop I; merge adjacent RZ and fold the angle into (-pi, pi];
    drop RZ(0 mod 2*pi); X X -> nothing; SX SX -> X. Gates are adjacent on a
    wire when no other gate touches that wire between them.
    """
    phase = 0.0
    ops = list(c.ops)
    for _ in range(len(ops) + 1):
        new, dp = _optimize_pass(Circuit(c.n_qubits, tuple(ops)))
        phase += dp
        if new == ops:
            break
        ops = new
    return Circuit(c.n_qubits, tuple(ops)), wrap_angle(phase)


def peephole_optimize(c: Circuit) -> Circuit:
    return peephole_optimize_tracked(c)[0]


def transpile(c: Circuit, ecr_direction: str = "free") -> tuple[Circuit, float]:
    native, p1 = decompose_to_native(c, ecr_direction)
    opt, p2 = peephole_optimize_tracked(native)
    return opt, wrap_angle(p1 + p2)


# -- metrics ----------------------------------------------------------------


@dataclass(frozen=True)
class TranspileReport:
    n1: int
    n2: int
    depth: int

    @property
    def tqc(self) -> int:
        return self.n1 + self.n2 + self.depth

    def as_row(self) -> tuple[int, int, int, int]:
        return (self.n1, self.n2, self.depth, self.tqc)


def metrics(c: Circuit) -> TranspileReport:
    bad = sorted({op.gate.value for op in c.ops if not is_native(op.gate)})
    if bad:
        raise NonNativeGate(f"non-native gates present: {', '.join(bad)}")
    counts = gate_counts(c)
    n1 = counts[Gate.X] + counts[Gate.SX] + counts[Gate.RZ]
    return TranspileReport(n1=n1, n2=counts[Gate.ECR], depth=depth(c))


def reduction(before: float, after: float) -> float:
    """Fractional reduction (before - after) / before; 0 when before is 0."""
    return (before - after) / before if before else 0.0


@dataclass(frozen=True)
class Comparison:
    rows: tuple[tuple[str, TranspileReport], ...]

    def reductions(self) -> list[tuple[str, str, float, float]]:
        """(baseline, candidate, TQC reduction, depth reduction) for each ordered pair."""
        out = []
        for (na, ra), (nb, rb) in itertools.combinations(self.rows, 2):
            out.append((na, nb, reduction(ra.tqc, rb.tqc), reduction(ra.depth, rb.depth)))
        return out

    def format(self, fmt: str = "text") -> str:
        header = ("", "N1", "N2", "D", "TQC")
        body = [(name, *map(str, r.as_row())) for name, r in self.rows]
        lines = []
        if fmt == "markdown":
            lines.append("| " + " | ".join(header) + " |")
            lines.append("|---|---:|---:|---:|---:|")
            lines += ["| " + " | ".join(row) + " |" for row in body]
        elif fmt == "text":
            width = max([len(n) for n, _ in self.rows] + [4])
            lines.append(f"{'':<{width}}  {'N1':>4} {'N2':>4} {'D':>4} {'TQC':>4}")
            lines += [f"{row[0]:<{width}}  " + " ".join(f"{v:>4}" for v in row[1:]) for row in body]
        else:
            raise ValueError(f"unknown report format {fmt!r}")
        lines.append("")
        for na, nb, tqc_red, d_red in self.reductions():
            lines.append(
                f"{nb} vs {na}: TQC reduction {100 * tqc_red:.1f}%, depth reduction {100 * d_red:.1f}%"
            )
        return "\n".join(lines) + "\n"


def compare_report(circuits, ecr_direction: str = "free") -> Comparison:
    """Transpile each named circuit and tabulate its cost.

    ``circuits`` is an iterable of (name, Circuit) pairs, kept in order.
    """
    rows = []
    for name, c in circuits:
        native, _ = transpile(c, ecr_direction)
        rows.append((name, metrics(native)))
    return Comparison(tuple(rows))


def builtin_trio() -> list[tuple[str, Circuit]]:
    return [
        ("Standard SWAP", synth.standard_swap()),
        ("iSWAP", synth.iswap()),
        ("p-SWAP", synth.pswap_from_concept(1)[0]),
    ]
