"""
Per-qubit Bloch vectors along a circuit and XY-plane renderings.

Contains:
    - reduced_bloch: partial trace of a register state onto one qubit
    - xy_projection, classify_segment: XY-plane geometry
    - snapshot_layers: state before the circuit and after every ASAP layer
    - render: deterministic SVG 1.1 or ASCII plots of snapshots

Basis inputs to the swap core become entangled between the two CNOTs, so a
single qubit has no pure state there. Each plane shows the reduced state:
the arrow ends at (x, y) of the reduced Bloch vector and therefore shrinks
toward the centre as the qubit becomes mixed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import atan2, cos, hypot, pi, sin

import numpy as np

from .circuit import Circuit, evolve, format_label, parse_label, schedule
from .linalg import as_state, basis_state, num_qubits, wrap_angle

SEGMENT_TOL = 1e-9


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float
    purity: float

    @property
    def length(self) -> float:
        return float(np.sqrt(self.x**2 + self.y**2 + self.z**2))


def reduced_density(s, qubit: int) -> np.ndarray:
    psi = as_state(s)
    n = num_qubits(psi.shape[0])
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    t = np.moveaxis(psi.reshape((2,) * n), n - 1 - qubit, 0).reshape(2, -1)
    return t @ t.conj().T


def reduced_bloch(s, qubit: int) -> BlochVector:
    rho = reduced_density(s, qubit)
    return BlochVector(
        x=float(2 * rho[0, 1].real),
        y=float(2 * rho[1, 0].imag),
        z=float((rho[0, 0] - rho[1, 1]).real),
        purity=float(np.trace(rho @ rho).real),
    )


def xy_projection(v: BlochVector) -> tuple[float, float, float, float]:
    """(x, y, in-plane angle, radius); a vector on the z axis gets angle 0."""
    radius = hypot(v.x, v.y)
    angle = wrap_angle(atan2(v.y, v.x)) if radius > 1e-12 else 0.0
    return v.x, v.y, angle, radius


class Segment(Enum):
    SEMICIRCLE = "semicircle"
    QUADRANT = "quadrant"
    OCTANT = "octant"
    GENERIC = "generic"


@dataclass(frozen=True)
class SegmentClass:
    kind: Segment
    angle: float  # |theta| folded into [0, pi]


_NAMED = ((pi, Segment.SEMICIRCLE), (pi / 2, Segment.QUADRANT), (pi / 4, Segment.OCTANT))


def classify_segment(theta: float) -> SegmentClass:
    mag = abs(wrap_angle(theta))
    for ref, kind in _NAMED:
        if abs(mag - ref) <= SEGMENT_TOL:
            return SegmentClass(kind, ref)
    return SegmentClass(Segment.GENERIC, mag)


@dataclass(frozen=True)
class LayerSnapshot:
    layer_index: int
    per_qubit: tuple[BlochVector, ...]
    state: np.ndarray
    phase: float  # argument of the largest amplitude

    def basis_label(self, tol: float = 1e-9) -> str | None:
        """Label of the basis state this snapshot equals up to phase, if any."""
        mag = np.abs(self.state)
        i = int(np.argmax(mag))
        if abs(mag[i] - 1) > tol:
            return None
        return format_label(i, num_qubits(len(self.state)))


def _snapshot(k: int, psi: np.ndarray) -> LayerSnapshot:
    n = num_qubits(len(psi))
    mag = np.abs(psi)
    # first index within 1e-9 of the max keeps ties deterministic
    lead = int(np.flatnonzero(mag >= mag.max() - 1e-9)[0])
    psi = psi.copy()
    psi.setflags(write=False)
    return LayerSnapshot(
        layer_index=k,
        per_qubit=tuple(reduced_bloch(psi, q) for q in range(n)),
        state=psi,
        phase=wrap_angle(float(np.angle(psi[lead]))),
    )


def snapshot_layers(c: Circuit, label: str) -> list[LayerSnapshot]:
    psi = basis_state(parse_label(label, c.n_qubits), c.n_qubits)
    snaps = [_snapshot(0, psi)]
    for k, layer in enumerate(schedule(c).layers, start=1):
        psi = evolve(layer, psi)
        snaps.append(_snapshot(k, psi))
    return snaps


# -- rendering --------------------------------------------------------------

PALETTE = ((0.0, "blue", "#1f5fd6"), (pi / 2, "pink", "#f07ac0"), (pi, "red", "#d62728"))
OTHER = ("gray", "#808080")


def phase_color(phase: float, tol: float = 1e-6) -> tuple[str, str]:
    """Color for a relative phase: blue 0, pink +pi/2, red +pi, gray otherwise."""
    p = wrap_angle(phase)
    for ref, name, hexcode in PALETTE:
        if abs(wrap_angle(p - ref)) <= tol:
            return name, hexcode
    return OTHER


ASCII_SIZE = 21


def _ascii_plane(v: BlochVector) -> list[str]:
    half = ASCII_SIZE // 2
    grid = [[" "] * ASCII_SIZE for _ in range(ASCII_SIZE)]
    for r in range(ASCII_SIZE):
        for c in range(ASCII_SIZE):
            u, w = (c - half) / half, (half - r) / half
            if round(hypot(u, w) * half) == half:
                grid[r][c] = "."
    for i in range(ASCII_SIZE):
        grid[half][i] = "-" if grid[half][i] == " " else grid[half][i]
        grid[i][half] = "|" if grid[i][half] == " " else grid[i][half]
    grid[half][half] = "+"
    steps = 2 * half
    for s in range(1, steps):
        t = s / steps
        c = half + round(t * v.x * half)
        r = half - round(t * v.y * half)
        if (r, c) != (half, half):
            grid[r][c] = "*"
    grid[half - round(v.y * half)][half + round(v.x * half)] = "@"
    return ["".join(row) for row in grid]


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _references(snapshots, reference_phase) -> list[float]:
    if np.ndim(reference_phase) == 0:
        return [float(reference_phase)] * len(snapshots)
    refs = [float(p) for p in reference_phase]
    if len(refs) != len(snapshots):
        raise ValueError("need one reference phase per snapshot")
    return refs


def render_ascii(snapshots, reference_phase=0.0) -> str:
    out = []
    for snap, ref in zip(snapshots, _references(snapshots, reference_phase)):
        color, _ = phase_color(snap.phase - ref)
        for q, v in enumerate(snap.per_qubit):
            _, _, angle, radius = xy_projection(v)
            out.append(
                f"[psi{snap.layer_index} q{q}] x={_fmt(v.x)} y={_fmt(v.y)} z={_fmt(v.z)} "
                f"r_xy={_fmt(radius)} angle={_fmt(angle)} purity={_fmt(v.purity)} phase={color}"
            )
            out.extend(_ascii_plane(v))
            out.append("")
    return "\n".join(out)


_CELL = 120
_R = 44


def render_svg(snapshots, reference_phase=0.0) -> str:
    n_q = len(snapshots[0].per_qubit)
    width, height = _CELL * len(snapshots), _CELL * n_q + 30
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<desc>XY-plane projections of reduced single-qubit states; arrow length is the "
        "in-plane radius, which shrinks below 1 for mixed (entangled) qubits. Colors give the "
        "relative phase: blue 0, pink +pi/2, red +pi.</desc>",
    ]
    refs = _references(snapshots, reference_phase)
    for col, snap in enumerate(snapshots):
        _, stroke = phase_color(snap.phase - refs[col])
        cx0 = col * _CELL + _CELL // 2
        parts.append(
            f'<text x="{cx0}" y="{height - 8}" text-anchor="middle" font-size="12">'
            f"psi{snap.layer_index}</text>"
        )
        for q, v in enumerate(snap.per_qubit):
            cy0 = q * _CELL + _CELL // 2
            ex, ey = cx0 + _R * v.x, cy0 - _R * v.y
            parts.append(
                f'<g class="plane" data-layer="{snap.layer_index}" data-qubit="{q}" '
                f'data-purity="{_fmt(v.purity)}">'
            )
            parts.append(
                f'<circle cx="{cx0}" cy="{cy0}" r="{_R}" fill="none" stroke="#444" stroke-width="1"/>'
            )
            parts.append(
                f'<line x1="{cx0 - _R}" y1="{cy0}" x2="{cx0 + _R}" y2="{cy0}" stroke="#bbb" '
                f'stroke-dasharray="2,2"/>'
            )
            parts.append(
                f'<line x1="{cx0}" y1="{cy0 - _R}" x2="{cx0}" y2="{cy0 + _R}" stroke="#bbb" '
                f'stroke-dasharray="2,2"/>'
            )
            for k in range(8):
                a = k * pi / 4
                parts.append(
                    f'<circle cx="{_fmt(cx0 + _R * cos(a))}" cy="{_fmt(cy0 - _R * sin(a))}" '
                    f'r="1.5" fill="#000"/>'
                )
            parts.append(
                f'<line class="arrow" x1="{cx0}" y1="{cy0}" x2="{_fmt(ex)}" y2="{_fmt(ey)}" '
                f'stroke="{stroke}" stroke-width="2.5"/>'
            )
            parts.append(f'<circle cx="{_fmt(ex)}" cy="{_fmt(ey)}" r="3" fill="{stroke}"/>')
            parts.append(
                f'<text x="{cx0 - _R}" y="{cy0 - _R - 4}" font-size="10">q{q} '
                f"purity {_fmt(v.purity)}</text>"
            )
            parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(snapshots, fmt: str = "svg", reference_phase=0.0) -> str:
    """Render snapshots as SVG or ASCII text.

    ``reference_phase`` (a single angle, or one per snapshot) is subtracted
    from each snapshot's leading-amplitude phase before it is colored. Passing
    the phases of a second input's snapshots colors the plot by the phase
    picked up relative to that input, layer by layer.
    """
    snapshots = list(snapshots)
    if not snapshots:
        raise ValueError("nothing to render")
    if fmt == "svg":
        return render_svg(snapshots, reference_phase)
    if fmt == "ascii":
        return render_ascii(snapshots, reference_phase)
    raise ValueError(f"unknown format {fmt!r}; use 'svg' or 'ascii'")
