import re

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pswap.bloch import (
    ASCII_SIZE,
    BlochVector,
    Segment,
    classify_segment,
    phase_color,
    reduced_bloch,
    reduced_density,
    render,
    snapshot_layers,
    xy_projection,
)
from pswap.synth import pswap_core, pswap_from_concept

PI = np.pi
S2 = np.sqrt(2)


@pytest.mark.parametrize(
    "state, want",
    [
        ([1, 0], (0, 0, 1)),
        ([0, 1], (0, 0, -1)),
        ([1 / S2, 1 / S2], (1, 0, 0)),
        ([1 / S2, 1j / S2], (0, 1, 0)),
        ([1 / S2, -1 / S2], (-1, 0, 0)),
    ],
)
def test_single_qubit_bloch(state, want):
    v = reduced_bloch(np.array(state, dtype=complex), 0)
    assert (v.x, v.y, v.z) == pytest.approx(want, abs=1e-12)
    assert v.purity == pytest.approx(1)


def test_bell_state_is_maximally_mixed():
    bell = np.array([1, 0, 0, 1], dtype=complex) / S2
    for q in (0, 1):
        v = reduced_bloch(bell, q)
        assert v.length == pytest.approx(0, abs=1e-12)
        assert v.purity == pytest.approx(0.5)


def test_reduced_density_picks_the_right_qubit():
    # |q1 q0> = |0>|+>: qubit 0 is on +x, qubit 1 on +z
    psi = np.kron([1, 0], [1, 1]).astype(complex) / S2
    assert reduced_bloch(psi, 0).x == pytest.approx(1)
    assert reduced_bloch(psi, 1).z == pytest.approx(1)
    with pytest.raises(ValueError):
        reduced_density(psi, 2)


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_random_product_state_purity_one(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    psi = np.kron(b / np.linalg.norm(b), a / np.linalg.norm(a))
    for q in (0, 1):
        v = reduced_bloch(psi, q)
        assert v.purity == pytest.approx(1)
        assert v.length == pytest.approx(1)


def test_xy_projection():
    x, y, angle, r = xy_projection(BlochVector(0, 1, 0, 1))
    assert angle == pytest.approx(PI / 2) and r == pytest.approx(1)
    assert xy_projection(BlochVector(0, 0, 1, 1))[2] == 0.0


@pytest.mark.parametrize(
    "theta, kind",
    [(PI, Segment.SEMICIRCLE), (-PI, Segment.SEMICIRCLE), (PI / 2, Segment.QUADRANT),
     (-PI / 2, Segment.QUADRANT), (PI / 4, Segment.OCTANT), (0.3, Segment.GENERIC)],
)
def test_classify_segment(theta, kind):
    assert classify_segment(theta).kind is kind


@pytest.mark.parametrize(
    "phase, name", [(0, "blue"), (2 * PI, "blue"), (PI / 2, "pink"), (PI, "red"), (-PI, "red"), (-PI / 2, "gray")]
)
def test_phase_color(phase, name):
    assert phase_color(phase)[0] == name


@pytest.mark.parametrize("label, swapped", [("00", "00"), ("01", "10"), ("10", "01"), ("11", "11")])
def test_core_snapshots(label, swapped):
    snaps = snapshot_layers(pswap_core(), label)
    assert len(snaps) == 5
    assert [s.layer_index for s in snaps] == [0, 1, 2, 3, 4]
    assert snaps[0].basis_label() == label
    assert snaps[-1].basis_label() == swapped
    assert all(v.purity == pytest.approx(1) for v in snaps[-1].per_qubit)
    # only the state between the two CNOTs is entangled
    purities = [[v.purity for v in s.per_qubit] for s in snaps]
    assert purities[2] == pytest.approx([0.5, 0.5])
    for k in (0, 1, 3, 4):
        assert purities[k] == pytest.approx([1, 1])


def test_render_deterministic_and_sized():
    snaps = snapshot_layers(pswap_core(), "01")
    svg = render(snaps, "svg")
    assert svg == render(snapshot_layers(pswap_core(), "01"), "svg")
    assert svg.count('<g class="plane"') == 10
    assert svg.startswith("<?xml")
    text = render(snaps, "ascii")
    assert text == render(snaps, "ascii")
    headers = [line for line in text.splitlines() if line.startswith("[psi")]
    assert len(headers) == 10
    grid_lines = [line for line in text.splitlines() if line and not line.startswith("[psi")]
    assert all(len(line) == ASCII_SIZE for line in grid_lines)


def test_render_reference_phases_color_relative_phase():
    c = pswap_from_concept(1)[0]
    snaps = snapshot_layers(c, "01")
    refs = [s.phase for s in snapshot_layers(c, "00")]
    svg = render(snaps, "svg", refs)
    final = re.findall(r'data-layer="%d".*?class="arrow"[^>]*stroke="([^"]+)"' % snaps[-1].layer_index, svg, re.S)
    assert final and set(final) == {phase_color(PI / 2)[1]}
    with pytest.raises(ValueError):
        render(snaps, "svg", refs[:-1])


def test_render_errors():
    with pytest.raises(ValueError):
        render([], "svg")
    with pytest.raises(ValueError):
        render(snapshot_layers(pswap_core(), "00"), "png")
