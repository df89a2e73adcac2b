"""Command line entry point: synth, simulate, verify, transpile, compare, plot.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 input error.
Output files are written atomically, so a failing command never leaves a
partial file behind.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import bloch, qasm, synth, transpiler
from .circuit import Circuit, format_label, simulate, unitary_of
from .linalg import wrap_angle

OK, FAILED, USAGE, INPUT = 0, 1, 2, 3


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _write(path: str | None, text: str, stdout) -> None:
    if path is None or path == "-":
        stdout.write(text)
        return
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except OSError as e:
        raise CommandError(INPUT, f"cannot write {path}: {e}") from None


def _load(path: str) -> Circuit:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise CommandError(INPUT, f"cannot read {path}: {e}") from None
    try:
        return qasm.parse(text)
    except qasm.SourceError as e:
        raise CommandError(INPUT, f"{path}: {e}") from None


def _angle(text: str) -> float:
    try:
        return qasm.parse_angle(text)
    except qasm.SourceError as e:
        raise CommandError(USAGE, f"bad angle expression {text!r}: {e.message}") from None


def _labels(text: str) -> list[str]:
    labels = [s.strip() for s in text.split(",") if s.strip()]
    if not labels or any(set(s) - {"0", "1"} for s in labels):
        raise CommandError(USAGE, f"bad label set {text!r}; expected e.g. 00,11")
    return labels


def _cofactors(text: str) -> synth.Cofactors:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [int(p) for p in parts]
        if len(values) != 6:
            raise ValueError("need six integers")
        return synth.Cofactors(*values)
    except ValueError as e:
        raise CommandError(USAGE, f"bad cofactors {text!r}: {e}") from None


# -- commands ---------------------------------------------------------------


def cmd_synth(args, out) -> int:
    if args.gate != "pswap" and (args.concept is not None or args.cofactors is not None):
        raise CommandError(USAGE, "--concept/--cofactors only apply to --gate pswap")
    if args.gate == "pswap" and args.concept is not None and args.cofactors is not None:
        raise CommandError(USAGE, "give either --concept or --cofactors, not both")
    info = []
    if args.gate == "swap":
        c = synth.standard_swap()
    elif args.gate == "iswap":
        c = synth.iswap()
    elif args.concept is not None:
        c, effected, p = synth.pswap_from_concept(args.concept)
        info.append(f"concept: {args.concept}")
        info.append(f"effected: {','.join(sorted(effected))}")
        info.append(f"expected_p: {qasm.format_angle(p)}")
    elif args.cofactors is not None:
        c = synth.pswap_from_cofactors(_cofactors(args.cofactors))
    else:
        c = synth.pswap_core()
    text = qasm.emit(c)
    _write(args.out, text, out)
    # keep stdout pure QASM when the circuit itself goes there
    meta = out if args.out not in (None, "-") else sys.stderr
    for line in info:
        meta.write(line + "\n")
    return OK


def _swap_analysis(c: Circuit) -> synth.PhasedPermutation:
    if c.n_qubits != 2:
        raise CommandError(INPUT, "not a phased permutation of swap form (expected 2 qubits)")
    try:
        pp = synth.extract_phased_permutation(unitary_of(c))
    except synth.NotPhasedPermutation:
        raise CommandError(INPUT, "not a phased permutation of swap form") from None
    if not synth.is_boolean_swap(pp):
        raise CommandError(INPUT, "not a phased permutation of swap form")
    return pp


def cmd_verify(args, out) -> int:
    c = _load(args.file)
    effected = _labels(args.effected)
    expect = _angle(args.expect_p)
    if any(len(s) != c.n_qubits for s in effected):
        raise CommandError(USAGE, f"labels must have {c.n_qubits} characters")
    pp = _swap_analysis(c)
    try:
        p = synth.relative_phase(pp, effected)
    except synth.InconsistentPhases as e:
        out.write(f"FAIL reason=inconsistent-phases detail={str(e).replace(' ', '_')}\n")
        return FAILED
    if abs(wrap_angle(p - expect)) > 1e-9:
        out.write(
            f"FAIL reason=p-mismatch expected={qasm.format_angle(wrap_angle(expect))} "
            f"got={qasm.format_angle(p)}\n"
        )
        return FAILED
    out.write(f"OK p={qasm.format_angle(p)} effected={','.join(sorted(effected))}\n")
    return OK


def cmd_simulate(args, out) -> int:
    c = _load(args.file)
    try:
        psi = simulate(c, args.input)
    except ValueError as e:
        raise CommandError(USAGE, str(e)) from None
    out.write(f"input |{args.input}>\n")
    for i, amp in enumerate(psi):
        if abs(amp) <= 1e-12:
            continue
        phase = qasm.format_angle(wrap_angle(float(np.angle(amp))))
        out.write(
            f"|{format_label(i, c.n_qubits)}>  amp={amp.real:+.12f}{amp.imag:+.12f}j  "
            f"|amp|={abs(amp):.12f}  phase={phase}\n"
        )
    return OK


def _report_lines(rep: transpiler.TranspileReport, phase: float, fmt: str) -> str:
    row = rep.as_row()
    if fmt == "markdown":
        return (
            "| N1 | N2 | D | TQC |\n|---:|---:|---:|---:|\n"
            + "| " + " | ".join(map(str, row)) + " |\n"
            + f"\nglobal phase: {qasm.format_angle(phase)}\n"
        )
    return (
        f"{'N1':>4} {'N2':>4} {'D':>4} {'TQC':>4}\n"
        + " ".join(f"{v:>4}" for v in row) + "\n"
        + f"global phase: {qasm.format_angle(phase)}\n"
    )


def cmd_transpile(args, out) -> int:
    c = _load(args.file)
    native, phase = transpiler.transpile(c, args.ecr_direction)
    text = qasm.emit(native)
    if args.out in (None, "-"):
        out.write(text)
    else:
        _write(args.out, text, out)
    if args.report or args.out not in (None, "-"):
        out.write(_report_lines(transpiler.metrics(native), phase, args.format))
    return OK


def cmd_compare(args, out) -> int:
    named = []
    if args.builtin:
        named.extend(transpiler.builtin_trio())
    for item in args.circuits:
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise CommandError(USAGE, f"expected NAME=FILE, got {item!r}")
        named.append((name, _load(path)))
    if not named:
        raise CommandError(USAGE, "nothing to compare; pass --builtin or NAME=FILE")
    report = transpiler.compare_report(named, args.ecr_direction)
    out.write(report.format(args.format))
    return OK


def cmd_plot(args, out) -> int:
    c = _load(args.file)
    try:
        snaps = bloch.snapshot_layers(c, args.input)
    except ValueError as e:
        raise CommandError(USAGE, str(e)) from None
    ref_label = "0" * c.n_qubits
    if args.effected is not None:
        effected = set(_labels(args.effected))
        rest = [format_label(j, c.n_qubits) for j in range(1 << c.n_qubits)]
        rest = [s for s in rest if s not in effected]
        if rest:
            ref_label = rest[0]
    refs = [s.phase for s in bloch.snapshot_layers(c, ref_label)]
    _write(args.out, bloch.render(snaps, args.format, refs), out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pswap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a swap-family circuit as QASM")
    p.add_argument("--gate", choices=("swap", "iswap", "pswap"), required=True)
    p.add_argument("--concept", type=int, choices=range(1, 7), metavar="{1..6}")
    p.add_argument("--cofactors", metavar="S,A,B,S,C,D", help="e.g. +1,1,2,+1,1,2")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", help="print the output state for a basis input")
    p.add_argument("file")
    p.add_argument("--input", required=True, metavar="LABEL")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the relative phase of an effected set")
    p.add_argument("file")
    p.add_argument("--effected", required=True, metavar="LABELS")
    p.add_argument("--expect-p", required=True, metavar="ANGLE")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("transpile", help="lower to {X, SX, RZ, ECR} and report cost")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--report", action="store_true")
    p.add_argument("--format", choices=("text", "markdown"), default="text")
    p.add_argument("--ecr-direction", choices=transpiler.ECR_DIRECTIONS, default="free")
    p.set_defaults(func=cmd_transpile)

    p = sub.add_parser("compare", help="tabulate N1, N2, D, TQC for several circuits")
    p.add_argument("circuits", nargs="*", metavar="NAME=FILE")
    p.add_argument("--builtin", action="store_true", help="standard SWAP, iSWAP and p-SWAP")
    p.add_argument("--format", choices=("text", "markdown"), default="text")
    p.add_argument("--ecr-direction", choices=transpiler.ECR_DIRECTIONS, default="free")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="render XY-plane snapshots per layer")
    p.add_argument("file")
    p.add_argument("--input", required=True, metavar="LABEL")
    p.add_argument("--format", choices=("svg", "ascii"), default="svg")
    p.add_argument("--effected", metavar="LABELS", help="color relative to the complement set")
    p.add_argument("--out")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, stdout)
    except CommandError as e:
        stderr.write(f"error: {e}\n")
        return e.code


if __name__ == "__main__":
    sys.exit(main())
