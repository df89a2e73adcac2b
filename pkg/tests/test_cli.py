import io
import subprocess
import sys

import pytest

from pswap.cli import main
from pswap.qasm import parse
from pswap.synth import CONCEPTS


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def concept_file(tmp_path):
    def make(k):
        path = tmp_path / f"c{k}.qasm"
        code, out, _ = run("synth", "--gate", "pswap", "--concept", str(k), "--out", str(path))
        assert code == 0
        return path, out
    return make


@pytest.mark.parametrize("k", sorted(CONCEPTS))
def test_synth_then_verify_composes(concept_file, k):
    path, out = concept_file(k)
    meta = dict(line.split(": ", 1) for line in out.splitlines())
    code, vout, _ = run("verify", str(path), "--effected", meta["effected"], "--expect-p", meta["expected_p"])
    assert code == 0, vout
    assert vout.startswith("OK ")


def test_concept_one_metadata(concept_file):
    _, out = concept_file(1)
    assert "effected: 01,10" in out and "expected_p: pi/2" in out


def test_verify_mismatch_exit_1(concept_file):
    path, _ = concept_file(2)
    code, out, _ = run("verify", str(path), "--effected", "00,11", "--expect-p", "pi")
    assert code == 1
    assert out == "FAIL reason=p-mismatch expected=pi got=pi/2\n"


def test_verify_inconsistent_exit_1(concept_file):
    path, _ = concept_file(1)
    code, out, _ = run("verify", str(path), "--effected", "01", "--expect-p", "pi/2")
    assert code == 1 and out.startswith("FAIL reason=inconsistent-phases")


def test_verify_cx_only_exit_3(tmp_path):
    f = tmp_path / "cx.qasm"
    f.write_text("OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[1];\n")
    code, _, err = run("verify", str(f), "--effected", "00", "--expect-p", "pi")
    assert code == 3 and "not a phased permutation of swap form" in err


def test_verify_parse_error_exit_3(tmp_path):
    f = tmp_path / "bad.qasm"
    f.write_text("OPENQASM 2.0;\nqreg q[2];\ncz q[0],q[1];\n")
    code, _, err = run("verify", str(f), "--effected", "00", "--expect-p", "pi")
    assert code == 3 and "line 3, column 1" in err


def test_missing_file_exit_3(tmp_path):
    assert run("simulate", str(tmp_path / "nope.qasm"), "--input", "00")[0] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ("synth", "--gate", "pswap", "--concept", "7"),
        ("synth", "--gate", "pswap", "--concept", "1", "--cofactors", "1,1,2,1,1,2"),
        ("synth", "--gate", "swap", "--concept", "1"),
        ("synth", "--gate", "pswap", "--cofactors", "1,1,2"),
        ("frobnicate",),
        ("compare",),
    ],
)
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_synth_swap_to_stdout():
    code, out, _ = run("synth", "--gate", "swap")
    assert code == 0
    assert sum(line.startswith("cx ") for line in out.splitlines()) == 3


def test_synth_cofactors(tmp_path):
    path = tmp_path / "cf.qasm"
    assert run("synth", "--gate", "pswap", "--cofactors", "1,1,2,1,1,2", "--out", str(path))[0] == 0
    assert run("verify", str(path), "--effected", "01,10", "--expect-p", "pi/2")[0] == 0


def test_simulate_prints_amplitudes(concept_file):
    path, _ = concept_file(4)
    code, out, _ = run("simulate", str(path), "--input", "01")
    assert code == 0
    assert out.splitlines()[1].startswith("|10>")
    assert run("simulate", str(path), "--input", "2")[0] == 2


def test_transpile_writes_native_and_report(tmp_path):
    src, dst = tmp_path / "swap.qasm", tmp_path / "native.qasm"
    run("synth", "--gate", "swap", "--out", str(src))
    code, out, _ = run("transpile", str(src), "--out", str(dst), "--report")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].split() == ["N1", "N2", "D", "TQC"]
    assert lines[1].split()[1] == "3"
    assert {op.gate.value for op in parse(dst.read_text())} <= {"id", "x", "sx", "rz", "ecr"}
    code, md, _ = run("transpile", str(src), "--out", str(dst), "--format", "markdown")
    assert "| N1 | N2 | D | TQC |" in md


def test_compare_builtin():
    code, out, _ = run("compare", "--builtin")
    assert code == 0
    rows = out.splitlines()[1:4]
    assert [r.split()[-4:] for r in rows][1] == [r.split()[-4:] for r in rows][2]
    assert "p-SWAP vs Standard SWAP" in out
    assert run("compare", "--builtin", "--format", "markdown")[1].startswith("|")


def test_compare_named_files(tmp_path):
    a = tmp_path / "a.qasm"
    run("synth", "--gate", "iswap", "--out", str(a))
    code, out, _ = run("compare", f"mine={a}")
    assert code == 0 and out.splitlines()[1].startswith("mine")
    assert run("compare", "nonsense")[0] == 2


def test_plot_core_svg(tmp_path):
    src, svg = tmp_path / "core.qasm", tmp_path / "core.svg"
    src.write_text("OPENQASM 2.0;\nqreg q[2];\nh q[0];\ncx q[0],q[1];\ncx q[1],q[0];\nh q[1];\n")
    assert run("plot", str(src), "--input", "01", "--out", str(svg))[0] == 0
    text = svg.read_bytes()
    assert text.count(b'<g class="plane"') == 10
    run("plot", str(src), "--input", "01", "--out", str(svg))
    assert svg.read_bytes() == text
    code, ascii_out, _ = run("plot", str(src), "--input", "01", "--format", "ascii")
    assert code == 0 and ascii_out.count("[psi") == 10


def test_plot_relative_coloring(concept_file):
    path, _ = concept_file(1)
    _, out, _ = run("plot", str(path), "--input", "01", "--format", "ascii", "--effected", "01,10")
    last = [line for line in out.splitlines() if line.startswith("[psi5")]
    assert last and all(line.endswith("phase=pink") for line in last)


def test_failure_leaves_no_partial_file(tmp_path):
    bad, dst = tmp_path / "bad.qasm", tmp_path / "out.qasm"
    bad.write_text("OPENQASM 2.0;\nqreg q[2];\nh q[0]\n")
    assert run("transpile", str(bad), "--out", str(dst))[0] == 3
    assert not dst.exists()
    assert list(tmp_path.iterdir()) == [bad]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "pswap", "synth", "--gate", "pswap", "--concept", "7"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
