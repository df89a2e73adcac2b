"""
Strict reader and canonical writer for a small OpenQASM 2.0 subset.

Accepted input::

    OPENQASM 2.0;
    include "qelib1.inc";          // optional
    qreg q[2];                     // exactly one register
    h q[0];
    rz(-pi/2) q[1];
    cx q[0],q[1];
    barrier q;                     // parsed and dropped

Gates: id x sx sxdg y z h s sdg t tdg rz cx swap ecr iswap iswapdg.
Parameter expressions use decimal literals, ``pi``, unary minus and
``+ - * /`` with the usual precedence and parentheses. ``//`` starts a
comment. Anything else is a SourceError carrying a 1-based line/column.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import isfinite, pi

from .circuit import Circuit
from .gates import Gate, Op


class SourceError(ValueError):
    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.message = message
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        super().__init__(f"{where}: {message}" + (f" (at {token!r})" if token else ""))


@dataclass(frozen=True)
class Token:
    kind: str  # ident, number, string, sym, eof
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<sym>[;,()\[\]+\-*/])
    """,
    re.VERBOSE | re.ASCII,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise SourceError("unexpected character", line, col, text[pos])
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, col))
        pos = m.end()
    if tokens:
        last = tokens[-1]
        tokens.append(Token("eof", "", last.line, last.column + len(last.text)))
    else:
        tokens.append(Token("eof", "", 1, 1))
    return tokens


MAX_NESTING = 64


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.nesting = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        return SourceError(message, tok.line, tok.column, tok.text)

    def advance(self) -> Token:
        tok = self.tok
        if tok.kind != "eof":
            self.i += 1
        return tok

    def accept(self, text: str) -> Token | None:
        if self.tok.kind in ("sym", "ident") and self.tok.text == text:
            return self.advance()
        return None

    def expect(self, text: str, what: str | None = None) -> Token:
        tok = self.accept(text)
        if tok is None:
            if text == ";":
                raise self.error("missing semicolon")
            raise self.error(f"expected {what or repr(text)}")
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {what}")
        return self.advance()

    # -- expressions --------------------------------------------------------

    def expr(self) -> float:
        value = self.term()
        while self.tok.kind == "sym" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.tok.kind == "sym" and self.tok.text in "*/":
            op = self.advance()
            rhs = self.unary()
            if op.text == "*":
                value *= rhs
            else:
                if rhs == 0:
                    raise self.error("division by zero in expression", op)
                value /= rhs
        return value

    def unary(self) -> float:
        sign = 1.0
        while self.tok.kind == "sym" and self.tok.text in "+-":
            if self.advance().text == "-":
                sign = -sign
        return sign * self.primary()

    def primary(self) -> float:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            value = float(tok.text)
            if not isfinite(value):
                raise self.error("number out of range", tok)
            return value
        if tok.kind == "ident" and tok.text == "pi":
            self.advance()
            return pi
        if tok.kind == "sym" and tok.text == "(":
            if self.nesting >= MAX_NESTING:
                raise self.error("expression nested too deeply", tok)
            self.advance()
            self.nesting += 1
            value = self.expr()
            self.nesting -= 1
            self.expect(")", "')'")
            return value
        raise self.error("malformed expression")

    def angle(self) -> float:
        start = self.tok
        value = self.expr()
        if not isfinite(value):
            raise self.error("expression is not finite", start)
        return value

    # -- statements ---------------------------------------------------------

    def header(self):
        tok = self.tok
        if not (tok.kind == "ident" and tok.text == "OPENQASM"):
            raise self.error("expected 'OPENQASM 2.0;' header")
        self.advance()
        ver = self.tok
        if ver.kind != "number" or ver.text not in ("2.0", "2"):
            raise self.error("only OPENQASM 2.0 is supported", ver)
        self.advance()
        self.expect(";")
        if self.accept("include"):
            inc = self.expect_kind("string", "include file name")
            if inc.text != '"qelib1.inc"':
                raise self.error("only qelib1.inc may be included", inc)
            self.expect(";")

    def register_name(self, reg: str) -> Token:
        name = self.expect_kind("ident", "register name")
        if name.text != reg:
            raise self.error(f"unknown register {name.text!r}", name)
        return name

    def qubit_arg(self, reg: str, n: int) -> int:
        self.register_name(reg)
        self.expect("[", "'['")
        return self.index(reg, n)

    def index(self, reg: str, n: int) -> int:
        idx = self.expect_kind("number", "qubit index")
        if not idx.text.isdigit():
            raise self.error("qubit index must be an integer", idx)
        if int(idx.text) >= n:
            raise self.error(f"index {idx.text} out of range for {reg}[{n}]", idx)
        self.expect("]", "']'")
        return int(idx.text)

    def program(self) -> Circuit:
        self.header()
        reg: str | None = None
        n = 0
        ops: list[Op] = []
        while self.tok.kind != "eof":
            tok = self.tok
            if tok.kind != "ident":
                raise self.error("expected a statement")
            if tok.text == "qreg":
                self.advance()
                if reg is not None:
                    raise self.error("duplicate qreg; only one register is allowed", tok)
                name = self.expect_kind("ident", "register name")
                self.expect("[", "'['")
                size = self.expect_kind("number", "register size")
                if not size.text.isdigit() or int(size.text) < 1:
                    raise self.error("register size must be a positive integer", size)
                self.expect("]", "']'")
                self.expect(";")
                reg, n = name.text, int(size.text)
                continue
            if reg is None:
                raise self.error("qreg must be declared before use")
            if tok.text == "barrier":
                self.advance()
                self.barrier_args(reg, n)
                self.expect(";")
                continue
            ops.append(self.gate(reg, n))
        if reg is None:
            raise self.error("no qreg declared")
        return Circuit(n, tuple(ops))

    def barrier_args(self, reg: str, n: int):
        while True:
            self.register_name(reg)
            if self.accept("["):
                self.index(reg, n)
            if not self.accept(","):
                return

    def gate(self, reg: str, n: int) -> Op:
        tok = self.advance()
        try:
            gate = Gate.from_name(tok.text)
        except KeyError:
            raise self.error("unknown gate", tok) from None
        theta = None
        if self.accept("("):
            if gate.n_params == 0:
                raise self.error(f"{gate.value} takes no parameters", tok)
            theta = self.angle()
            self.expect(")", "')'")
        elif gate.n_params:
            raise self.error(f"{gate.value} needs a parameter", tok)
        qubits = [self.qubit_arg(reg, n)]
        while self.accept(","):
            qubits.append(self.qubit_arg(reg, n))
        if len(qubits) != gate.arity:
            raise self.error(f"{gate.value} takes {gate.arity} qubit(s), got {len(qubits)}", tok)
        if len(set(qubits)) != len(qubits):
            raise self.error("repeated qubit operand", tok)
        self.expect(";")
        return Op(gate, tuple(qubits), theta)


def parse(text: str) -> Circuit:
    return _Parser(text).program()


def parse_angle(text: str) -> float:
    """Evaluate a parameter expression such as ``-3*pi/4``."""
    p = _Parser(text)
    value = p.angle()
    if p.tok.kind != "eof":
        raise p.error("unexpected trailing input")
    return value


def format_angle(theta: float) -> str:
    """``k*pi/d`` (d <= 16) when within 1e-12, otherwise 17 significant digits."""
    if theta == 0:
        return "0"
    for d in range(1, 17):
        k = round(theta * d / pi)
        if k != 0 and abs(theta - k * pi / d) <= 1e-12:
            f = Fraction(k, d)
            num, den = f.numerator, f.denominator
            head = {1: "pi", -1: "-pi"}.get(num, f"{num}*pi")
            return head if den == 1 else f"{head}/{den}"
    return format(theta, ".17g")


def emit(c: Circuit, reg: str = "q") -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg {reg}[{c.n_qubits}];"]
    for op in c.ops:
        args = ",".join(f"{reg}[{q}]" for q in op.qubits)
        if op.theta is not None:
            lines.append(f"{op.gate.value}({format_angle(op.theta)}) {args};")
        else:
            lines.append(f"{op.gate.value} {args};")
    return "\n".join(lines) + "\n"
