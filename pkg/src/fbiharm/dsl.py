"""A small expression language for profiles.

Grammar (``^`` binds tighter than unary minus and is right-associative)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := NUMBER | 'pi' | VAR | FUNC '(' expr ')' | '(' expr ')'

Functions: sin cos tan cot ln exp sqrt abs arctan arccos.  There is no
implicit multiplication, so ``2r`` is a syntax error.

>>> print(to_source(parse_expr("1 + 4*ln(tan(r/2))")))
(1.0 + (4.0 * ln(tan((r / 2.0)))))
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from . import jets as J
from .jets import Jet
from .profiles import Interval, Profile, REAL_LINE
from .errors import ExprSyntaxError, UnknownIdentifier

FUNCTIONS = {
    "sin": J.sin,
    "cos": J.cos,
    "tan": J.tan,
    "cot": J.cot,
    "ln": J.log,
    "exp": J.exp,
    "sqrt": J.sqrt,
    "abs": J.absolute,
    "arctan": J.arctan,
    "arccos": J.arccos,
}
CONSTANTS = {"pi": math.pi}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"


Node = Union[Num, Const, Var, Neg, Call, BinOp, Pow]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(src: str):
    pos = 0
    tokens = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            col = pos + len(src[pos:]) - len(src[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {src[col]!r}", col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, var_name: str):
        self.tokens = _tokenize(src)
        self.i = 0
        self.var = var_name

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self, kind, text=None):
        k, t, pos = self.tok
        if k != kind or (text is not None and t != text):
            want = text or kind
            got = t or "end of input"
            raise ExprSyntaxError(f"expected {want!r}, found {got!r}", pos)
        self.i += 1
        return t

    def at_op(self, *ops):
        k, t, _ = self.tok
        return k == "op" and t in ops

    def parse(self) -> Node:
        node = self.expr()
        if self.tok[0] != "end":
            _, t, pos = self.tok
            raise ExprSyntaxError(f"unexpected {t!r} (no implicit multiplication)", pos)
        return node

    def expr(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.take("op")
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.at_op("*", "/"):
            op = self.take("op")
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.at_op("-"):
            self.take("op")
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.at_op("^"):
            self.take("op")
            return Pow(base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.tok
        if kind == "num":
            self.i += 1
            return Num(float(text))
        if kind == "name":
            self.i += 1
            if text in FUNCTIONS:
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return Call(text, arg)
            if text in CONSTANTS:
                return Const(text)
            if text == self.var:
                return Var(text)
            raise UnknownIdentifier(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            self.i += 1
            node = self.expr()
            self.take("op", ")")
            return node
        raise ExprSyntaxError(f"unexpected {text or 'end of input'!r}", pos)


def parse_expr(src: str, var_name: str = "r") -> Node:
    if not src or not src.strip():
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(src, var_name).parse()


def to_source(node: Node) -> str:
    """Fully parenthesized source text; ``parse_expr(to_source(a)) == a``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return f"(-{to_source(node.operand)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Pow):
        return f"({to_source(node.base)} ^ {to_source(node.exponent)})"
    raise TypeError(f"not an expression node: {node!r}")


def _is_constant(node: Node) -> bool:
    if isinstance(node, (Num, Const)):
        return True
    if isinstance(node, Var):
        return False
    if isinstance(node, Neg):
        return _is_constant(node.operand)
    if isinstance(node, Call):
        return _is_constant(node.arg)
    if isinstance(node, (BinOp, Pow)):
        return _is_constant(node.left if isinstance(node, BinOp) else node.base) and _is_constant(
            node.right if isinstance(node, BinOp) else node.exponent)
    return False


def evaluate(node: Node, x: Jet) -> Jet:
    """Evaluate the AST in jet arithmetic with the variable bound to ``x``."""
    if isinstance(node, Num):
        return Jet.constant(node.value, x.order, x.shape)
    if isinstance(node, Const):
        return Jet.constant(CONSTANTS[node.name], x.order, x.shape)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -evaluate(node.operand, x)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](evaluate(node.arg, x))
    if isinstance(node, BinOp):
        a, b = evaluate(node.left, x), evaluate(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        return a / b
    if isinstance(node, Pow):
        base = evaluate(node.base, x)
        if _is_constant(node.exponent):
            e = float(evaluate(node.exponent, Jet.constant(0.0, 0)).coeffs[0])
            return base ** e
        return base ** evaluate(node.exponent, x)
    raise TypeError(f"not an expression node: {node!r}")


def compile_profile(ast: Node, domain: Interval = REAL_LINE, singularities=(), label: str | None = None) -> Profile:
    return Profile.from_expr(lambda x: evaluate(ast, x), domain, singularities, label or to_source(ast))


def profile(src: str, domain: Interval = REAL_LINE, singularities=(), var_name: str = "r") -> Profile:
    """Parse and compile in one step, keeping the source text as label."""
    return compile_profile(parse_expr(src, var_name), domain, singularities, label=src)
