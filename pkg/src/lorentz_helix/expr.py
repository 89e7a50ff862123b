"""Recursive-descent parser and vectorized evaluator for curvature expressions.

Grammar (lowest to highest precedence)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          right-associative
    atom   := NUMBER | 's' | FUNC '(' expr ')' | '(' expr ')'

FUNC is one of sin, cos, sinh, cosh, exp, sqrt. Evaluation works on
numpy arrays of the variable ``s``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ExpressionError, ParseError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "exp": np.exp,
    "sqrt": np.sqrt,
}
TINY_DIVISOR = 1e-300

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^()]))"
)
_ATOM_START = frozenset({"number", "s", "function", "(", "-"})


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Node"


Node = Union[Num, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    offset: int  # byte offset


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    encoded_upto = 0
    byte_pos = 0

    def byte_offset(i):
        nonlocal encoded_upto, byte_pos
        byte_pos += len(text[encoded_upto:i].encode("utf-8"))
        encoded_upto = i
        return byte_pos

    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            rest = text[pos:]
            stripped = len(rest) - len(rest.lstrip())
            start = pos + stripped
            if start == len(text):
                tokens.append(Token("end", "", byte_offset(start)))
                return tokens
            raise ParseError(byte_offset(start), _ATOM_START | {"operator"}, text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), byte_offset(m.start(kind))))
        pos = m.end()


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def fail(self, expected):
        raise ParseError(self.tok.offset, expected, self.text)

    def eat(self, text):
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"operator", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.eat("-"):
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.eat("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self):
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return Num(float(tok.text))
        if tok.kind == "name":
            if tok.text == "s":
                self.i += 1
                return Var()
            if tok.text in FUNCTIONS:
                self.i += 1
                if not self.eat("("):
                    self.fail({"("})
                arg = self.expr()
                if not self.eat(")"):
                    self.fail({")", "operator"})
                return Call(tok.text, arg)
            self.fail(_ATOM_START)
        if self.eat("("):
            node = self.expr()
            if not self.eat(")"):
                self.fail({")", "operator"})
            return node
        self.fail(_ATOM_START)


def evaluate(node: Node, s):
    """Evaluate ``node`` at ``s`` (scalar or array); raises ExpressionError."""
    s = np.asarray(s, dtype=float)
    with np.errstate(all="ignore"):
        out = _eval(node, s)
    out = np.broadcast_to(out, s.shape).astype(float, copy=True)
    if not np.all(np.isfinite(out)):
        raise ExpressionError("expression produced non-finite values")
    return out


def _eval(node, s):
    if isinstance(node, Num):
        return np.float64(node.value)
    if isinstance(node, Var):
        return s
    if isinstance(node, Neg):
        return -_eval(node.operand, s)
    if isinstance(node, Call):
        return FUNCTIONS[node.name](_eval(node.arg, s))
    left = _eval(node.left, s)
    right = _eval(node.right, s)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if node.op == "/":
        if np.any(np.abs(right) < TINY_DIVISOR):
            raise ExpressionError("division by zero")
        return left / right
    return np.power(left, right)


def _uses_s(node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return _uses_s(node.operand)
    if isinstance(node, Call):
        return _uses_s(node.arg)
    return _uses_s(node.left) or _uses_s(node.right)


class Expression:
    """A parsed expression in ``s``; call it with an array of ``s`` values."""

    def __init__(self, text: str):
        self.text = text
        self.ast = _Parser(text).parse()
        self.is_constant = not _uses_s(self.ast)

    def __call__(self, s):
        return evaluate(self.ast, s)

    def __repr__(self):
        return f"Expression({self.text!r})"

    def __str__(self):
        return self.text


def parse_expression(text: str) -> Expression:
    return Expression(text)
