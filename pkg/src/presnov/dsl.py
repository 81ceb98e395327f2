"""Small expression language for defining vector fields in text.

A field on R^n is written as n expressions separated by semicolons or
newlines, over the variables x1..xn:

    -x2; x1                      planar rotation
    x1^2 - 0.5*x2; x2*norm2      any smooth-looking formula

Grammar (whitespace-insensitive; expressions may not span lines):

    field  := expr ((';' | NEWLINE) expr)*
    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := NUMBER | IDENT | '(' expr ')' | FUNC '(' expr ')'

'^' is right-associative and binds tighter than unary minus, so -x1^2
means -(x1^2); write (-x1)^2 for the square of the negation.  Known
identifiers are the variables x1..xn, the literals pi and e, and norm2,
the squared Euclidean norm of the full variable vector.  Functions:
sin, cos, exp, tanh, abs, sqrt.

Evaluation follows IEEE-754 double semantics (division by zero gives an
infinity, sqrt of a negative number gives NaN, '^' of a negative base
with a non-integer exponent gives NaN); a NaN or infinite result raises
NonFiniteValueError at the evaluation boundary.  Differentiability of
user expressions is not checked; the decomposition machinery assumes
continuously differentiable fields as a documented precondition.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NonFiniteValueError, ParseError
from .fields import VectorField

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Unary",
    "Binary",
    "Norm2",
    "FUNCTIONS",
    "parse_expressions",
    "parse_expression",
    "parse_field",
    "evaluate_ast",
    "pretty",
    "ExpressionField",
]


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Const(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 0-based; prints as x{index+1}


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # 'neg' or a function name
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # one of + - * / ^
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Norm2(Expr):
    pass


FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "tanh": np.tanh,
    "abs": np.abs,
    "sqrt": np.sqrt,
}

_LITERALS = {"pi": math.pi, "e": math.e}
_VAR_RE = re.compile(r"x([1-9][0-9]*)\Z")
_MAX_DEPTH = 200


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
      (?P<number>(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)
    | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
    | (?P<op>[-+*/^()])
    | (?P<sep>[;\n])
    | (?P<ws>[ \t\r]+)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number | ident | op | sep | eof
    text: str
    line: int
    column: int
    value: float = 0.0


def _tokenize(text):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        lexeme = m.group()
        if kind == "number":
            tokens.append(_Token("number", lexeme, line, col, value=float(lexeme)))
        elif kind != "ws":
            tokens.append(_Token(kind, lexeme, line, col))
        if lexeme == "\n":
            line += 1
            col = 1
        else:
            col += len(lexeme)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, tokens, dimension):
        self.tokens = tokens
        self.pos = 0
        self.dimension = dimension
        self.depth = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message, tok=None):
        tok = tok if tok is not None else self.peek()
        raise ParseError(message, tok.line, tok.column)

    def _enter(self):
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            self.error("expression nests too deeply")

    def expr(self):
        self._enter()
        try:
            node = self.term()
            while self.peek().kind == "op" and self.peek().text in "+-":
                op = self.advance().text
                node = Binary(op, node, self.term())
            return node
        finally:
            self.depth -= 1

    def term(self):
        node = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self):
        self._enter()
        try:
            if self.peek().kind == "op" and self.peek().text == "-":
                self.advance()
                return Unary("neg", self.factor())
            node = self.base()
            if self.peek().kind == "op" and self.peek().text == "^":
                self.advance()
                return Binary("^", node, self.factor())
            return node
        finally:
            self.depth -= 1

    def base(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return Const(tok.value)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            closing = self.peek()
            if not (closing.kind == "op" and closing.text == ")"):
                self.error("expected ')'")
            self.advance()
            return node
        if tok.kind == "ident":
            self.advance()
            name = tok.text
            if self.peek().kind == "op" and self.peek().text == "(":
                if name not in FUNCTIONS:
                    self.error(f"unknown function '{name}'", tok)
                self.advance()
                arg = self.expr()
                closing = self.peek()
                if not (closing.kind == "op" and closing.text == ")"):
                    self.error("expected ')'")
                self.advance()
                return Unary(name, arg)
            if name in _LITERALS:
                return Const(_LITERALS[name])
            if name == "norm2":
                return Norm2()
            m = _VAR_RE.match(name)
            if m:
                index = int(m.group(1))
                if index > self.dimension:
                    self.error(
                        f"variable {name} exceeds the field dimension {self.dimension}", tok
                    )
                return Var(index - 1)
            self.error(f"unknown identifier '{name}'", tok)
        self.error(f"expected a number, identifier, or '(', got {tok.text!r}" if tok.text else "unexpected end of input")


def _segment_count(tokens):
    count = 0
    in_segment = False
    for tok in tokens:
        if tok.kind in ("sep", "eof"):
            if in_segment:
                count += 1
            in_segment = False
        else:
            in_segment = True
    return count


def parse_expressions(text: str, dimension: Optional[int] = None):
    """Parse DSL source into a list of expression ASTs.

    With ``dimension=None`` the dimension is inferred from the number of
    expressions.  Blank segments (trailing separators, empty lines) are
    skipped.  Raises ParseError with a 1-based line/column position.
    """
    tokens = _tokenize(text)
    found = _segment_count(tokens)
    if found == 0:
        raise ParseError("empty field definition", 1, 1)
    n = found if dimension is None else int(dimension)
    if n < 1:
        raise ParseError("field dimension must be at least 1", 1, 1)
    if found != n:
        eof = tokens[-1]
        raise ParseError(
            f"expected {n} expressions for dimension {n}, found {found}",
            eof.line,
            eof.column,
        )
    parser = _Parser(tokens, n)
    exprs = []
    while True:
        while parser.peek().kind == "sep":
            parser.advance()
        if parser.peek().kind == "eof":
            break
        exprs.append(parser.expr())
        trailing = parser.peek()
        if trailing.kind not in ("sep", "eof"):
            parser.error(f"unexpected {trailing.text!r} after expression")
    return exprs


def parse_expression(text: str, dimension: int) -> Expr:
    """Parse a single expression over x1..x{dimension} into an AST."""
    tokens = _tokenize(text)
    if _segment_count(tokens) != 1:
        eof = tokens[-1]
        raise ParseError("expected exactly one expression", eof.line, eof.column)
    parser = _Parser(tokens, int(dimension))
    while parser.peek().kind == "sep":
        parser.advance()
    node = parser.expr()
    while parser.peek().kind == "sep":
        parser.advance()
    trailing = parser.peek()
    if trailing.kind != "eof":
        parser.error(f"unexpected {trailing.text!r} after expression")
    return node


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _eval_raw(node, points):
    """Evaluate on an (m, n) array of points; returns (m,). IEEE semantics."""
    if isinstance(node, Const):
        return np.full(points.shape[0], node.value)
    if isinstance(node, Var):
        return points[:, node.index].copy()
    if isinstance(node, Norm2):
        return np.einsum("ij,ij->i", points, points)
    if isinstance(node, Unary):
        child = _eval_raw(node.operand, points)
        if node.op == "neg":
            return -child
        return FUNCTIONS[node.op](child)
    if isinstance(node, Binary):
        left = _eval_raw(node.left, points)
        right = _eval_raw(node.right, points)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            return np.divide(left, right)
        if node.op == "^":
            return np.power(left, right)
    raise TypeError(f"not an expression node: {node!r}")


def evaluate_ast(node: Expr, point) -> float:
    """Evaluate one AST at a point; raises NonFiniteValueError on NaN/inf."""
    x = np.atleast_1d(np.asarray(point, dtype=float))
    with np.errstate(all="ignore"):
        value = float(_eval_raw(node, x[None, :])[0])
    if not math.isfinite(value):
        raise NonFiniteValueError(
            f"expression produced a non-finite value at {x.tolist()}"
        )
    return value


# ---------------------------------------------------------------------------
# Pretty-printing with minimal parentheses
# ---------------------------------------------------------------------------

_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def _prec(node):
    if isinstance(node, Binary):
        return {"+": _ADD, "-": _ADD, "*": _MUL, "/": _MUL, "^": _POW}[node.op]
    if isinstance(node, Unary):
        return _NEG if node.op == "neg" else _ATOM
    return _ATOM


def _wrap(text, need):
    return f"({text})" if need else text


def pretty(node: Expr) -> str:
    """Render an AST with the fewest parentheses that reparse identically.

    Assumes canonical ASTs as produced by the parser: numeric literals are
    non-negative (negation is an explicit node).
    """
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Norm2):
        return "norm2"
    if isinstance(node, Unary):
        if node.op == "neg":
            return "-" + _wrap(pretty(node.operand), _prec(node.operand) < _NEG)
        return f"{node.op}({pretty(node.operand)})"
    if isinstance(node, Binary):
        left, right = node.left, node.right
        if node.op in "+-":
            ls = pretty(left)
            rs = _wrap(pretty(right), _prec(right) <= _ADD)
        elif node.op in "*/":
            ls = _wrap(pretty(left), _prec(left) < _MUL)
            rs = _wrap(pretty(right), _prec(right) <= _MUL)
        else:  # '^': base must be an atom, exponent at least a factor
            ls = _wrap(pretty(left), _prec(left) < _ATOM)
            rs = _wrap(pretty(right), _prec(right) < _NEG)
        return f"{ls}{node.op}{rs}"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# Expression-backed fields
# ---------------------------------------------------------------------------


class ExpressionField(VectorField):
    """Vector field whose components are parsed expressions."""

    def __init__(self, dimension, expressions, source=None):
        expressions = tuple(expressions)
        if len(expressions) != dimension:
            raise ParseError(
                f"expected {dimension} expressions, found {len(expressions)}", 1, 1
            )
        label = source if source is not None else "; ".join(pretty(e) for e in expressions)
        super().__init__(dimension, label=" ".join(label.split("\n")))
        self.expressions = expressions
        self.source = source

    def _evaluate_many(self, points):
        with np.errstate(all="ignore"):
            cols = [_eval_raw(expr, points) for expr in self.expressions]
        return np.column_stack(cols)


def parse_field(text: str, dimension: Optional[int] = None) -> ExpressionField:
    """Parse DSL source into an expression-backed vector field."""
    exprs = parse_expressions(text, dimension)
    return ExpressionField(len(exprs), exprs, source=text)
