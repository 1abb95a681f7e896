"""Term expressions in the variable ``n``.

A small recursive-descent parser turns text such as ``log(n+1)/n^1.5`` into an
immutable tree. Trees can be evaluated directly in Python or compiled into a
numba kernel; both paths run the same helper functions in the same order, so
they agree bit for bit.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' factor)?
    base   := number | 'n' | ident '(' expr (',' expr)* ')' | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus, so ``-2^2`` is
``-(2^2)``. There is no implicit multiplication.
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ArityError, LexError, ParseError, UnknownFunction

MAX_INPUT_BYTES = 64 * 1024
MAX_DEPTH = 64

_EXP_MAX = 709.782712893384  # largest x with finite exp(x)


# -- arithmetic helpers -------------------------------------------------------
# Written so that plain Python and numba give identical results: no exceptions
# on domain errors, non-finite values flow through to the caller.

def _exp(x):
    if x > _EXP_MAX:
        return math.inf
    return math.exp(x)


def _log(x):
    if x > 0.0:
        return math.log(x)
    if x == 0.0:
        return -math.inf
    return math.nan


def _log2(x):
    if x > 0.0:
        return math.log2(x)
    if x == 0.0:
        return -math.inf
    return math.nan


def _log10(x):
    if x > 0.0:
        return math.log10(x)
    if x == 0.0:
        return -math.inf
    return math.nan


def _loglog(x):
    return _log(_log(x))


def _sqrt(x):
    if x >= 0.0:
        return math.sqrt(x)
    return math.nan


def _div(a, b):
    if b == 0.0:
        if a == 0.0 or a != a:
            return math.nan
        return math.copysign(math.inf, a) * math.copysign(1.0, b)
    return a / b


def _pow(x, y):
    # positive base: exp(y ln x), the one power rule used everywhere
    if x > 0.0:
        return _exp(y * math.log(x))
    if x == 0.0:
        if y > 0.0:
            return 0.0
        if y == 0.0:
            return 1.0
        return math.inf
    if x != x or y != y:
        return math.nan
    v = _exp(y * math.log(-x))
    if math.isinf(y):
        return v
    if math.floor(y) != y:
        return math.nan
    if y - 2.0 * math.floor(y / 2.0) != 0.0:
        return -v
    return v


# name -> (arity, helper)
FUNCTIONS = {
    "log": (1, _log),
    "log2": (1, _log2),
    "log10": (1, _log10),
    "sqrt": (1, _sqrt),
    "exp": (1, _exp),
    "pow": (2, _pow),
    "loglog": (1, _loglog),
}

_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "^": _pow,
}


# -- tokens ------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | lparen | rparen | comma
    text: str
    pos: int

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.pos})"


_TOKEN_RE = re.compile(
    rb"(?P<ws>[ \t\r\n]+)"
    rb"|(?P<number>(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][+-]?[0-9]+)?)"
    rb"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    rb"|(?P<op>[-+*/^])"
    rb"|(?P<lparen>\()"
    rb"|(?P<rparen>\))"
    rb"|(?P<comma>,)"
)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens; positions are UTF-8 byte offsets."""
    data = text.encode("utf-8")
    if len(data) > MAX_INPUT_BYTES:
        raise LexError(MAX_INPUT_BYTES, "input longer than 64 KiB")
    tokens = []
    pos = 0
    while pos < len(data):
        m = _TOKEN_RE.match(data, pos)
        if m is None:
            raise LexError(pos)
        kind = m.lastgroup
        if kind != "ws":
            chunk = m.group().decode("ascii")
            if kind == "number" and not math.isfinite(float(chunk)):
                raise LexError(pos, "number out of range")
            tokens.append(Token(kind, chunk, pos))
        pos = m.end()
    return tokens


# -- tree ----------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Expr = Union[Const, Var, Neg, BinOp, Call]


def depth(expr: Expr) -> int:
    if isinstance(expr, (Const, Var)):
        return 1
    if isinstance(expr, Neg):
        return 1 + depth(expr.operand)
    if isinstance(expr, BinOp):
        return 1 + max(depth(expr.left), depth(expr.right))
    return 1 + max(depth(a) for a in expr.args)


def evaluate(expr: Expr, n) -> float:
    """Evaluate ``expr`` at ``n`` in double precision; never raises on domain errors."""
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        return float(n)
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, n)
    if isinstance(expr, BinOp):
        return _BINARY[expr.op](evaluate(expr.left, n), evaluate(expr.right, n))
    return FUNCTIONS[expr.name][1](*(evaluate(a, n) for a in expr.args))


# -- parser ----------------------------------------------------------------------

class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0
        self.end = len(text.encode("utf-8"))

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self):
        tok = self.peek()
        return tok.pos if tok is not None else self.end

    def accept(self, kind, text=None):
        tok = self.peek()
        if tok is not None and tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return tok
        return None

    def expect(self, kind, text, what):
        tok = self.accept(kind, text)
        if tok is None:
            raise ParseError(self.pos(), what)
        return tok

    def node(self, expr, at):
        if depth(expr) > MAX_DEPTH:
            raise ParseError(at, f"expression nesting at most {MAX_DEPTH} deep")
        return expr

    def parse(self):
        expr = self.expr(0)
        if self.peek() is not None:
            raise ParseError(self.pos(), "operator or end of input")
        return expr

    def expr(self, level):
        left = self.term(level)
        while True:
            tok = self.accept("op", "+") or self.accept("op", "-")
            if tok is None:
                return left
            left = self.node(_fold(BinOp(tok.text, left, self.term(level))), tok.pos)

    def term(self, level):
        left = self.factor(level)
        while True:
            tok = self.accept("op", "*") or self.accept("op", "/")
            if tok is None:
                return left
            left = self.node(_fold(BinOp(tok.text, left, self.factor(level))), tok.pos)

    def factor(self, level):
        if level > MAX_DEPTH:
            raise ParseError(self.pos(), f"expression nesting at most {MAX_DEPTH} deep")
        tok = self.accept("op", "-")
        if tok is not None:
            return self.node(_fold(Neg(self.factor(level + 1))), tok.pos)
        base = self.base(level)
        tok = self.accept("op", "^")
        if tok is not None:
            return self.node(_fold(BinOp("^", base, self.factor(level + 1))), tok.pos)
        return base

    def base(self, level):
        tok = self.peek()
        if tok is None:
            raise ParseError(self.end, "number, 'n', function call or '('")
        if tok.kind == "number":
            self.i += 1
            return Const(float(tok.text))
        if tok.kind == "lparen":
            self.i += 1
            inner = self.expr(level + 1)
            self.expect("rparen", None, "')'")
            return inner
        if tok.kind == "ident":
            self.i += 1
            if tok.text == "n":
                return Var()
            if self.peek() is None or self.peek().kind != "lparen":
                raise ParseError(tok.pos, "'n' or a function call")
            if tok.text not in FUNCTIONS:
                raise UnknownFunction(tok.pos, tok.text)
            self.i += 1
            arity = FUNCTIONS[tok.text][0]
            if self.accept("rparen"):
                raise ArityError(tok.pos, tok.text, arity, 0)
            args = [self.expr(level + 1)]
            while self.accept("comma"):
                args.append(self.expr(level + 1))
            self.expect("rparen", None, "',' or ')'")
            if len(args) != arity:
                raise ArityError(tok.pos, tok.text, arity, len(args))
            return self.node(Call(tok.text, tuple(args)), tok.pos)
        raise ParseError(tok.pos, "number, 'n', function call or '('")


def _fold(expr):
    # literal-literal operations only
    if isinstance(expr, Neg) and isinstance(expr.operand, Const):
        return Const(-expr.operand.value)
    if isinstance(expr, BinOp) and isinstance(expr.left, Const) and isinstance(expr.right, Const):
        return Const(_BINARY[expr.op](expr.left.value, expr.right.value))
    return expr


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    Raises LexError, ParseError, UnknownFunction or ArityError.
    """
    return _Parser(text).parse()


# -- printing --------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(expr):
    if isinstance(expr, BinOp):
        return _PREC[expr.op]
    if isinstance(expr, Neg):
        return 3
    if isinstance(expr, Const) and math.copysign(1.0, expr.value) < 0:
        return 3
    return 5


def to_text(expr: Expr) -> str:
    """Print ``expr`` with the fewest parentheses that reparse to the same tree shape."""
    if isinstance(expr, Const):
        if not math.isfinite(expr.value):
            raise ValueError(f"cannot print non-finite constant {expr.value!r}")
        if math.copysign(1.0, expr.value) < 0:
            return "-" + repr(-expr.value)
        return repr(expr.value)
    if isinstance(expr, Var):
        return "n"
    if isinstance(expr, Call):
        return f"{expr.name}({', '.join(to_text(a) for a in expr.args)})"
    if isinstance(expr, Neg):
        inner = to_text(expr.operand)
        return "-" + (inner if _prec(expr.operand) >= 3 else f"({inner})")
    p = _PREC[expr.op]
    left, right = to_text(expr.left), to_text(expr.right)
    if expr.op == "^":
        if _prec(expr.left) <= 4:
            left = f"({left})"
        if _prec(expr.right) < 3:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(expr.left) < p:
        left = f"({left})"
    if _prec(expr.right) <= p:
        right = f"({right})"
    return f"{left} {expr.op} {right}"


# -- compilation -------------------------------------------------------------------

_HELPER_NAMES = {
    "/": "_div", "^": "_pow",
    "log": "_log", "log2": "_log2", "log10": "_log10", "sqrt": "_sqrt",
    "exp": "_exp", "pow": "_pow", "loglog": "_loglog",
}


def to_source(expr: Expr) -> str:
    """Python source for ``expr`` in terms of a float variable ``x`` and the helpers."""
    if isinstance(expr, Const):
        return f"({expr.value!r})"
    if isinstance(expr, Var):
        return "x"
    if isinstance(expr, Neg):
        return f"(-{to_source(expr.operand)})"
    if isinstance(expr, BinOp):
        a, b = to_source(expr.left), to_source(expr.right)
        if expr.op in "+-*":
            return f"({a} {expr.op} {b})"
        return f"{_HELPER_NAMES[expr.op]}({a}, {b})"
    return f"{_HELPER_NAMES[expr.name]}({', '.join(to_source(a) for a in expr.args)})"


@functools.lru_cache(maxsize=None)
def _jitted_helpers():
    from numba import njit

    ns = {}
    # order matters: helpers calling helpers must see the jitted versions
    for name in ("_exp", "_log", "_log2", "_log10", "_sqrt", "_div"):
        ns[name] = njit(globals()[name])
    glb = dict(globals())
    glb.update(ns)
    for name in ("_loglog", "_pow"):
        fn = globals()[name]
        clone = type(fn)(fn.__code__, glb, name)
        ns[name] = njit(clone)
        glb[name] = ns[name]
    return ns


@functools.lru_cache(maxsize=256)
def compile_term(expr: Expr):
    """Compile ``expr`` into a numba kernel ``n -> a_n`` (n may be int or float)."""
    from numba import njit

    ns = dict(_jitted_helpers())
    ns["math"] = math
    src = f"def _term(n):\n    x = float(n)\n    return {to_source(expr)}\n"
    exec(compile(src, "<kummersum-expr>", "exec"), ns)
    return njit(ns["_term"])
