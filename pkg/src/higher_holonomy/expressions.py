"""Scalar field expressions: a small AST with a parser, numpy-broadcasting
evaluation, and exact symbolic differentiation.

Grammar (documented bit-exactly in docs/expression_grammar.md):

    expr   := term { ("+" | "-") term }
    term   := unary { ("*" | "/") unary }
    unary  := ("-" | "+") unary | power
    power  := atom [ "^" [ "-" ] INTEGER ]
    atom   := NUMBER | "i" | "pi" | VAR | FUNC "(" expr ")" | "(" expr ")"
    FUNC   := "sin" | "cos" | "exp"
    VAR    := "s" | "t" | "z" | "x1" | "x2" | ...

Powers are restricted to integer exponents.  The literal `i` is the
imaginary unit (for complex algebras); `pi` is the circle constant.
Evaluation environments may bind variables to scalars or numpy arrays.
"""

from __future__ import annotations

import math
import re

import numpy as np

from .errors import ExpressionError

_FUNCS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}
_VAR_RE = re.compile(r"^(s|t|z|u|x[0-9]+)$")


class Expr:
    """Base expression node."""

    def evaluate(self, env):
        raise NotImplementedError

    def diff(self, var: str) -> "Expr":
        raise NotImplementedError

    def free_vars(self) -> set:
        raise NotImplementedError

    def __str__(self):
        raise NotImplementedError


class Num(Expr):
    def __init__(self, value):
        self.value = value

    def evaluate(self, env):
        return self.value

    def diff(self, var):
        return Num(0.0)

    def free_vars(self):
        return set()

    def __str__(self):
        if isinstance(self.value, complex):
            return f"({self.value.real}+{self.value.imag}*i)"
        return repr(self.value)


class Var(Expr):
    def __init__(self, name):
        self.name = name

    def evaluate(self, env):
        try:
            return env[self.name]
        except KeyError as exc:
            raise ExpressionError(f"unbound variable {self.name!r}") from exc

    def diff(self, var):
        return Num(1.0 if var == self.name else 0.0)

    def free_vars(self):
        return {self.name}

    def __str__(self):
        return self.name


class Bin(Expr):
    def __init__(self, op, a, b):
        self.op = op
        self.a = a
        self.b = b

    def evaluate(self, env):
        x = self.a.evaluate(env)
        y = self.b.evaluate(env)
        if self.op == "+":
            return x + y
        if self.op == "-":
            return x - y
        if self.op == "*":
            return x * y
        return x / y

    def diff(self, var):
        da, db = self.a.diff(var), self.b.diff(var)
        if self.op in "+-":
            return Bin(self.op, da, db)
        if self.op == "*":
            return Bin("+", Bin("*", da, self.b), Bin("*", self.a, db))
        # quotient rule
        num = Bin("-", Bin("*", da, self.b), Bin("*", self.a, db))
        return Bin("/", num, Pow(self.b, 2))

    def free_vars(self):
        return self.a.free_vars() | self.b.free_vars()

    def __str__(self):
        return f"({self.a} {self.op} {self.b})"


class Neg(Expr):
    def __init__(self, a):
        self.a = a

    def evaluate(self, env):
        return -self.a.evaluate(env)

    def diff(self, var):
        return Neg(self.a.diff(var))

    def free_vars(self):
        return self.a.free_vars()

    def __str__(self):
        return f"(-{self.a})"


class Pow(Expr):
    def __init__(self, base, exponent: int):
        self.base = base
        self.exponent = int(exponent)

    def evaluate(self, env):
        return self.base.evaluate(env) ** self.exponent

    def diff(self, var):
        n = self.exponent
        if n == 0:
            return Num(0.0)
        return Bin("*", Num(float(n)), Bin("*", Pow(self.base, n - 1), self.base.diff(var)))

    def free_vars(self):
        return self.base.free_vars()

    def __str__(self):
        return f"({self.base}^{self.exponent})"


class Call(Expr):
    def __init__(self, fn, arg):
        self.fn = fn
        self.arg = arg

    def evaluate(self, env):
        return _FUNCS[self.fn](self.arg.evaluate(env))

    def diff(self, var):
        inner = self.arg.diff(var)
        if self.fn == "sin":
            outer = Call("cos", self.arg)
        elif self.fn == "cos":
            outer = Neg(Call("sin", self.arg))
        else:
            outer = Call("exp", self.arg)
        return Bin("*", outer, inner)

    def free_vars(self):
        return self.arg.free_vars()

    def __str__(self):
        return f"{self.fn}({self.arg})"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ExpressionError(f"bad character at {pos}: {text[pos:pos + 8]!r}")
        if m.lastgroup is None:
            # matched only whitespace at the very end
            pos = m.end()
            continue
        if m.group("num") is not None:
            tokens.append(("num", float(m.group(0))))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident")))
        else:
            tokens.append(("op", m.group("op")))
        pos = m.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens, text):
        self.tokens = tokens
        self.text = text
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ExpressionError(f"expected {kind}, got {tok} in {self.text!r}")
        if value is not None and tok[1] != value:
            raise ExpressionError(f"expected {value!r}, got {tok} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "end":
            raise ExpressionError(f"trailing input at token {self.peek()} in {self.text!r}")
        return e

    def expr(self):
        e = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            op = self.take()[1]
            e = Bin(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            op = self.take()[1]
            e = Bin(op, e, self.unary())
        return e

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return Neg(self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            tok = self.take("num")
            if tok[1] != int(tok[1]):
                raise ExpressionError("only integer powers are supported")
            return Pow(base, sign * int(tok[1]))
        return base

    def atom(self):
        kind, value = self.peek()
        if kind == "num":
            self.take()
            return Num(value)
        if kind == "ident":
            self.take()
            if value == "i":
                return Num(1j)
            if value == "pi":
                return Num(math.pi)
            if value in _FUNCS:
                self.take("op", "(")
                arg = self.expr()
                self.take("op", ")")
                return Call(value, arg)
            if _VAR_RE.match(value):
                return Var(value)
            raise ExpressionError(f"unknown identifier {value!r}")
        if (kind, value) == ("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        raise ExpressionError(f"unexpected token {self.peek()} in {self.text!r}")


def parse(text) -> Expr:
    """Parse a scalar field expression; numbers pass through unchanged."""
    if isinstance(text, Expr):
        return text
    if isinstance(text, (int, float, complex)):
        return Num(text)
    return _Parser(_tokenize(text), text).parse()


def simplify(e: Expr) -> Expr:
    """Light constant folding and unit elimination; keeps derivative
    evaluation cheap without attempting canonical forms."""
    if isinstance(e, Bin):
        a, b = simplify(e.a), simplify(e.b)
        if isinstance(a, Num) and isinstance(b, Num):
            return Num(Bin(e.op, a, b).evaluate({}))
        if e.op == "+":
            if _is_const(a, 0):
                return b
            if _is_const(b, 0):
                return a
        elif e.op == "-":
            if _is_const(b, 0):
                return a
            if _is_const(a, 0):
                return simplify(Neg(b))
        elif e.op == "*":
            if _is_const(a, 0) or _is_const(b, 0):
                return Num(0.0)
            if _is_const(a, 1):
                return b
            if _is_const(b, 1):
                return a
        elif e.op == "/":
            if _is_const(a, 0):
                return Num(0.0)
            if _is_const(b, 1):
                return a
        return Bin(e.op, a, b)
    if isinstance(e, Neg):
        a = simplify(e.a)
        if isinstance(a, Num):
            return Num(-a.value)
        if isinstance(a, Neg):
            return a.a
        return Neg(a)
    if isinstance(e, Pow):
        base = simplify(e.base)
        if e.exponent == 0:
            return Num(1.0)
        if e.exponent == 1:
            return base
        if isinstance(base, Num):
            return Num(base.value**e.exponent)
        return Pow(base, e.exponent)
    if isinstance(e, Call):
        arg = simplify(e.arg)
        if isinstance(arg, Num):
            return Num(Call(e.fn, arg).evaluate({}))
        return Call(e.fn, arg)
    return e


def _is_const(e: Expr, value) -> bool:
    return isinstance(e, Num) and e.value == value


def derivative(e: Expr, var: str) -> Expr:
    return simplify(e.diff(var))


def evaluate(e: Expr, env) -> object:
    return e.evaluate(env)
