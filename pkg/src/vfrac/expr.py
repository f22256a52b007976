"""A one-variable expression language over ``t``.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' exponent)?
    atom   := number | 't' | func '(' expr ')' | '(' expr ')'
    func   := exp | ln | sin | cos | sqrt

``^`` binds tighter than unary minus and is right-associative. The exponent
must reduce to a constant (``t^-1.5`` and ``t^(1/2)`` are accepted,
``t^t`` is not).

Trees are immutable. :func:`evaluate` accepts scalars or numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import (
    DomainError,
    LexError,
    NonConstantExponent,
    ParseError,
    UnknownFunction,
    UnknownVariable,
)

ArrayLike = Union[float, np.ndarray]

VARIABLE = "t"


# -- nodes ----------------------------------------------------------------------


class Expr:
    """Base class of expression nodes."""

    __slots__ = ()

    def __call__(self, t: ArrayLike) -> ArrayLike:
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_source(self)

    def children(self) -> tuple["Expr", ...]:
        return ()


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Binary(Expr):
    left: Expr
    right: Expr

    def children(self):
        return (self.left, self.right)


class Add(Binary):
    pass


class Sub(Binary):
    pass


class Mul(Binary):
    pass


class Div(Binary):
    pass


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "exponent", float(self.exponent))

    def children(self):
        return (self.base,)


@dataclass(frozen=True, eq=True)
class Unary(Expr):
    arg: Expr

    def children(self):
        return (self.arg,)


class Neg(Unary):
    pass


class Exp(Unary):
    pass


class Ln(Unary):
    pass


class Sin(Unary):
    pass


class Cos(Unary):
    pass


class Sqrt(Unary):
    pass


FUNCTIONS: dict[str, type[Unary]] = {"exp": Exp, "ln": Ln, "sin": Sin, "cos": Cos, "sqrt": Sqrt}
_FUNC_NAMES = {cls: name for name, cls in FUNCTIONS.items()}

ZERO = Const(0.0)
ONE = Const(1.0)
T = Var()


def const(value: float) -> Const:
    return Const(float(value))


def node_count(e: Expr) -> int:
    count = 0
    stack = [e]
    while stack:
        node = stack.pop()
        count += 1
        stack.extend(node.children())
    return count


def depth(e: Expr) -> int:
    kids = e.children()
    return 1 + (max(depth(k) for k in kids) if kids else 0)


def is_const(e: Expr, value: float | None = None) -> bool:
    return isinstance(e, Const) and (value is None or e.value == value)


# -- tokenizer ------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # number | identifier | operator | paren | end
    lexeme: str
    position: int


_NUMBER = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^":
            tokens.append(Token("operator", ch, i))
            i += 1
            continue
        if ch in "()":
            tokens.append(Token("paren", ch, i))
            i += 1
            continue
        m = _NUMBER.match(source, i)
        if m:
            tokens.append(Token("number", m.group(), i))
            i = m.end()
            continue
        m = _IDENT.match(source, i)
        if m:
            tokens.append(Token("identifier", m.group(), i))
            i = m.end()
            continue
        raise LexError(f"unexpected character {ch!r}", i)
    tokens.append(Token("end", "", n))
    return tokens


# -- parser ---------------------------------------------------------------------


class _Parser:
    def __init__(self, source: str):
        self.tokens = tokenize(source)
        self.pos = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "end":
            self.pos += 1
        return tok

    def at(self, kind: str, lexeme: str | None = None) -> bool:
        tok = self.tok
        return tok.kind == kind and (lexeme is None or tok.lexeme == lexeme)

    def expect(self, kind: str, lexeme: str, what: str) -> Token:
        if not self.at(kind, lexeme):
            raise ParseError(f"expected {what}, found {_describe(self.tok)}", self.tok.position)
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        if not self.at("end"):
            raise ParseError(
                f"expected operator or end of input, found {_describe(self.tok)}",
                self.tok.position,
            )
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.at("operator", "+") or self.at("operator", "-"):
            op = self.advance().lexeme
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.at("operator", "*") or self.at("operator", "/"):
            op = self.advance().lexeme
            right = self.factor()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def factor(self) -> Expr:
        if self.at("operator", "-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.at("operator", "^"):
            self.advance()
            start = self.tok.position
            exponent = self.exponent()
            return Pow(base, _constant_value(exponent, start))
        return base

    def exponent(self) -> Expr:
        if self.at("operator", "-"):
            self.advance()
            return Neg(self.exponent())
        return self.power()

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.lexeme))
        if tok.kind == "identifier":
            self.advance()
            name = tok.lexeme
            if self.at("paren", "("):
                cls = FUNCTIONS.get(name)
                if cls is None:
                    raise UnknownFunction(f"unknown function {name!r}", tok.position)
                self.advance()
                arg = self.expr()
                self.expect("paren", ")", "')'")
                return cls(arg)
            if name == VARIABLE:
                return T
            if name in FUNCTIONS:
                raise ParseError(f"expected '(' after {name!r}", self.tok.position)
            raise UnknownVariable(f"unknown variable {name!r} (only {VARIABLE!r} is free)", tok.position)
        if tok.kind == "paren" and tok.lexeme == "(":
            self.advance()
            e = self.expr()
            self.expect("paren", ")", "')'")
            return e
        raise ParseError(f"expected number, 't', function or '(', found {_describe(tok)}", tok.position)


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.lexeme)


def _constant_value(e: Expr, position: int) -> float:
    if contains_variable(e):
        raise NonConstantExponent("exponent must be a constant", position)
    try:
        value = float(evaluate(e, 1.0))
    except DomainError as exc:
        raise ParseError(f"exponent is undefined: {exc}", position) from None
    return value


def parse(source: str) -> Expr:
    """Parse ``source`` into an expression tree."""
    return _Parser(source).parse()


def contains_variable(e: Expr) -> bool:
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            return True
        stack.extend(node.children())
    return False


# -- printing ------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _fmt_number(x: float) -> str:
    if x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _prec(e: Expr) -> int:
    if isinstance(e, Const) and (e.value < 0 or math.copysign(1.0, e.value) < 0):
        return 3
    return _PREC.get(type(e), 5)


def to_source(e: Expr) -> str:
    """Render ``e`` in the input grammar; ``parse(to_source(e))`` evaluates equal."""
    if isinstance(e, Const):
        if math.copysign(1.0, e.value) < 0:
            return "-" + _fmt_number(-e.value)
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return VARIABLE
    if isinstance(e, Binary):
        p = _PREC[type(e)]
        sym = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        left = _wrap(e.left, _prec(e.left) < p)
        right = _wrap(e.right, _prec(e.right) <= p)
        return f"{left} {sym} {right}"
    if isinstance(e, Pow):
        base = _wrap(e.base, _prec(e.base) <= 4)
        x = e.exponent
        exp = _fmt_number(x) if math.copysign(1.0, x) > 0 else f"(-{_fmt_number(-x)})"
        return f"{base}^{exp}"
    if isinstance(e, Neg):
        return "-" + _wrap(e.arg, _prec(e.arg) < 3)
    if isinstance(e, Unary):
        return f"{_FUNC_NAMES[type(e)]}({to_source(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def _wrap(e: Expr, paren: bool) -> str:
    s = to_source(e)
    return f"({s})" if paren else s


# -- evaluation -----------------------------------------------------------------


def _is_integer(x: float) -> bool:
    return float(x).is_integer()


def evaluate(e: Expr, t: ArrayLike) -> ArrayLike:
    """Value of ``e`` at ``t`` (scalar or array).

    Raises :class:`DomainError` for ln/sqrt of a non-positive argument, a
    zero divisor, a non-integer power of a non-positive base, or a
    non-finite result.
    """
    scalar = np.ndim(t) == 0
    x = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        value = _eval(e, x)
    value = np.broadcast_to(value, x.shape) if np.ndim(value) < x.ndim else value
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{to_source(e)} is not finite at the requested point(s)")
    return float(value) if scalar else np.array(value, dtype=float)


def _eval(e: Expr, x: np.ndarray):
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Binary):
        a = _eval(e.left, x)
        b = _eval(e.right, x)
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        if np.any(np.asarray(b) == 0.0):
            raise DomainError(f"division by zero in {to_source(e)}")
        return a / b
    if isinstance(e, Pow):
        a = np.asarray(_eval(e.base, x), dtype=float)
        c = e.exponent
        if _is_integer(c):
            if c < 0 and np.any(a == 0.0):
                raise DomainError(f"zero raised to a negative power in {to_source(e)}")
            if c == 0:
                return np.ones_like(a)
            return np.power(a, c)
        if np.any(a <= 0.0):
            raise DomainError(f"non-integer power of a non-positive base in {to_source(e)}")
        return np.power(a, c)
    if isinstance(e, Unary):
        a = _eval(e.arg, x)
        if isinstance(e, Neg):
            return -a
        if isinstance(e, Exp):
            return np.exp(a)
        if isinstance(e, Sin):
            return np.sin(a)
        if isinstance(e, Cos):
            return np.cos(a)
        if np.any(np.asarray(a) <= 0.0):
            raise DomainError(f"{_FUNC_NAMES[type(e)]} of a non-positive argument")
        return np.log(a) if isinstance(e, Ln) else np.sqrt(a)
    raise TypeError(f"not an expression node: {e!r}")


def as_function(e: Expr) -> Callable[[ArrayLike], ArrayLike]:
    return lambda t: evaluate(e, t)


# -- differentiation ----------------------------------------------------------


def diff(e: Expr) -> Expr:
    """Exact derivative with respect to ``t``, simplified."""
    return simplify(_diff(e))


def _diff(e: Expr) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return Add(_diff(e.left), _diff(e.right))
    if isinstance(e, Sub):
        return Sub(_diff(e.left), _diff(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return Add(Mul(_diff(u), v), Mul(u, _diff(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        return Div(Sub(Mul(_diff(u), v), Mul(u, _diff(v))), Pow(v, 2.0))
    if isinstance(e, Pow):
        c = e.exponent
        return Mul(Mul(Const(c), Pow(e.base, c - 1.0)), _diff(e.base))
    if isinstance(e, Neg):
        return Neg(_diff(e.arg))
    u = e.arg
    du = _diff(u)
    if isinstance(e, Exp):
        return Mul(e, du)
    if isinstance(e, Ln):
        return Div(du, u)
    if isinstance(e, Sin):
        return Mul(Cos(u), du)
    if isinstance(e, Cos):
        return Neg(Mul(Sin(u), du))
    if isinstance(e, Sqrt):
        return Div(du, Mul(Const(2.0), e))
    raise TypeError(f"not an expression node: {e!r}")


# -- simplification -------------------------------------------------------------


def simplify(e: Expr) -> Expr:
    """Local rewrites to a fixed point.

    Identities (``0+x``, ``1*x``, ``0*x``, ``x^1``, ``x^0``), constant
    folding, and merging of constant factors and equal-base powers inside a
    product. Idempotent.
    """
    for _ in range(64):
        nxt = _simplify(e)
        if nxt == e:
            return nxt
        e = nxt
    return e


def _fold(value: float) -> Expr | None:
    return Const(float(value)) if math.isfinite(value) else None


def _simplify(e: Expr) -> Expr:
    if isinstance(e, (Const, Var)):
        return e
    if isinstance(e, Binary):
        a = _simplify(e.left)
        b = _simplify(e.right)
        if isinstance(a, Const) and isinstance(b, Const):
            folded = _fold_binary(type(e), a.value, b.value)
            if folded is not None:
                return folded
        if isinstance(e, Add):
            return _simplify_add(a, b)
        if isinstance(e, Sub):
            return _simplify_sub(a, b)
        if isinstance(e, Mul):
            return _simplify_product(Mul(a, b))
        return _simplify_div(a, b)
    if isinstance(e, Pow):
        base = _simplify(e.base)
        c = e.exponent
        if c == 0.0:
            return ONE
        if c == 1.0:
            return base
        if isinstance(base, Const):
            folded = _fold_pow(base.value, c)
            if folded is not None:
                return folded
        if isinstance(base, Pow) and _is_integer(c):
            # (x^a)^k with integer k needs no sign assumption on x
            return _simplify(Pow(base.base, base.exponent * c))
        return Pow(base, c)
    if isinstance(e, Neg):
        a = _simplify(e.arg)
        if isinstance(a, Const):
            return Const(-a.value) if a.value != 0.0 else ZERO
        if isinstance(a, Neg):
            return a.arg
        if isinstance(a, Mul) and isinstance(a.left, Const):
            return _simplify_product(Mul(Const(-a.left.value), a.right))
        return Neg(a)
    if isinstance(e, Unary):
        a = _simplify(e.arg)
        if isinstance(a, Const):
            folded = _fold_unary(type(e), a.value)
            if folded is not None:
                return folded
        return type(e)(a)
    raise TypeError(f"not an expression node: {e!r}")


def _fold_binary(kind, x: float, y: float) -> Expr | None:
    if kind is Add:
        return _fold(x + y)
    if kind is Sub:
        return _fold(x - y)
    if kind is Mul:
        return _fold(x * y)
    if y == 0.0:
        return None
    return _fold(x / y)


def _fold_pow(x: float, c: float) -> Expr | None:
    if _is_integer(c):
        if c < 0 and x == 0.0:
            return None
    elif x <= 0.0:
        return None
    try:
        return _fold(math.pow(x, c))
    except (OverflowError, ValueError):
        return None


def _fold_unary(kind, x: float) -> Expr | None:
    try:
        if kind is Exp:
            return _fold(math.exp(x))
        if kind is Sin:
            return _fold(math.sin(x))
        if kind is Cos:
            return _fold(math.cos(x))
        if x <= 0.0:
            return None
        if kind is Ln:
            return _fold(math.log(x))
        return _fold(math.sqrt(x))
    except OverflowError:
        return None


def _simplify_add(a: Expr, b: Expr) -> Expr:
    if is_const(a, 0.0):
        return b
    if is_const(b, 0.0):
        return a
    if isinstance(b, Neg):
        return _simplify_sub(a, b.arg)
    if isinstance(b, Const) and b.value < 0:
        return Sub(a, Const(-b.value))
    if isinstance(a, Neg):
        return _simplify_sub(b, a.arg)
    return Add(a, b)


def _simplify_sub(a: Expr, b: Expr) -> Expr:
    if is_const(b, 0.0):
        return a
    if is_const(a, 0.0):
        return _simplify(Neg(b))
    if a == b:
        return ZERO
    if isinstance(b, Neg):
        return _simplify_add(a, b.arg)
    return Sub(a, b)


def _simplify_div(a: Expr, b: Expr) -> Expr:
    if is_const(b, 1.0):
        return a
    if is_const(a, 0.0):
        return ZERO
    if a == b:
        return ONE
    if isinstance(b, Const) and b.value != 0.0:
        inv = _fold(1.0 / b.value)
        if inv is not None:
            return _simplify_product(Mul(inv, a))
    return Div(a, b)


def _flatten_product(e: Expr, out: list[Expr]) -> None:
    if isinstance(e, Mul):
        _flatten_product(e.left, out)
        _flatten_product(e.right, out)
    else:
        out.append(e)


def _simplify_product(e: Mul) -> Expr:
    factors: list[Expr] = []
    _flatten_product(e, factors)
    coeff = 1.0
    # base -> accumulated exponent, in first-seen order
    bases: list[Expr] = []
    exponents: list[float] = []
    for f in factors:
        if isinstance(f, Neg):
            coeff = -coeff
            f = f.arg
            if isinstance(f, Mul):
                sub: list[Expr] = []
                _flatten_product(f, sub)
                factors.extend(sub)
                continue
        if isinstance(f, Const):
            coeff *= f.value
            continue
        base, power = (f.base, f.exponent) if isinstance(f, Pow) else (f, 1.0)
        for idx, seen in enumerate(bases):
            if seen == base:
                # x^a * x^b = x^(a+b) wherever both sides are defined;
                # non-integer powers already restrict the base to x > 0
                exponents[idx] += power
                break
        else:
            bases.append(base)
            exponents.append(power)
    if coeff == 0.0:
        return ZERO
    if not math.isfinite(coeff):
        return e
    rest: list[Expr] = []
    for base, power in zip(bases, exponents):
        if power == 0.0:
            continue
        rest.append(base if power == 1.0 else Pow(base, power))
    if not rest:
        return Const(coeff)
    body = rest[0]
    for f in rest[1:]:
        body = Mul(body, f)
    if coeff == 1.0:
        return body
    if coeff == -1.0:
        return Neg(body)
    return Mul(Const(coeff), body)

