"""Identity text: tokenizer, recursive-descent parser, canonical printer.

Grammar::

    identity := expr '=' expr
    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | atom ['^' atom]
    atom     := integer | name | 'inf' | '(' expr ')'
              | 'factorial' '(' expr ')'
              | 'binomial' '(' expr ',' expr ')'
              | 'sum' '(' name ',' bound ',' bound ',' expr ')'

Arguments of ``factorial``/``binomial`` and sum bounds must be integer-linear
forms; that is checked while parsing.  Exponents are left general here so a
later stage can say *why* something like ``2^(k*k)`` is not hypergeometric.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .arith import Poly, RatFunc, Ring


class ExprError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class ExprSyntaxError(ExprError):
    pass


class ExprSemanticError(ExprError):
    pass


class Expr:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Int(Expr):
    value: int


@dataclass(frozen=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True)
class Inf(Expr):
    sign: int = 1


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exp: Expr


@dataclass(frozen=True)
class Factorial(Expr):
    arg: Expr


@dataclass(frozen=True)
class Binomial(Expr):
    top: Expr
    bottom: Expr


@dataclass(frozen=True)
class Sum(Expr):
    var: str
    lo: Expr
    hi: Expr
    body: Expr


# ---------------------------------------------------------------------------------
# integer-linear forms


@dataclass(frozen=True)
class Affine:
    """``sum(coeff * name) + const`` with integer coefficients."""

    coeffs: tuple[tuple[str, int], ...]
    const: int = 0

    @classmethod
    def make(cls, coeffs: Mapping[str, int], const: int = 0) -> "Affine":
        return cls(tuple(sorted((k, v) for k, v in coeffs.items() if v)), const)

    def as_dict(self) -> dict[str, int]:
        return dict(self.coeffs)

    def coeff(self, name: str) -> int:
        for k, v in self.coeffs:
            if k == name:
                return v
        return 0

    def names(self) -> set[str]:
        return {k for k, _ in self.coeffs}

    def __add__(self, other: "Affine") -> "Affine":
        d = self.as_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, 0) + v
        return Affine.make(d, self.const + other.const)

    def __neg__(self) -> "Affine":
        return Affine(tuple((k, -v) for k, v in self.coeffs), -self.const)

    def __sub__(self, other: "Affine") -> "Affine":
        return self + (-other)

    def scale(self, c: int) -> "Affine":
        return Affine.make({k: v * c for k, v in self.coeffs}, self.const * c)

    def shift(self, name: str, amount: int) -> "Affine":
        return Affine(self.coeffs, self.const + self.coeff(name) * amount)

    def evaluate(self, point: Mapping[str, int]) -> int:
        return self.const + sum(v * point[k] for k, v in self.coeffs)

    def partial(self, point: Mapping[str, int]) -> "Affine":
        d = {}
        c = self.const
        for k, v in self.coeffs:
            if k in point:
                c += v * point[k]
            else:
                d[k] = v
        return Affine.make(d, c)

    def to_poly(self, ring: Ring) -> Poly:
        p = ring.const(self.const)
        for k, v in self.coeffs:
            p = p + ring.gen(k).scale(v)
        return p

    def to_expr(self) -> Expr:
        out: Expr | None = None
        for k, v in self.coeffs:
            t: Expr = Sym(k) if abs(v) == 1 else Mul(Int(abs(v)), Sym(k))
            if out is None:
                out = t if v > 0 else _neg(t)
            else:
                out = Add(out, t) if v > 0 else Sub(out, t)
        if out is None:
            return Int(self.const)
        if self.const > 0:
            out = Add(out, Int(self.const))
        elif self.const < 0:
            out = Sub(out, Int(-self.const))
        return out


def _neg(e: Expr) -> Expr:
    if isinstance(e, Int):
        return Int(-e.value)
    if isinstance(e, Inf):
        return Inf(-e.sign)
    return Mul(Int(-1), e)


def linear_form(e: Expr) -> Affine | None:
    """The integer-linear form of ``e``, or None if it is not one."""
    if isinstance(e, Int):
        return Affine((), e.value)
    if isinstance(e, Sym):
        return Affine(((e.name, 1),), 0)
    if isinstance(e, (Add, Sub)):
        a, b = linear_form(e.left), linear_form(e.right)
        if a is None or b is None:
            return None
        return a + b if isinstance(e, Add) else a - b
    if isinstance(e, Mul):
        a, b = linear_form(e.left), linear_form(e.right)
        if a is None or b is None:
            return None
        if not a.coeffs:
            return b.scale(a.const)
        if not b.coeffs:
            return a.scale(b.const)
        return None
    if isinstance(e, Div):
        a, b = linear_form(e.left), linear_form(e.right)
        if a is None or b is None or b.coeffs or b.const == 0:
            return None
        d = b.const
        if a.const % d or any(v % d for _, v in a.coeffs):
            return None
        return Affine.make({k: v // d for k, v in a.coeffs}, a.const // d)
    if isinstance(e, Pow):
        a = linear_form(e.base)
        if isinstance(e.exp, Int) and a is not None:
            if e.exp.value == 0:
                return Affine((), 1)
            if e.exp.value == 1:
                return a
            if not a.coeffs and e.exp.value > 0:
                return Affine((), a.const ** e.exp.value)
        return None
    return None


# ---------------------------------------------------------------------------------
# tokenizer / parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_FUNCS = {"factorial": 1, "binomial": 2, "sum": 4}


@dataclass(frozen=True)
class _Tok:
    kind: str  # int | name | op | end
    text: str
    pos: int  # 1-based


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None or m.end() == i:
            break
        if m.group(1) is not None:
            toks.append(_Tok("int", m.group(1), m.start(1) + 1))
        elif m.group(2) is not None:
            toks.append(_Tok("name", m.group(2), m.start(2) + 1))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),=":
                raise ExprSyntaxError(f"unexpected character {ch!r}", m.start(3) + 1)
            toks.append(_Tok("op", ch, m.start(3) + 1))
        i = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.next()
        if t.text != text or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", t.pos)
        return t

    def expr(self) -> Expr:
        left = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            right = self.term()
            left = Add(left, right) if op == "+" else Sub(left, right)
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            right = self.factor()
            left = Mul(left, right) if op == "*" else Div(left, right)
        return left

    def factor(self) -> Expr:
        t = self.peek()
        if t.kind == "op" and t.text == "-":
            self.next()
            return _neg(self.factor())
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            return Pow(base, self.atom())
        return base

    def atom(self) -> Expr:
        t = self.next()
        if t.kind == "int":
            return Int(int(t.text))
        if t.kind == "name":
            if t.text in _FUNCS and self.peek().text == "(" and self.peek().kind == "op":
                return self.call(t)
            if t.text == "inf":
                return Inf(1)
            return Sym(t.text)
        if t.kind == "op" and t.text == "(":
            e = self.expr()
            self.expect(")")
            return e
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ExprSyntaxError(f"unexpected {found}", t.pos)

    def call(self, name_tok: _Tok) -> Expr:
        self.expect("(")
        args: list[tuple[Expr, int]] = []
        while True:
            pos = self.peek().pos
            args.append((self.expr(), pos))
            t = self.next()
            if t.kind == "op" and t.text == ")":
                break
            if not (t.kind == "op" and t.text == ","):
                found = "end of input" if t.kind == "end" else repr(t.text)
                raise ExprSyntaxError(f"expected ',' or ')', found {found}", t.pos)
        name = name_tok.text
        if len(args) != _FUNCS[name]:
            raise ExprSyntaxError(f"{name} takes {_FUNCS[name]} argument(s), got {len(args)}", name_tok.pos)
        if name == "sum":
            (var, vpos), (lo, lpos), (hi, hpos), (body, _) = args
            if not isinstance(var, Sym):
                raise ExprSemanticError("sum variable must be a name", vpos)
            for b, p in ((lo, lpos), (hi, hpos)):
                if not isinstance(b, Inf) and linear_form(b) is None:
                    raise ExprSemanticError("sum bound is not integer-linear", p)
            return Sum(var.name, lo, hi, body)
        for a, p in args:
            if linear_form(a) is None:
                raise ExprSemanticError(f"argument of {name} is not integer-linear", p)
        if name == "factorial":
            return Factorial(args[0][0])
        return Binomial(args[0][0], args[1][0])


def parse(text: str) -> Expr:
    """Parse one expression (no ``=``)."""
    p = _Parser(text)
    e = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.pos)
    return e


def parse_identity(text: str) -> tuple[Expr, Expr]:
    p = _Parser(text)
    lhs = p.expr()
    p.expect("=")
    rhs = p.expr()
    t = p.peek()
    if t.kind != "end":
        raise ExprSyntaxError(f"unexpected {t.text!r}", t.pos)
    return lhs, rhs


# ---------------------------------------------------------------------------------
# printer


def _is_neglike(e: Expr) -> bool:
    if isinstance(e, Int):
        return e.value < 0
    if isinstance(e, Inf):
        return e.sign < 0
    return isinstance(e, Mul) and e.left == Int(-1) and not isinstance(e.right, Int)


def _prec(e: Expr) -> int:
    if _is_neglike(e):
        return 25
    if isinstance(e, (Add, Sub)):
        return 10
    if isinstance(e, (Mul, Div)):
        return 20
    if isinstance(e, Pow):
        return 30
    return 40


def _wrap(e: Expr, ok: bool) -> str:
    s = to_text(e)
    return s if ok else f"({s})"


def to_text(e: Expr) -> str:
    """Canonical text; ``parse(to_text(e)) == e``."""
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Inf):
        return "inf" if e.sign > 0 else "-inf"
    if _is_neglike(e):
        inner = e.right
        return "-" + _wrap(inner, _prec(inner) >= 30 or _is_neglike(inner))
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        right_ok = _prec(e.right) > 10 and not _is_neglike(e.right)
        return to_text(e.left) + op + _wrap(e.right, right_ok)
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        left_ok = _prec(e.left) >= 20
        right_ok = _prec(e.right) > 20 and not _is_neglike(e.right)
        return _wrap(e.left, left_ok) + op + _wrap(e.right, right_ok)
    if isinstance(e, Pow):
        return _wrap(e.base, _prec(e.base) >= 40 and not _is_neglike(e.base)) + "^" + _wrap(
            e.exp, _prec(e.exp) >= 40 and not _is_neglike(e.exp)
        )
    if isinstance(e, Factorial):
        return f"factorial({to_text(e.arg)})"
    if isinstance(e, Binomial):
        return f"binomial({to_text(e.top)}, {to_text(e.bottom)})"
    if isinstance(e, Sum):
        return f"sum({e.var}, {to_text(e.lo)}, {to_text(e.hi)}, {to_text(e.body)})"
    raise TypeError(f"not an expression: {e!r}")


print_expr = to_text


# ---------------------------------------------------------------------------------
# utilities


def symbols(e: Expr) -> set[str]:
    """Free names (sum variables are bound)."""
    if isinstance(e, Sym):
        return {e.name}
    if isinstance(e, (Int, Inf)):
        return set()
    if isinstance(e, (Add, Sub, Mul, Div)):
        return symbols(e.left) | symbols(e.right)
    if isinstance(e, Pow):
        return symbols(e.base) | symbols(e.exp)
    if isinstance(e, Factorial):
        return symbols(e.arg)
    if isinstance(e, Binomial):
        return symbols(e.top) | symbols(e.bottom)
    if isinstance(e, Sum):
        return (symbols(e.body) - {e.var}) | symbols(e.lo) | symbols(e.hi)
    raise TypeError(e)


def contains_sum(e: Expr) -> bool:
    if isinstance(e, Sum):
        return True
    if isinstance(e, (Add, Sub, Mul, Div)):
        return contains_sum(e.left) or contains_sum(e.right)
    if isinstance(e, Pow):
        return contains_sum(e.base) or contains_sum(e.exp)
    return False


def to_ratfunc(e: Expr, ring: Ring) -> RatFunc:
    """Rational-function value of an expression built from + - * / and integer powers."""
    if isinstance(e, Int):
        return RatFunc(ring.const(e.value))
    if isinstance(e, Sym):
        return RatFunc(ring.gen(e.name))
    if isinstance(e, Add):
        return to_ratfunc(e.left, ring) + to_ratfunc(e.right, ring)
    if isinstance(e, Sub):
        return to_ratfunc(e.left, ring) - to_ratfunc(e.right, ring)
    if isinstance(e, Mul):
        return to_ratfunc(e.left, ring) * to_ratfunc(e.right, ring)
    if isinstance(e, Div):
        return to_ratfunc(e.left, ring) / to_ratfunc(e.right, ring)
    if isinstance(e, Pow) and isinstance(e.exp, Int):
        return to_ratfunc(e.base, ring) ** e.exp.value
    raise ExprSemanticError(f"not a rational function: {to_text(e)}")


def to_poly(e: Expr, ring: Ring) -> Poly:
    """Polynomial value; division only by nonzero constants."""
    if isinstance(e, Int):
        return ring.const(e.value)
    if isinstance(e, Sym):
        return ring.gen(e.name)
    if isinstance(e, Add):
        return to_poly(e.left, ring) + to_poly(e.right, ring)
    if isinstance(e, Sub):
        return to_poly(e.left, ring) - to_poly(e.right, ring)
    if isinstance(e, Mul):
        return to_poly(e.left, ring) * to_poly(e.right, ring)
    if isinstance(e, Div):
        d = to_poly(e.right, ring)
        if not d.is_constant() or d.is_zero():
            raise ExprSemanticError(f"not a polynomial: {to_text(e)}")
        return to_poly(e.left, ring).scale(Fraction(1) / d.constant_value())
    if isinstance(e, Pow) and isinstance(e.exp, Int) and e.exp.value >= 0:
        return to_poly(e.base, ring) ** e.exp.value
    raise ExprSemanticError(f"not a polynomial: {to_text(e)}")
