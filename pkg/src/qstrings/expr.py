"""A small expression language over q-series.

Grammar (LL(1), whitespace-insensitive)::

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | power
    power    := primary ('^' exponent)?
    exponent := INT | '-' INT | '(' ['-'] INT ['/' INT] ')'
    primary  := INT | 'q' | 'i' | NAME '(' args ')' | NAME '[' args ']'
              | '(' expr ')'
    args     := expr ((',' | ';') expr)*

Rational exponents must be parenthesized (``q^(1/2)``); ``,`` and ``;`` are
interchangeable argument separators.  ``i`` is the imaginary unit and is
only legal as a monomial coefficient.

Function arguments are classified per the signature table:

    j(x, Q)          theta sum j(x; Q), Q a plain power of q
    jbar(x, Q)       j(-x; Q)
    J[a, m] / J[m]   J_{a,m} = j(q^a; q^m); J[m] = (q^m; q^m)_inf
    Jbar[a, m]       j(-q^a; q^m)
    Jm(m)            (q^m; q^m)_inf
    eta(r)           q^(r/24) (q^r; q^r)_inf
    m(x, Q, z)       Appell-Lerch sum, Q a plain power of q
    f(a,b,c; x,y; r) Hecke-type double sum at modulus q^r
    g(b; x,y; z1,z0; r)   the two-term Appell-Lerch combination g_{1,b,1}
    h(n; x,y; z1,z0; r)   the combination h_{n,n,1}
    C(N, ell, m)     string function with its q^s prefactor
    calC(N, ell, m)  normalized string function
    theta_side(N, ell, m)  tabulated closed form, levels 1..4

where `x, y, z, z1, z0` are monomials (unit times a q-power), `Q` is a
positive power of q, and the remaining arguments are integers or rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

from .series import GaussianRational, Monomial, QSeries
from . import appell, hecke, strings, theta

F = Fraction


class ParseError(Exception):
    def __init__(self, message: str, position: int, expected: str = "", found: str = ""):
        super().__init__(f"{message} at offset {position}")
        self.position = position
        self.expected = expected
        self.found = found


class UnknownFunction(ParseError):
    pass


class EvalError(Exception):
    def __init__(self, message: str, path: str):
        super().__init__(f"{message} (at {path})")
        self.path = path


# -- AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: int
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class QVar:
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class IVar:
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: Fraction
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '/'
    left: "Node"
    right: "Node"
    pos: int = field(compare=False, default=0)


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple["Node", ...]
    pos: int = field(compare=False, default=0)


Node = Union[Num, QVar, IVar, Neg, Pow, BinOp, Call]


# -- lexer ----------------------------------------------------------------------

_PUNCT = set("+-*/^()[],;")


@dataclass(frozen=True)
class Token:
    kind: str  # 'num', 'name', 'q', 'i', punct chars, 'end'
    text: str
    pos: int


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _is_word(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or ch == "_"


def _lex(src: str) -> List[Token]:
    toks = []
    n = len(src)
    k = 0
    while k < n:
        ch = src[k]
        if ch.isspace():
            k += 1
            continue
        if _is_digit(ch):
            j = k
            while j < n and _is_digit(src[j]):
                j += 1
            toks.append(Token("num", src[k:j], k))
            k = j
            continue
        if _is_word(ch):
            j = k
            while j < n and (_is_word(src[j]) or _is_digit(src[j])):
                j += 1
            word = src[k:j]
            kind = word if word in ("q", "i") else "name"
            toks.append(Token(kind, word, k))
            k = j
            continue
        if ch in _PUNCT:
            toks.append(Token(ch, ch, k))
            k += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", k, found=repr(ch))
    toks.append(Token("end", "", n))
    return toks


# -- parser ----------------------------------------------------------------------

KNOWN_FUNCTIONS = {
    "j", "jbar", "J", "Jbar", "Jm", "eta", "m", "f", "g", "h",
    "C", "calC", "theta_side",
}


class _Parser:
    def __init__(self, toks: List[Token]):
        self.toks = toks
        self.k = 0

    def peek(self) -> Token:
        return self.toks[self.k]

    def advance(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(
                f"expected {kind!r}, found {t.text or 'end of input'!r}",
                t.pos, expected=kind, found=t.kind,
            )
        return self.advance()

    def parse(self) -> Node:
        e = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"trailing input {t.text!r}", t.pos, expected="end", found=t.kind)
        return e

    def expr(self) -> Node:
        node = self.term()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            node = BinOp(op.kind, node, self.term(), op.pos)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().kind in ("*", "/"):
            op = self.advance()
            node = BinOp(op.kind, node, self.factor(), op.pos)
        return node

    def factor(self) -> Node:
        t = self.peek()
        if t.kind == "-":
            self.advance()
            return Neg(self.factor(), t.pos)
        return self.power()

    def power(self) -> Node:
        node = self.primary()
        if self.peek().kind == "^":
            caret = self.advance()
            node = Pow(node, self.exponent(), caret.pos)
        return node

    def exponent(self) -> Fraction:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return F(int(t.text))
        if t.kind == "-":
            self.advance()
            num = self.expect("num")
            return -F(int(num.text))
        if t.kind == "(":
            self.advance()
            sign = 1
            if self.peek().kind == "-":
                self.advance()
                sign = -1
            num = self.expect("num")
            den = 1
            if self.peek().kind == "/":
                self.advance()
                den = int(self.expect("num").text)
                if den == 0:
                    raise ParseError("zero denominator in exponent", num.pos)
            self.expect(")")
            return F(sign * int(num.text), den)
        raise ParseError(
            f"expected an exponent, found {t.text or 'end of input'!r}",
            t.pos, expected="exponent", found=t.kind,
        )

    def primary(self) -> Node:
        t = self.peek()
        if t.kind == "num":
            self.advance()
            return Num(int(t.text), t.pos)
        if t.kind == "q":
            self.advance()
            return QVar(t.pos)
        if t.kind == "i":
            self.advance()
            return IVar(t.pos)
        if t.kind == "name":
            self.advance()
            if t.text not in KNOWN_FUNCTIONS:
                raise UnknownFunction(f"unknown function {t.text!r}", t.pos, found=t.text)
            opener = self.peek()
            if opener.kind not in ("(", "["):
                raise ParseError(
                    f"expected '(' or '[' after {t.text!r}",
                    opener.pos, expected="(", found=opener.kind,
                )
            closer = ")" if opener.kind == "(" else "]"
            self.advance()
            args = [self.expr()]
            while self.peek().kind in (",", ";"):
                self.advance()
                args.append(self.expr())
            self.expect(closer)
            return Call(t.text, tuple(args), t.pos)
        if t.kind == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(
            f"expected a value, found {t.text or 'end of input'!r}",
            t.pos, expected="value", found=t.kind,
        )


def parse(src: str) -> Node:
    try:
        return _Parser(_lex(src)).parse()
    except RecursionError:
        raise ParseError("expression nested too deeply", 0) from None


# -- printing --------------------------------------------------------------------


def _fmt_exponent(e: Fraction) -> str:
    if e.denominator == 1 and e >= 0:
        return str(e)
    return f"({e})"


def pretty(node: Node, prec: int = 0) -> str:
    """Canonical re-parseable rendering; parse(pretty(parse(s))) == parse(s)."""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, QVar):
        return "q"
    if isinstance(node, IVar):
        return "i"
    if isinstance(node, Call):
        inner = ", ".join(pretty(a) for a in node.args)
        if node.name in ("J", "Jbar"):
            return f"{node.name}[{inner}]"
        return f"{node.name}({inner})"
    if isinstance(node, Pow):
        s = f"{pretty(node.base, 40)}^{_fmt_exponent(node.exponent)}"
        return s if prec <= 30 else f"({s})"
    if isinstance(node, Neg):
        s = f"-{pretty(node.arg, 25)}"
        return s if prec <= 20 else f"({s})"
    if isinstance(node, BinOp):
        mine = 10 if node.op in "+-" else 20
        left = pretty(node.left, mine)
        right = pretty(node.right, mine + 1)
        s = f"{left} {node.op} {right}"
        return s if prec <= mine else f"({s})"
    raise TypeError(f"not a node: {node!r}")


# -- constant (scalar * q-power) evaluation ---------------------------------------


@dataclass(frozen=True)
class ConstValue:
    coeff: GaussianRational
    qexp: Fraction


def _eval_const(node: Node, path: str) -> ConstValue:
    """Evaluate a closed scalar-times-q-power expression; raises EvalError
    when the subtree is not of that shape."""
    if isinstance(node, Num):
        return ConstValue(GaussianRational(node.value), F(0))
    if isinstance(node, QVar):
        return ConstValue(GaussianRational(1), F(1))
    if isinstance(node, IVar):
        return ConstValue(GaussianRational(0, 1), F(0))
    if isinstance(node, Neg):
        v = _eval_const(node.arg, path)
        return ConstValue(-v.coeff, v.qexp)
    if isinstance(node, Pow):
        v = _eval_const(node.base, path)
        e = node.exponent
        if e.denominator == 1:
            n = e.numerator
            if n >= 0:
                c = GaussianRational(1)
                for _ in range(n):
                    c = c * v.coeff
            else:
                if not v.coeff:
                    raise EvalError("zero to a negative power", path)
                c = GaussianRational(1)
                for _ in range(-n):
                    c = c / v.coeff
            return ConstValue(c, v.qexp * n)
        # fractional power: only legal on a bare q-power with unit 1
        if v.coeff == GaussianRational(1):
            return ConstValue(v.coeff, v.qexp * e)
        raise EvalError("fractional power of a non-q-power", path)
    if isinstance(node, BinOp):
        l = _eval_const(node.left, path)
        r = _eval_const(node.right, path)
        if node.op == "*":
            return ConstValue(l.coeff * r.coeff, l.qexp + r.qexp)
        if node.op == "/":
            if not r.coeff:
                raise EvalError("division by zero", path)
            return ConstValue(l.coeff / r.coeff, l.qexp - r.qexp)
        # + and - stay scalar only on matching exponents
        if l.qexp == r.qexp:
            c = l.coeff + r.coeff if node.op == "+" else l.coeff - r.coeff
            return ConstValue(c, l.qexp)
        raise EvalError("sum is not a monomial", path)
    raise EvalError("not a constant expression", path)


_UNIT_KS = {
    (F(1), F(0)): 0,
    (F(0), F(1)): 1,
    (F(-1), F(0)): 2,
    (F(0), F(-1)): 3,
}


def _as_monomial(v: ConstValue, path: str) -> Monomial:
    key = (v.coeff.re, v.coeff.im)
    if key not in _UNIT_KS:
        raise EvalError(f"coefficient {v.coeff} is not a fourth root of unity", path)
    return Monomial(_UNIT_KS[key], v.qexp)


def _as_rational(v: ConstValue, path: str) -> Fraction:
    if v.qexp != 0:
        raise EvalError("expected a rational, found a q-power", path)
    if v.coeff.im != 0:
        raise EvalError("expected a rational, found an imaginary value", path)
    return v.coeff.re


def _as_int(v: ConstValue, path: str) -> int:
    r = _as_rational(v, path)
    if r.denominator != 1:
        raise EvalError(f"expected an integer, found {r}", path)
    return int(r)


def _as_modulus(v: ConstValue, path: str) -> Fraction:
    if v.coeff != GaussianRational(1) or v.qexp <= 0:
        raise EvalError("modulus must be a positive plain power of q", path)
    return v.qexp


# -- evaluation --------------------------------------------------------------------

# argument kinds: 'int', 'rat', 'mono', 'mod'
SIGNATURES = {
    "j": ("mono", "mod"),
    "jbar": ("mono", "mod"),
    "Jbar": ("rat", "rat"),
    "Jm": ("rat",),
    "eta": ("rat",),
    "m": ("mono", "mod", "mono"),
    "f": ("int", "int", "int", "mono", "mono", "rat"),
    "g": ("int", "mono", "mono", "mono", "mono", "rat"),
    "h": ("int", "mono", "mono", "mono", "mono", "rat"),
    "C": ("int", "int", "int"),
    "calC": ("int", "int", "int"),
    "theta_side": ("int", "int", "int"),
}


def _call(node: Call, order: Fraction, path: str) -> QSeries:
    name, args = node.name, node.args
    if name == "J":  # J[m] or J[a, m]
        sig = ("rat",) * len(args) if len(args) in (1, 2) else None
    else:
        sig = SIGNATURES.get(name)
    if sig is None or len(args) != len(sig):
        want = len(SIGNATURES.get(name, ())) or "1 or 2"
        raise EvalError(f"{name} takes {want} arguments, got {len(args)}", path)
    vals = []
    for idx, (kind, a) in enumerate(zip(sig, args), start=1):
        apath = f"{path} -> argument {idx} of {name}"
        v = _eval_const(a, apath)
        if kind == "int":
            vals.append(_as_int(v, apath))
        elif kind == "rat":
            vals.append(_as_rational(v, apath))
        elif kind == "mono":
            vals.append(_as_monomial(v, apath))
        else:
            vals.append(_as_modulus(v, apath))
    try:
        if name == "j":
            return theta.jtheta(vals[0], vals[1], order)
        if name == "jbar":
            return theta.jtheta(-vals[0], vals[1], order)
        if name == "J":
            if len(vals) == 1:
                return theta.Jm(vals[0], order)
            return theta.J(vals[0], vals[1], order)
        if name == "Jbar":
            return theta.Jbar(vals[0], vals[1], order)
        if name == "Jm":
            return theta.Jm(vals[0], order)
        if name == "eta":
            return theta.eta(vals[0], order)
        if name == "m":
            return appell.appell_m(vals[0], vals[1], vals[2], order)
        if name == "f":
            return hecke.hecke_f(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5], order)
        if name == "g":
            return hecke.g_1b1(vals[1], vals[2], vals[5], vals[0], vals[3], vals[4], order)
        if name == "h":
            return hecke.h_nn1(vals[0], vals[1], vals[2], vals[5], vals[3], vals[4], order)
        if name == "C":
            return strings.C_full(strings.StringLabel(vals[0], vals[1], vals[2]), order)
        if name == "calC":
            return strings.calC_hecke(strings.StringLabel(vals[0], vals[1], vals[2]), order)
        if name == "theta_side":
            return strings.level_theta_side(strings.StringLabel(vals[0], vals[1], vals[2]), order)
    except EvalError:
        raise
    except Exception as exc:
        raise EvalError(f"{type(exc).__name__}: {exc}", path) from exc
    raise EvalError(f"unhandled function {name}", path)


def _eval_series(node: Node, order: Fraction, path: str) -> QSeries:
    try:
        v = _eval_const(node, path)
        return Monomial(0, v.qexp).as_series().scale(v.coeff)
    except EvalError:
        pass
    if isinstance(node, Call):
        return _call(node, order, f"{path}/{node.name}@{node.pos}")
    if isinstance(node, Neg):
        return -_eval_series(node.arg, order, path)
    if isinstance(node, Pow):
        e = node.exponent
        if e.denominator != 1:
            raise EvalError("fractional powers apply only to monomials", path)
        base = _eval_series(node.base, order, path)
        try:
            return base ** e.numerator
        except Exception as exc:
            raise EvalError(f"{type(exc).__name__}: {exc}", f"{path}/^{e}@{node.pos}") from exc
    if isinstance(node, BinOp):
        lhs = _eval_series(node.left, order, path)
        rhs = _eval_series(node.right, order, path)
        try:
            if node.op == "+":
                return lhs + rhs
            if node.op == "-":
                return lhs - rhs
            if node.op == "*":
                return lhs * rhs
            return lhs / rhs
        except Exception as exc:
            raise EvalError(f"{type(exc).__name__}: {exc}", f"{path}/{node.op}@{node.pos}") from exc
    raise EvalError(f"cannot evaluate {type(node).__name__}", path)


def evaluate(node: Node, order) -> QSeries:
    """Evaluate to a series exact below `order`.

    Inversions can lower the provable truncation below the requested order;
    in that case the whole tree is re-evaluated at a bumped working order
    (builders are monotone in their order argument), a few times.
    """
    order = F(order)
    working = order
    for _ in range(6):
        out = _eval_series(node, working, "expr")
        if out.trunc >= order:
            return out.truncate(order)
        working += order - out.trunc + 1
    raise EvalError(f"could not reach order {order} (got {out.trunc})", "expr")


def evaluate_text(src: str, order) -> QSeries:
    return evaluate(parse(src), order)
