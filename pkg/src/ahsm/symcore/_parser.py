"""
Recursive-descent parser for the expression language.

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := base ("^" INT)? | "-" factor
    base   := NUMBER | IDENT | IDENT "(" expr ")"
            | "d" "(" expr "," IDENT ("," INT)? ")"
            | "dx" "(" expr ")" | "dt" "(" expr ")" | "(" expr ")"

Numbers are exact: ``0.5478`` is 2739/5000. ``INT "/" INT`` is ordinary
division, which yields the same rational for a bare literal. Derivatives are
applied as they are parsed.
"""

import re
from dataclasses import dataclass
from typing import NoReturn

import sympy

from ._atoms import (
    FAMILIES,
    RESERVED_PARAMS,
    coefficient,
    func_deriv,
    placeholder,
)
from ._calculus import diff_total
from ._errors import DerivativeVariableError, ParseError, UnknownIdentifierError

__all__ = ["Namespace", "DEFAULT_NAMESPACE", "parse", "line_col"]

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),])"
)

_COEFFICIENT = re.compile(rf"({'|'.join(FAMILIES)})(\d+)(?:_([A-Za-z]+))?")
_FUNCTION = re.compile(r"([A-Za-z][A-Za-z0-9]*)(?:_(\d+))?")


@dataclass(frozen=True)
class Namespace:
    """
    The identifiers an expression may use.

    ``eps``, ``theta`` and ``q`` are always available. Series coefficients
    (``u0``, ``uhat2_x``, ``utilde1_xxxx``, ...) are always available as well.
    """

    indep: tuple[str, ...] = ("x", "t")
    dep: str = "u"
    params: tuple[str, ...] = ("a",)
    funcs: tuple[str, ...] = ("F",)

    @property
    def variables(self) -> tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(name) for name in self.indep)

    @property
    def placeholder(self) -> sympy.Expr:
        return placeholder(self.dep, self.variables)


DEFAULT_NAMESPACE = Namespace()


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    pos: int


def line_col(src: str, pos: int) -> tuple[int, int]:
    """1-based line and column of offset ``pos`` in ``src``."""
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _tokenize(src: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        match = _TOKEN.match(src, pos)
        if match is None:
            line, col = line_col(src, pos)
            raise ParseError(f"unexpected character {src[pos]!r}", line, col, pos)
        if match.lastgroup != "ws":
            tokens.append(_Token(match.lastgroup, match.group(), pos))
        pos = match.end()

    tokens.append(_Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, namespace: Namespace) -> None:
        self.src = src
        self.ns = namespace
        self.tokens = _tokenize(src)
        self.index = 0

    def parse(self) -> sympy.Expr:
        value = self._expr()
        token = self._peek()
        if token.kind != "end":
            self._fail(f"unexpected {token.text!r}", token)
        return value

    # token helpers

    def _peek(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.tokens[self.index]
        if token.kind != "end":
            self.index += 1
        return token

    def _at_op(self, text: str) -> bool:
        token = self._peek()
        return token.kind == "op" and token.text == text

    def _accept(self, text: str) -> bool:
        if self._at_op(text):
            self._advance()
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            token = self._peek()
            found = token.text or "end of input"
            self._fail(f"expected {text!r}, found {found!r}", token)

    def _fail(self, message: str, token: _Token, kind=ParseError) -> NoReturn:
        line, col = line_col(self.src, token.pos)
        raise kind(message, line, col, token.pos)

    def _integer(self, what: str, minimum: int) -> int:
        token = self._advance()
        if token.kind != "number" or not token.text.isdigit():
            self._fail(f"{what} must be an integer, found {token.text!r}", token)
        value = int(token.text)
        if value < minimum:
            self._fail(f"{what} must be at least {minimum}, found {value}", token)
        return value

    # grammar

    def _expr(self) -> sympy.Expr:
        value = self._term()
        while True:
            if self._accept("+"):
                value = value + self._term()
            elif self._accept("-"):
                value = value - self._term()
            else:
                return value

    def _term(self) -> sympy.Expr:
        value = self._factor()
        while True:
            if self._accept("*"):
                value = value * self._factor()
            elif self._accept("/"):
                value = value / self._factor()
            else:
                return value

    def _factor(self) -> sympy.Expr:
        if self._accept("-"):
            return -self._factor()

        base = self._base()
        if self._accept("^"):
            return base ** self._integer("exponent", 0)
        return base

    def _base(self) -> sympy.Expr:
        token = self._advance()

        if token.kind == "number":
            return sympy.Rational(token.text)

        if token.kind == "op" and token.text == "(":
            value = self._expr()
            self._expect(")")
            return value

        if token.kind == "ident":
            if self._accept("("):
                return self._call(token)
            return self._identifier(token)

        self._fail(f"unexpected {token.text or 'end of input'!r}", token)

    def _call(self, token: _Token) -> sympy.Expr:
        name = token.text

        if name == "d":
            arg = self._expr()
            self._expect(",")
            var = self._variable(self._advance())
            order = 1
            if self._accept(","):
                order = self._integer("derivative order", 1)
            self._expect(")")
            return diff_total(arg, var, order)

        if name[1:] in self.ns.indep and name.startswith("d"):
            arg = self._expr()
            self._expect(")")
            return diff_total(arg, sympy.Symbol(name[1:]), 1)

        match = _FUNCTION.fullmatch(name)
        if match is not None and match.group(1) in self.ns.funcs:
            func = func_deriv(match.group(1), int(match.group(2) or 0))
            arg = self._expr()
            self._expect(")")
            return func(arg)

        if re.fullmatch(r"d[A-Za-z]", name):
            self._fail(
                f"cannot differentiate with respect to {name[1:]!r}",
                token,
                DerivativeVariableError,
            )

        self._fail(f"unknown function {name!r}", token, UnknownIdentifierError)

    def _variable(self, token: _Token) -> sympy.Symbol:
        if token.kind != "ident" or token.text not in self.ns.indep:
            self._fail(
                f"cannot differentiate with respect to {token.text!r}",
                token,
                DerivativeVariableError,
            )
        return sympy.Symbol(token.text)

    def _identifier(self, token: _Token) -> sympy.Expr:
        name = token.text

        if name in self.ns.indep:
            return sympy.Symbol(name)
        if name == self.ns.dep:
            return self.ns.placeholder
        if name in RESERVED_PARAMS:
            return RESERVED_PARAMS[name]
        if name in self.ns.params:
            return sympy.Symbol(name)

        match = _COEFFICIENT.fullmatch(name)
        if match is not None:
            family, order, suffix = match.groups()
            base = coefficient(family, int(order), self.ns.variables)
            return self._suffixed(base, suffix, token)

        prefix = f"{self.ns.dep}_"
        if name.startswith(prefix):
            return self._suffixed(self.ns.placeholder, name[len(prefix) :], token)

        self._fail(f"unknown identifier {name!r}", token, UnknownIdentifierError)

    def _suffixed(self, base: sympy.Expr, suffix: str | None, token: _Token):
        if not suffix:
            return base

        for letter in suffix:
            if letter not in self.ns.indep:
                self._fail(
                    f"cannot differentiate with respect to {letter!r}",
                    token,
                    DerivativeVariableError,
                )

        counts = [(sympy.Symbol(v), suffix.count(v)) for v in self.ns.indep]
        return sympy.diff(base, *[(v, n) for v, n in counts if n > 0])


def parse(src: str, namespace: Namespace = DEFAULT_NAMESPACE) -> sympy.Expr:
    """
    Parse ``src`` into an expression.

    Raises:
        ParseError: on a syntax error, with line and column.
        UnknownIdentifierError: on an identifier the namespace does not know.
        DerivativeVariableError: when differentiating with respect to
            anything other than an independent variable.
    """
    return _Parser(src, namespace).parse()
