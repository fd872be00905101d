"""Recursive-descent parser for the expression surface grammar.

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" ["-"] INTEGER)?
    atom    := INTEGER | IDENT | "exp" "(" expr ")" | "(" expr ")"

Rationals are written ``p/q``. The argument of ``exp`` must reduce to a
linear form in the coordinates with rational coefficients and no constant.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Union

from domain.errors import ExpressionParseError, UnknownSymbolError
from domain.symbolic.expr import ONE_KEY, Coordinate, Expr

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\S))")


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "ident", "op", "end"
    text: str
    position: int


def _tokenize(text: str) -> List[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:  # trailing whitespace
            break
        number, ident, op = match.groups()
        start = match.start(match.lastindex)
        if number is not None:
            tokens.append(_Token("int", number, start))
        elif ident is not None:
            tokens.append(_Token("ident", ident, start))
        else:
            if op not in "+-*/^()":
                raise ExpressionParseError(f"unexpected character {op!r}", text, start)
            tokens.append(_Token("op", op, start))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """Parses expression text against a fixed coordinate list."""

    def __init__(self, coords: Sequence[Union[str, Coordinate]]):
        self.coords = [c if isinstance(c, Coordinate) else Coordinate(c) for c in coords]
        self._names = {c.name for c in self.coords}
        if len(self._names) != len(self.coords):
            raise ExpressionParseError("duplicate coordinate names", "", 0)

    def parse(self, text: str) -> Expr:
        self._text = text
        self._tokens = _tokenize(text)
        self._index = 0
        if self._peek().kind == "end":
            raise ExpressionParseError("empty expression", text, 0)
        result = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise ExpressionParseError(f"unexpected {token.text!r}", text, token.position)
        return result

    # token helpers --------------------------------------------------------

    def _peek(self) -> _Token:
        return self._tokens[self._index]

    def _advance(self) -> _Token:
        token = self._tokens[self._index]
        self._index += 1
        return token

    def _accept(self, op: str) -> bool:
        token = self._peek()
        if token.kind == "op" and token.text == op:
            self._index += 1
            return True
        return False

    def _expect(self, op: str):
        token = self._peek()
        if not self._accept(op):
            found = token.text or "end of input"
            raise ExpressionParseError(f"expected {op!r}, found {found!r}", self._text, token.position)

    # grammar --------------------------------------------------------------

    def _expr(self) -> Expr:
        value = self._term()
        while True:
            if self._accept("+"):
                value = value + self._term()
            elif self._accept("-"):
                value = value - self._term()
            else:
                return value

    def _term(self) -> Expr:
        value = self._unary()
        while True:
            if self._accept("*"):
                value = value * self._unary()
            elif self._accept("/"):
                token = self._peek()
                divisor = self._unary()
                if divisor.is_zero():
                    raise ExpressionParseError("division by zero", self._text, token.position)
                value = value / divisor
            else:
                return value

    def _unary(self) -> Expr:
        if self._accept("-"):
            return -self._unary()
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if not self._accept("^"):
            return base
        negative = self._accept("-")
        token = self._peek()
        if token.kind != "int":
            raise ExpressionParseError("non-integer exponent", self._text, token.position)
        self._advance()
        exponent = -int(token.text) if negative else int(token.text)
        if exponent < 0 and base.is_zero():
            raise ExpressionParseError("negative power of zero", self._text, token.position)
        return base ** exponent

    def _atom(self) -> Expr:
        token = self._advance()
        if token.kind == "int":
            return Expr.constant(int(token.text))
        if token.kind == "ident":
            if token.text == "exp":
                return self._exponential(token)
            if token.text not in self._names:
                raise UnknownSymbolError(f"unknown symbol {token.text!r}", self._text, token.position)
            return Expr.symbol(token.text)
        if token.kind == "op" and token.text == "(":
            value = self._expr()
            self._expect(")")
            return value
        found = token.text or "end of input"
        raise ExpressionParseError(f"unexpected {found!r}", self._text, token.position)

    def _exponential(self, token: _Token) -> Expr:
        self._expect("(")
        argument = self._expr()
        self._expect(")")
        rates = {}
        linear = argument.is_zero() or argument.denominator == ((ONE_KEY, Fraction(1)),)
        if linear:
            for (exp_atom, mono), coef in argument.numerator:
                if exp_atom or len(mono) != 1 or mono[0][1] != 1:
                    linear = False
                    break
                rates[mono[0][0]] = coef
        if not linear:
            raise ExpressionParseError(
                "exp argument must be linear in the coordinates with rational coefficients",
                self._text,
                token.position,
            )
        return Expr.exponential(rates)


def parse(text: str, coords: Sequence[Union[str, Coordinate]]) -> Expr:
    """Parse ``text`` into a canonical ``Expr`` over ``coords``."""
    return ExpressionParser(coords).parse(text)
