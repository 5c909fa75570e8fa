"""
A recursive-descent parser for expressions over jet coordinates.

Grammar:

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := ('+' | '-') unary | power
    power    := base (('^' | '**') exponent)?
    exponent := ('+' | '-')? integer | '(' ('+' | '-')? integer ')'
    base     := number | ident | func '(' expr ')' | '(' expr ')'

Identifiers are x, y, the declared dependent-variable names (or u1..um),
optionally followed by one of the suffixes _x, _y, _xx, _xy, _yy.
Functions are exp, log, sin, cos. Decimal literals are read as exact rationals.

Author: Erel Segal-Halevi
Since: 2024-03
"""

import re
from dataclasses import dataclass
from typing import List, Union

import sympy

from varmult.symbolic.jet import JetSpace

import logging
logger = logging.getLogger(__name__)


FUNCTIONS = {"exp": sympy.exp, "log": sympy.log, "sin": sympy.sin, "cos": sympy.cos}

TOKEN_PATTERN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<number>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9]*(?:_(?:xx|xy|yy|x|y))?)"
    r"|(?P<op>\*\*|[-+*/^()])"
)


class ParseError(ValueError):
    """
    A syntax or name error in an expression, with the 0-based position of the offending character.
    """

    def __init__(self, message: str, source: str, position: int):
        self.message = message
        self.source = source
        self.position = position
        super().__init__(f"{message} at position {position}\n    {source}\n    {' ' * position}^")


@dataclass(frozen=True)
class Token:
    kind: str       # "number", "ident", "op" or "end"
    text: str
    position: int


def tokenize(source: str) -> List[Token]:
    """
    >>> [t.text for t in tokenize("u_x*v_y - 2.5^2")]
    ['u_x', '*', 'v_y', '-', '2.5', '^', '2', '']
    >>> tokenize("u # v")
    Traceback (most recent call last):
    ...
    varmult.symbolic.parser.ParseError: Unexpected character '#' at position 2
        u # v
          ^
    """
    tokens = []
    position = 0
    while position < len(source):
        match = TOKEN_PATTERN.match(source, position)
        if match is None:
            raise ParseError(f"Unexpected character '{source[position]}'", source, position)
        if match.lastgroup != "space":
            tokens.append(Token(match.lastgroup, match.group(), position))
        position = match.end()
    tokens.append(Token("end", "", len(source)))
    return tokens


class Parser:
    def __init__(self, source: str, jet: JetSpace, allow_second_order: bool = True):
        self.source = source
        self.jet = jet
        self.allow_second_order = allow_second_order
        self.tokens = tokenize(source)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def error(self, message: str, token: Token = None):
        token = token or self.current
        return ParseError(message, self.source, token.position)

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind == "end":
            found = "end of input" if self.current.kind == "end" else f"'{self.current.text}'"
            raise self.error(f"Expected '{text}' but found {found}")
        return self.advance()

    def parse(self) -> sympy.Expr:
        if self.current.kind == "end":
            raise self.error("Empty expression")
        result = self.expr()
        if self.current.kind != "end":
            raise self.error(f"Unexpected '{self.current.text}'")
        return result

    def expr(self) -> sympy.Expr:
        result = self.term()
        while self.current.text in ("+", "-") and self.current.kind == "op":
            operator = self.advance().text
            right = self.term()
            result = result + right if operator == "+" else result - right
        return result

    def term(self) -> sympy.Expr:
        result = self.unary()
        while self.current.text in ("*", "/") and self.current.kind == "op":
            operator_token = self.advance()
            right = self.unary()
            if operator_token.text == "*":
                result = result * right
            else:
                if right == 0:
                    raise self.error("Division by zero", operator_token)
                result = result / right
        return result

    def unary(self) -> sympy.Expr:
        if self.current.kind == "op" and self.current.text in ("+", "-"):
            operator = self.advance().text
            operand = self.unary()
            return -operand if operator == "-" else operand
        return self.power()

    def power(self) -> sympy.Expr:
        base = self.base()
        if self.current.kind == "op" and self.current.text in ("^", "**"):
            operator_token = self.advance()
            exponent = self.exponent()
            if base == 0 and exponent < 0:
                raise self.error("Division by zero", operator_token)
            return base ** exponent
        return base

    def exponent(self) -> int:
        parenthesized = self.current.text == "("
        if parenthesized:
            self.advance()
        sign = 1
        if self.current.kind == "op" and self.current.text in ("+", "-"):
            sign = -1 if self.advance().text == "-" else 1
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise self.error("Exponents must be integers")
        self.advance()
        if parenthesized:
            self.expect(")")
        return sign * int(token.text)

    def base(self) -> sympy.Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return sympy.Rational(token.text)
        if token.kind == "op" and token.text == "(":
            self.advance()
            result = self.expr()
            self.expect(")")
            return result
        if token.kind == "ident":
            self.advance()
            if token.text in FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return FUNCTIONS[token.text](argument)
            return self.identifier(token)
        if token.kind == "end":
            raise self.error("Unexpected end of input")
        raise self.error(f"Unexpected '{token.text}'")

    def identifier(self, token: Token) -> sympy.Symbol:
        symbol = self.jet.lookup(token.text)
        if symbol is None:
            alias = re.match(r"^u(\d+)(_\w+)?$", token.text)
            if alias and not (1 <= int(alias.group(1)) <= self.jet.m):
                raise self.error(f"Index {alias.group(1)} out of range 1..{self.jet.m}", token)
            raise self.error(f"Unknown identifier '{token.text}'", token)
        if not self.allow_second_order and self.jet.order_of(symbol) == 2:
            raise self.error(f"Second-order coordinate '{token.text}' is not allowed here", token)
        return symbol


def parse(source: str, jet: Union[int, JetSpace], allow_second_order: bool = True) -> sympy.Expr:
    """
    Parse an expression over the jet coordinates of `jet` (a JetSpace, or the number m of dependent variables).

    >>> parse("v", 2)
    v
    >>> parse("x*u", 2)
    u*x
    >>> parse("u_x*v_y - v_x*u_y", 2)
    u_x*v_y - u_y*v_x
    >>> parse("-u^2", 2)
    -u**2
    >>> parse("0.5*exp(u2)", 2)
    exp(v)/2
    >>> parse("u3", 2)
    Traceback (most recent call last):
    ...
    varmult.symbolic.parser.ParseError: Index 3 out of range 1..2 at position 0
        u3
        ^
    >>> parse("u + z", 2)
    Traceback (most recent call last):
    ...
    varmult.symbolic.parser.ParseError: Unknown identifier 'z' at position 4
        u + z
            ^
    >>> parse("(u + v", 2)
    Traceback (most recent call last):
    ...
    varmult.symbolic.parser.ParseError: Expected ')' but found end of input at position 6
        (u + v
              ^
    """
    if isinstance(jet, int):
        jet = JetSpace.default(jet)
    result = Parser(source, jet, allow_second_order).parse()
    logger.debug("Parsed %r into %s", source, result)
    return result


def to_string(expression: sympy.Expr) -> str:
    """
    Print an expression in a form that `parse` reads back.

    >>> to_string(parse("u_x*v_y/2", 2))
    'u_x*v_y/2'
    """
    return sympy.sstr(expression)


if __name__ == "__main__":
    import doctest
    print(doctest.testmod())
