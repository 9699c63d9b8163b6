"""Expression syntax for polynomials in a graded context.

::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' nat)?
    atom   := rational | ident | 'd' '(' ident ')' | '(' expr ')'

Products are read left to right with the Koszul sign rule, so ``z*w`` and
``w*z`` differ by a sign for odd ``z, w``.  ``str(GradedPoly)`` prints in
this syntax and parses back to the same polynomial.
"""
import re
from fractions import Fraction
from typing import Iterator, List, NamedTuple, Optional

from nqcalc.errors import ExpressionSyntaxError, UnknownGenerator
from nqcalc.graded import GradedContext, GradedPoly, differential_name

__all__ = ["Token", "tokenize", "ExpressionParser", "parse_expression", "format_expression"]

_TOKEN = re.compile(
    r"(?P<space>\s+)|(?P<number>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])"
)


class Token(NamedTuple):
    kind: str
    text: str
    column: int


END = "end"


def tokenize(text: str, line: int = 1, column: int = 1) -> Iterator[Token]:
    """Tokens of ``text``; ``column`` is the column of its first character."""
    position = 0
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            raise ExpressionSyntaxError(
                f"unexpected character {text[position]!r}", text, column + position, line
            )
        kind = match.lastgroup
        if kind != "space":
            yield Token(kind, match.group(), column + position)  # type: ignore
        position = match.end()
    yield Token(END, "", column + len(text))


class ExpressionParser:
    __slots__ = "context", "text", "line", "tokens", "position"

    def __init__(self, context: GradedContext, text: str, line: int = 1, column: int = 1) -> None:
        self.context = context
        self.text = text
        self.line = line
        self.tokens: List[Token] = list(tokenize(text, line, column))
        self.position = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.position]

    def _error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, self.text, token.column, self.line)

    def _advance(self) -> Token:
        token = self.current
        if token.kind != END:
            self.position += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.position += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            found = self.current.text or "end of input"
            raise self._error(f"expected {text!r}, found {found!r}")

    def parse(self) -> GradedPoly:
        result = self.expression()
        if self.current.kind != END:
            raise self._error(f"unexpected {self.current.text!r}")
        return result

    def expression(self) -> GradedPoly:
        negate = self._accept("-")
        result = self.term()
        if negate:
            result = -result
        while True:
            if self._accept("+"):
                result = result + self.term()
            elif self._accept("-"):
                result = result - self.term()
            else:
                return result

    def term(self) -> GradedPoly:
        result = self.factor()
        while self._accept("*"):
            result = result * self.factor()
        return result

    def factor(self) -> GradedPoly:
        base = self.atom()
        if self._accept("^"):
            token = self._advance()
            if token.kind != "number":
                raise self._error("expected a natural exponent", token)
            return base ** int(token.text)
        return base

    def atom(self) -> GradedPoly:
        token = self._advance()
        if token.kind == "number":
            value = Fraction(int(token.text))
            if self._accept("/"):
                denominator = self._advance()
                if denominator.kind != "number" or int(denominator.text) == 0:
                    raise self._error("expected a nonzero denominator", denominator)
                value /= int(denominator.text)
            return GradedPoly.constant(self.context, value)
        if token.kind == "ident":
            if token.text == "d" and self.current.text == "(" and "d" not in self.context:
                self._expect("(")
                name = self._advance()
                if name.kind != "ident":
                    raise self._error("expected a generator name", name)
                self._expect(")")
                return self._generator(differential_name(name.text), name)
            return self._generator(token.text, token)
        if token.kind == "op" and token.text == "(":
            result = self.expression()
            self._expect(")")
            return result
        raise self._error(f"unexpected {token.text or 'end of input'!r}", token)

    def _generator(self, name: str, token: Token) -> GradedPoly:
        if name not in self.context:
            raise UnknownGenerator(name, self.context)
        return GradedPoly.generator(self.context, name)


def parse_expression(
    text: str, context: GradedContext, line: int = 1, column: int = 1
) -> GradedPoly:
    """Normalized polynomial denoted by ``text``.

    Raises ExpressionSyntaxError with the line and column of the offending
    token, and UnknownGenerator for names the context does not declare.
    """
    return ExpressionParser(context, text, line, column).parse()


def format_expression(p: GradedPoly) -> str:
    return str(p)
