"""Parser for surd expressions such as ``41/3 - 11*sqrt(13)/3``.

Grammar::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("-" | "+") unary | atom
    atom  := INTEGER | "sqrt" "(" expr ")" | "(" expr ")"

The argument of ``sqrt`` must evaluate to a non-negative rational q with q or
q/m a rational square, so every value stays in Q or Q(sqrt(m)).
"""

import re
from fractions import Fraction

from .arith import QQ, QuadElem, as_rat, is_square_rat
from .exceptions import SurdParseError, ThetaCongDomainError

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|([-+*/(),]))")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise SurdParseError(f"Unexpected character at {pos} in {text!r}")
        tokens.append(match.group(match.lastindex))
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, field):
        self.text = text
        self.field = field
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        token = self.peek()
        if token is None or (expected is not None and token != expected):
            want = expected or "a token"
            raise SurdParseError(f"Expected {want} at token {self.pos} in {self.text!r}")
        self.pos += 1
        return token

    def parse(self):
        if not self.tokens:
            raise SurdParseError("Empty expression")
        value = self.expr()
        if self.peek() is not None:
            raise SurdParseError(f"Trailing input {self.peek()!r} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not rhs:
                    raise SurdParseError(f"Division by zero in {self.text!r}")
                value = value / rhs
        return value

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        if self.peek() == "+":
            self.take()
            return self.unary()
        return self.atom()

    def atom(self):
        token = self.peek()
        if token is None:
            raise SurdParseError(f"Unexpected end of {self.text!r}")
        if token.isdigit():
            self.take()
            return self.field.coerce(Fraction(int(token)))
        if token == "sqrt":
            self.take()
            self.take("(")
            arg = self.expr()
            self.take(")")
            return self.sqrt(arg)
        if token == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        raise SurdParseError(f"Unexpected {token!r} in {self.text!r}")

    def sqrt(self, arg):
        try:
            q = as_rat(arg)
        except ThetaCongDomainError:
            raise SurdParseError(f"sqrt of an irrational value in {self.text!r}") from None
        if q < 0:
            raise SurdParseError(f"sqrt of a negative value in {self.text!r}")
        root = is_square_rat(q)
        if root is not None:
            return self.field.coerce(root)
        if self.field is not QQ:
            root = is_square_rat(q / self.field.m)
            if root is not None:
                return self.field(0, root)
        raise SurdParseError(f"sqrt({q}) does not lie in {self.field}")


def parse_surd(text: str, field=QQ):
    """Parses one expression into a Fraction (over Q) or a QuadElem."""
    return _Parser(str(text), field).parse()


def parse_sides(text: str, field=QQ) -> tuple:
    """Parses "U,V,W" into three field elements."""
    parts = _split_top_level(str(text))
    if len(parts) != 3:
        raise SurdParseError(f"Expected three comma-separated sides, got {text!r}")
    return tuple(parse_surd(part, field) for part in parts)


def _split_top_level(text: str) -> list[str]:
    parts, depth, current = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    parts.append("".join(current))
    return parts


def format_scalar(value) -> str:
    """Inverse of parse_surd for display."""
    if isinstance(value, QuadElem):
        return str(value)
    return str(as_rat(value))


def format_sides(sides) -> str:
    """Inverse of parse_sides: "U, V, W" in the surd grammar."""
    return ", ".join(format_scalar(side) for side in sides)
