"""
HeckMort - Identity Parser
Tokenizer, recursive-descent parser and canonical printer for the identity language.

    equation := [label ':'] expr '==' expr
    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | factor
    factor   := atom ['^' integer]
    atom     := literal | call | '(' expr ')'
    literal  := ['-'] rational ['*' 'q' ['^' exponent]] | ['-'] 'q' ['^' exponent]
    call     := name '(' group (';' group)* ')'      group := arg (',' arg)*

Rationals are written without spaces (3/4); in exponents q^1/2 means q^(1/2). A leading
minus binds into a literal, so -q^2 is the monomial with coefficient -1. '#' starts a
comment.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from engine_errors import ParseError, Position

NO_POSITION: Position = (0, 0)


class Token(NamedTuple):
    kind: str
    value: str
    where: Position


_TOKENS = {
    "comment": r"#[^\n]*",
    "newline": r"\n",
    "skip": r"[ \t\r]+",
    "number": r"\d+(?:/\d+)?",
    "name": r"[A-Za-z_][A-Za-z0-9_]*",
    "eq": r"==",
    "lpar": r"\(",
    "rpar": r"\)",
    "plus": r"\+",
    "minus": r"-",
    "mul": r"\*",
    "div": r"/",
    "pow": r"\^",
    "comma": r",",
    "semi": r";",
    "colon": r":",
    "error": r".",
}
_REGEX = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in _TOKENS.items()))

_DESCRIBE = {
    "number": "number",
    "name": "name",
    "eq": "'=='",
    "lpar": "'('",
    "rpar": "')'",
    "plus": "'+'",
    "minus": "'-'",
    "mul": "'*'",
    "div": "'/'",
    "pow": "'^'",
    "comma": "','",
    "semi": "';'",
    "colon": "':'",
    "end": "end of input",
}


def tokenize(source: str, first_line: int = 1) -> List[Token]:
    tokens = []
    line, line_start = first_line, 0
    for mo in _REGEX.finditer(source):
        kind = str(mo.lastgroup)
        where = (line, mo.start() - line_start + 1)
        if kind == "newline":
            line += 1
            line_start = mo.end()
            continue
        if kind in ("skip", "comment"):
            continue
        if kind == "error":
            raise ParseError(f"Unexpected character {mo.group()!r}", where)
        tokens.append(Token(kind, mo.group(), where))
    tokens.append(Token("end", "", (line, len(source) - line_start + 1)))
    return tokens


# AST


@dataclass(frozen=True)
class Number:
    value: Fraction
    position: Position = field(default=NO_POSITION, compare=False)


@dataclass(frozen=True)
class Monomial:
    coeff: Fraction
    exp: Fraction
    position: Position = field(default=NO_POSITION, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    position: Position = field(default=NO_POSITION, compare=False)


@dataclass(frozen=True)
class BinaryOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"
    position: Position = field(default=NO_POSITION, compare=False)


@dataclass(frozen=True)
class Power:
    base: "Node"
    exponent: int
    position: Position = field(default=NO_POSITION, compare=False)


Argument = Union[int, Monomial, str]


@dataclass(frozen=True)
class Call:
    name: str
    groups: Tuple[Tuple[Argument, ...], ...]
    position: Position = field(default=NO_POSITION, compare=False)


Node = Union[Number, Monomial, Neg, BinaryOp, Power, Call]


@dataclass(frozen=True)
class Equation:
    lhs: Node
    rhs: Node
    label: Optional[str] = None
    position: Position = field(default=NO_POSITION, compare=False)


def Add(left: Node, right: Node) -> BinaryOp:
    return BinaryOp("+", left, right)


def Subtract(left: Node, right: Node) -> BinaryOp:
    return BinaryOp("-", left, right)


def Multiply(left: Node, right: Node) -> BinaryOp:
    return BinaryOp("*", left, right)


def Divide(left: Node, right: Node) -> BinaryOp:
    return BinaryOp("/", left, right)


# Call signatures: one tuple of argument kinds per ';'-separated group
SIGNATURES: Dict[str, Tuple[Tuple[str, ...], ...]] = {
    "J": (("int", "int"),),
    "Jbar": (("int", "int"),),
    "Jm": (("int",),),
    "j": (("mono",), ("mono",)),
    "AL": (("mono",), ("mono",), ("mono",)),
    "f": (("int", "int", "int"), ("mono", "mono")),
    "gsum": (("int", "int", "int"), ("mono", "mono")),
    "thetaNP": (("int", "int"), ("mono", "mono")),
    "guniv": (("mono",), ("mono",)),
    "builtin": (("name",),),
}


class Parser:
    """Recursive-descent parser over one token list"""

    def __init__(self, source: str, first_line: int = 1):
        self.tokens = tokenize(source, first_line)
        self.index = 0

    @property
    def token(self) -> Token:
        return self.tokens[self.index]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.token
        if token.kind != "end":
            self.index += 1
        return token

    def fail(self, expected: Sequence[str]) -> ParseError:
        token = self.token
        found = "end of input" if token.kind == "end" else repr(token.value)
        return ParseError(f"Unexpected {found}", token.where, expected)

    def expect(self, kind: str) -> Token:
        if self.token.kind != kind:
            raise self.fail([_DESCRIBE[kind]])
        return self.advance()

    # entry points

    def parse_source(self) -> Union[Equation, Node]:
        start = self.token.where
        label = None
        if self.token.kind == "name" and self.peek().kind == "colon":
            label = self.advance().value
            self.advance()
        lhs = self.expression()
        if self.token.kind == "eq":
            self.advance()
            rhs = self.expression()
            self.expect("end")
            return Equation(lhs, rhs, label, start)
        if label is not None:
            raise self.fail(["'=='"])
        if self.token.kind != "end":
            raise self.fail(["'=='", "'+'", "'-'", "'*'", "'/'", "'^'", "end of input"])
        return lhs

    # expressions

    def expression(self) -> Node:
        left = self.term()
        while self.token.kind in ("plus", "minus"):
            op = self.advance()
            left = BinaryOp(op.value, left, self.term(), op.where)
        return left

    def term(self) -> Node:
        left = self.unary()
        while self.token.kind in ("mul", "div"):
            op = self.advance()
            left = BinaryOp(op.value, left, self.unary(), op.where)
        return left

    def unary(self) -> Node:
        token = self.token
        if token.kind == "minus" and not self._literal_follows(1):
            self.advance()
            return Neg(self.unary(), token.where)
        return self.factor()

    def factor(self) -> Node:
        base = self.atom()
        if self.token.kind == "pow":
            where = self.advance().where
            return Power(base, self.integer_exponent(), where)
        return base

    def atom(self) -> Node:
        token = self.token
        if self._literal_follows(0):
            return self.literal()
        if token.kind == "name":
            return self.call()
        if token.kind == "lpar":
            self.advance()
            inner = self.expression()
            self.expect("rpar")
            return inner
        raise self.fail(["number", "'q'", "name", "'('", "'-'"])

    # literals

    def _literal_follows(self, offset: int) -> bool:
        """Whether a literal starts at the token offset, possibly after one minus"""
        token = self.peek(offset) if offset else self.token
        if token.kind == "minus" and offset == 0:
            token = self.peek(1)
        return token.kind == "number" or (token.kind == "name" and token.value == "q")

    def _rational(self) -> Fraction:
        return Fraction(self.expect("number").value)

    def literal(self) -> Union[Number, Monomial]:
        start = self.token.where
        sign = 1
        if self.token.kind == "minus":
            self.advance()
            sign = -1
        if self.token.kind == "number":
            value = sign * self._rational()
            if self.token.kind == "mul" and self.peek().kind == "name" and self.peek().value == "q":
                self.advance()
                return Monomial(value, self._q_power(), start)
            return Number(value, start)
        return Monomial(Fraction(sign), self._q_power(), start)

    def _q_power(self) -> Fraction:
        token = self.expect("name")
        if token.value != "q":
            raise ParseError(f"Expected 'q', found {token.value!r}", token.where, ["'q'"])
        if self.token.kind != "pow":
            return Fraction(1)
        self.advance()
        return self.exponent()

    def exponent(self) -> Fraction:
        if self.token.kind == "lpar":
            self.advance()
            value = self._signed_rational()
            self.expect("rpar")
            return value
        return self._signed_rational()

    def _signed_rational(self) -> Fraction:
        sign = 1
        if self.token.kind == "minus":
            self.advance()
            sign = -1
        if self.token.kind != "number":
            raise self.fail(["number", "'-'"])
        return sign * self._rational()

    def integer_exponent(self) -> int:
        token = self.token
        value = self.exponent()
        if value.denominator != 1:
            raise ParseError("Series powers must be integers", token.where, ["integer"])
        return value.numerator

    # calls

    def call(self) -> Call:
        token = self.advance()
        signature = SIGNATURES.get(token.value)
        if signature is None:
            raise ParseError(
                f"Unknown function {token.value!r}", token.where, sorted(SIGNATURES)
            )
        self.expect("lpar")
        groups: List[Tuple[Argument, ...]] = []
        for group_index, kinds in enumerate(signature):
            if group_index:
                self.expect("semi")
            args: List[Argument] = []
            for arg_index, kind in enumerate(kinds):
                if arg_index:
                    self.expect("comma")
                args.append(self.argument(kind))
            groups.append(tuple(args))
        if self.token.kind in ("comma", "semi"):
            raise ParseError(
                f"{token.value} takes {self._describe_signature(signature)}",
                self.token.where,
                ["')'"],
            )
        self.expect("rpar")
        return Call(token.value, tuple(groups), token.where)

    @staticmethod
    def _describe_signature(signature: Tuple[Tuple[str, ...], ...]) -> str:
        return "; ".join(", ".join(kinds) for kinds in signature)

    def argument(self, kind: str) -> Argument:
        if kind == "int":
            value = self._signed_rational()
            if value.denominator != 1:
                raise ParseError("Expected an integer argument", self.token.where, ["integer"])
            return value.numerator
        if kind == "name":
            return self.expect("name").value
        return self.monomial_argument()

    def monomial_argument(self) -> Monomial:
        start = self.token.where
        if not self._literal_follows(0):
            raise self.fail(["number", "'q'", "'-'"])
        node = self.literal()
        if isinstance(node, Number):
            # a bare constant c is the monomial c*q^0
            if node.value == 0:
                raise ParseError("Monomial coefficients must be nonzero", start, ["nonzero number"])
            return Monomial(node.value, Fraction(0), start)
        if node.coeff == 0:
            raise ParseError("Monomial coefficients must be nonzero", start, ["nonzero number"])
        return node


def parse(source: str, first_line: int = 1) -> Union[Equation, Node]:
    """An expression, or an equation when '==' is present"""
    return Parser(source, first_line).parse_source()


def parse_expression(source: str) -> Node:
    node = parse(source)
    if isinstance(node, Equation):
        raise ParseError("Expected an expression, found an equation", node.position, [])
    return node


def parse_monomial(source: str) -> Monomial:
    """A single monomial argument such as -q^(1/2) or 3*q^2"""
    parser = Parser(source)
    node = parser.monomial_argument()
    parser.expect("end")
    return node


def parse_file(text: str) -> List[Equation]:
    """One equation per non-blank line; '#' comments and blank lines are skipped"""
    equations = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.split("#", 1)[0].strip():
            continue
        node = parse(line, number)
        if not isinstance(node, Equation):
            position = getattr(node, "position", (number, 1))
            raise ParseError("Verification lines must be equations", position, ["'=='"])
        equations.append(node)
    return equations


# Canonical printer


def _fraction(value: Fraction) -> str:
    return str(value)


def format_monomial(m: Monomial) -> str:
    """Argument form: c, q^(e), -q^(e) or c*q^(e)"""
    if m.exp == 0:
        return _fraction(m.coeff)
    power = f"q^({_fraction(m.exp)})"
    if m.coeff == 1:
        return power
    if m.coeff == -1:
        return f"-{power}"
    return f"{_fraction(m.coeff)}*{power}"


def _format_argument(arg: Argument) -> str:
    if isinstance(arg, Monomial):
        return format_monomial(arg)
    return str(arg)


def to_source(node: Union[Equation, Node]) -> str:
    """Fully parenthesized text that parses back to an equal tree"""
    if isinstance(node, Equation):
        text = f"{to_source(node.lhs)} == {to_source(node.rhs)}"
        return f"{node.label}: {text}" if node.label else text
    if isinstance(node, Number):
        return f"({_fraction(node.value)})" if node.value < 0 else _fraction(node.value)
    if isinstance(node, Monomial):
        # always wrapped, so a preceding "c *" cannot merge into the literal
        if node.coeff == 1:
            prefix = ""
        elif node.coeff == -1:
            prefix = "-"
        else:
            prefix = f"{_fraction(node.coeff)}*"
        return f"({prefix}q^({_fraction(node.exp)}))"
    if isinstance(node, Neg):
        return f"(-({to_source(node.operand)}))"
    if isinstance(node, BinaryOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Power):
        return f"({to_source(node.base)}^({node.exponent}))"
    if isinstance(node, Call):
        groups = "; ".join(
            ", ".join(_format_argument(arg) for arg in group) for group in node.groups
        )
        return f"{node.name}({groups})"
    raise TypeError(f"Not an identity AST node: {node!r}")


def walk(node: Node) -> Iterator[Node]:
    """Pre-order traversal"""
    yield node
    if isinstance(node, Neg):
        yield from walk(node.operand)
    elif isinstance(node, BinaryOp):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Power):
        yield from walk(node.base)
