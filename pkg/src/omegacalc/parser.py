"""Tokenizer, AST, recursive-descent parser and unparser for the CLI grammar.

Grammar (EBNF, whitespace-insensitive):

    expr      = term { ("+" | "-") term } ;
    term      = unary { ("*" | "/") unary } ;
    unary     = "-" unary | power ;
    power     = postfix [ "^" exponent ] ;
    exponent  = INT | "(" [ "-" ] INT [ "/" INT ] ")" ;
    postfix   = primary [ "(" expr ")" ] ;
    primary   = INT | "o" | "S" | "eps" | "sqrt" "(" expr ")"
              | opform | funcref | "(" expr ")" ;
    funcref   = NAME | "poly" "[" expr { "," expr } "]" ;
    opform    = ("D" | "d") "^" INT "[" func "]"
              | "int" [ "^" INT ] "[" func [ ";" expr { "," expr } ] "]"
              | "solve" "[" func "=" expr ";" signed_rational "]" ;
    func      = funcref | "int" ... ;

Precedence: ^  >  unary -  >  * /  >  + -, all left-associative except
^, whose exponent must be an integer or a parenthesized rational
literal.  Offsets in errors are 0-based byte offsets into the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

class ParseError(Exception):
    def __init__(self, offset: int, expected: tuple[str, ...], found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(
            f"parse error at offset {offset}: expected "
            f"{' or '.join(expected)}; found {found}"
        )


# -- AST --------------------------------------------------------------------


@dataclass(frozen=True)
class Lit:
    value: Fraction


@dataclass(frozen=True)
class Sym:
    name: str  # "o", "S" or "eps"


@dataclass(frozen=True)
class FuncRef:
    name: str


@dataclass(frozen=True)
class PolyFunc:
    coeffs: tuple


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: Fraction


@dataclass(frozen=True)
class Apply:
    func: object
    arg: object


@dataclass(frozen=True)
class DiffForm:
    kind: str  # "D" (finite difference) or "d" (derivative differential)
    order: int
    func: object


@dataclass(frozen=True)
class IntForm:
    order: int
    func: object
    inits: tuple


@dataclass(frozen=True)
class SolveForm:
    func: object
    target: object
    seed: Fraction


# -- tokens -----------------------------------------------------------------

_PUNCT = "+-*/^()[];,="


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "name", "punct", "end"
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("name", text[i:j], i))
            i = j
            continue
        if ch in _PUNCT:
            tokens.append(_Token("punct", ch, i))
            i += 1
            continue
        raise ParseError(i, ("a token",), repr(ch))
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def fail(self, *expected: str):
        t = self.peek()
        found = f"'{t.text}'" if t.kind != "end" else "end of input"
        raise ParseError(t.offset, expected, found)

    def expect(self, text: str) -> _Token:
        t = self.peek()
        if t.kind == "punct" and t.text == text:
            return self.next()
        self.fail(f"'{text}'")

    def accept(self, text: str) -> bool:
        t = self.peek()
        if t.kind == "punct" and t.text == text:
            self.next()
            return True
        return False

    # grammar rules ---------------------------------------------------

    def parse_expr(self):
        node = self.parse_term()
        while True:
            t = self.peek()
            if t.kind == "punct" and t.text in "+-":
                self.next()
                node = BinOp(t.text, node, self.parse_term())
            else:
                return node

    def parse_term(self):
        node = self.parse_unary()
        while True:
            t = self.peek()
            if t.kind == "punct" and t.text in "*/":
                self.next()
                node = BinOp(t.text, node, self.parse_unary())
            else:
                return node

    def parse_unary(self):
        if self.accept("-"):
            return Neg(self.parse_unary())
        return self.parse_power()

    def parse_power(self):
        node = self.parse_postfix()
        if self.accept("^"):
            return Pow(node, self.parse_exponent())
        return node

    def parse_exponent(self) -> Fraction:
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Fraction(int(t.text))
        if t.kind == "punct" and t.text == "(":
            self.next()
            value = self.parse_signed_rational()
            self.expect(")")
            return value
        self.fail("integer", "'('")

    def parse_signed_rational(self) -> Fraction:
        negative = self.accept("-")
        t = self.peek()
        if t.kind != "int":
            self.fail("integer")
        self.next()
        num = int(t.text)
        den = 1
        if self.accept("/"):
            d = self.peek()
            if d.kind != "int":
                self.fail("integer")
            self.next()
            den = int(d.text)
        value = Fraction(num, den)
        return -value if negative else value

    def parse_postfix(self):
        node = self.parse_primary()
        if isinstance(node, (FuncRef, PolyFunc, DiffForm, IntForm)) and self.accept("("):
            arg = self.parse_expr()
            self.expect(")")
            return Apply(node, arg)
        return node

    def parse_primary(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Lit(Fraction(int(t.text)))
        if t.kind == "punct" and t.text == "(":
            self.next()
            node = self.parse_expr()
            self.expect(")")
            return node
        if t.kind == "name":
            return self.parse_name()
        self.fail("integer", "name", "'('", "'-'")

    def parse_name(self):
        t = self.next()
        name = t.text
        if name in ("o", "S", "eps"):
            return Sym(name)
        if name == "sqrt":
            self.expect("(")
            node = self.parse_expr()
            self.expect(")")
            return Pow(node, Fraction(1, 2))
        if name in ("D", "d"):
            self.expect("^")
            p = self.parse_int()
            self.expect("[")
            func = self.parse_func()
            self.expect("]")
            return DiffForm(name, p, func)
        if name == "int":
            p = 1
            if self.accept("^"):
                p = self.parse_int()
            self.expect("[")
            func = self.parse_func()
            inits: list = []
            if self.accept(";"):
                inits.append(self.parse_expr())
                while self.accept(","):
                    inits.append(self.parse_expr())
            self.expect("]")
            return IntForm(p, func, tuple(inits))
        if name == "solve":
            self.expect("[")
            func = self.parse_func()
            self.expect("=")
            target = self.parse_expr()
            self.expect(";")
            seed = self.parse_signed_rational()
            self.expect("]")
            return SolveForm(func, target, seed)
        if name == "poly":
            return self.parse_poly()
        return FuncRef(name)

    def parse_int(self) -> int:
        t = self.peek()
        if t.kind != "int":
            self.fail("integer")
        self.next()
        return int(t.text)

    def parse_poly(self):
        self.expect("[")
        coeffs = [self.parse_expr()]
        while self.accept(","):
            coeffs.append(self.parse_expr())
        self.expect("]")
        return PolyFunc(tuple(coeffs))

    def parse_func(self):
        t = self.peek()
        if t.kind != "name":
            self.fail("function name")
        if t.text in ("o", "S", "eps", "D", "d", "solve", "sqrt"):
            self.fail("function name")
        node = self.parse_name()
        if not isinstance(node, (FuncRef, PolyFunc, IntForm)):
            self.fail("function name")
        return node


def parse(text: str):
    """Parse one expression; trailing input is an error."""
    p = _Parser(text)
    node = p.parse_expr()
    if p.peek().kind != "end":
        p.fail("end of input")
    return node


# -- unparser ---------------------------------------------------------------

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_UNARY, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _format_exponent(value: Fraction) -> str:
    if value.denominator == 1 and value >= 0:
        return f"^{value.numerator}"
    return f"^({value})"


def unparse(node) -> str:
    """Canonical text whose parse equals the original AST."""
    return _unparse(node, 0)


def _unparse(node, level: int) -> str:
    text, own = _render(node)
    if own < level:
        return f"({text})"
    return text


def _render(node) -> tuple[str, int]:
    if isinstance(node, Lit):
        return str(node.value), _LEVEL_ATOM
    if isinstance(node, Sym):
        return node.name, _LEVEL_ATOM
    if isinstance(node, FuncRef):
        return node.name, _LEVEL_ATOM
    if isinstance(node, PolyFunc):
        inner = ", ".join(_unparse(c, 0) for c in node.coeffs)
        return f"poly[{inner}]", _LEVEL_ATOM
    if isinstance(node, Neg):
        return f"-{_unparse(node.operand, _LEVEL_UNARY)}", _LEVEL_UNARY
    if isinstance(node, BinOp):
        if node.op in "+-":
            lhs = _unparse(node.left, _LEVEL_ADD)
            rhs = _unparse(node.right, _LEVEL_MUL)
            return f"{lhs} {node.op} {rhs}", _LEVEL_ADD
        lhs = _unparse(node.left, _LEVEL_MUL)
        rhs = _unparse(node.right, _LEVEL_UNARY)
        return f"{lhs}{node.op}{rhs}", _LEVEL_MUL
    if isinstance(node, Pow):
        base = _unparse(node.base, _LEVEL_ATOM)
        return f"{base}{_format_exponent(node.exponent)}", _LEVEL_POW
    if isinstance(node, Apply):
        return f"{_unparse(node.func, _LEVEL_ATOM)}({_unparse(node.arg, 0)})", _LEVEL_ATOM
    if isinstance(node, DiffForm):
        return f"{node.kind}^{node.order}[{unparse(node.func)}]", _LEVEL_ATOM
    if isinstance(node, IntForm):
        head = "int" if node.order == 1 else f"int^{node.order}"
        if node.inits:
            inner = "; " + ", ".join(_unparse(c, 0) for c in node.inits)
        else:
            inner = ""
        return f"{head}[{unparse(node.func)}{inner}]", _LEVEL_ATOM
    if isinstance(node, SolveForm):
        return (
            f"solve[{unparse(node.func)} = {unparse(node.target)}; {node.seed}]",
            _LEVEL_ATOM,
        )
    raise TypeError(f"not an expression node: {node!r}")
