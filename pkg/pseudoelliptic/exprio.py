"""
Text in and out: the integrand grammar, closed forms, and printing.

Grammar (one free variable, no implicit multiplication):

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := ('+'|'-') factor | base ('^' rational)?
    base   := number | symbol | '(' expr ')' | sqrt(expr) | cbrt(expr)
            | log(expr) | atan(expr)
    rational := integer | integer '/' integer | '(' ['-'] integer ['/' integer] ')'

``**`` is accepted for ``^``. log and atan only make sense in closed forms.
"""
import logging
import re
from collections import namedtuple
from dataclasses import dataclass
from enum import Enum

import sympy
from sympy import Poly, QQ, Rational, Symbol
from sympy.polys.polyerrors import BasePolynomialError

from .errors import (
    Ambiguous,
    NotARadicalIntegrand,
    NotSquarefree,
    ParseError,
    UnsupportedExponent,
    UnsupportedExpression,
    UnsupportedIntegrand,
    UnsupportedRadicand,
)
from .fields import FieldTower
from .funcfield import RadicalFunctionField
from .ratint import AntiderivativeExpr, AtanTerm, LogTerm
from .rational import RationalFunction, format_polynomial

logger = logging.getLogger(__name__)

SUPPORTED_EXPONENTS = (Rational(1, 2), Rational(1, 3), Rational(2, 3))
FUNCTIONS = ("sqrt", "cbrt", "log", "atan")

TOKENS = re.compile(
    "|".join([
        r"(?P<ws>\s+)",
        r"(?P<ident>[A-Za-z_][A-Za-z0-9_]*)",
        r"(?P<number>[0-9]+)",
        r"(?P<oper>\*\*|\^|\+|\-|\*|/|\(|\))",
    ])
)


class TokenType(Enum):
    END = 0
    IDENT = 1
    NUMBER = 2
    OPER = 3


Token = namedtuple("Token", "type value pos")


class TokenStream:
    """A consumable stream of input tokens with one token of lookahead"""

    def __init__(self, text):
        self.input = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = TOKENS.match(text, pos)
            if not m:
                self.index = len(self.tokens)
                self.tokens.append(Token(TokenType.END, None, pos))
                self.syntax("Unrecognized token")
            if value := m.group("ident"):
                self.tokens.append(Token(TokenType.IDENT, value, pos))
            elif value := m.group("number"):
                self.tokens.append(Token(TokenType.NUMBER, value, pos))
            elif value := m.group("oper"):
                self.tokens.append(Token(TokenType.OPER, "^" if value == "**" else value, pos))
            pos = m.end()
        self.tokens.append(Token(TokenType.END, None, len(text)))
        self.index = 0

    def next(self):
        if self.index < len(self.tokens) - 1:
            self.index += 1

    def peek(self):
        return self.tokens[min(self.index + 1, len(self.tokens) - 1)]

    @property
    def token(self):
        return self.tokens[self.index]

    @property
    def token_type(self):
        return self.token.type

    @property
    def token_value(self):
        return self.token.value

    @property
    def position(self):
        return self.token.pos

    def last_end(self):
        """End offset of the previously consumed token"""
        previous = self.tokens[self.index - 1]
        return previous.pos + len(previous.value)

    def is_oper(self, value):
        return self.token_type == TokenType.OPER and self.token_value == value

    def expect(self, value):
        if not self.is_oper(value):
            self.syntax(f"'{value}' expected")
        self.next()

    def syntax(self, msg):
        """Raise a ParseError pointing at the current token."""
        pos = self.token.pos
        raise ParseError(f"{msg} at column {pos + 1}:\n{self.input}\n{' ' * pos}^")


# syntax tree

@dataclass(frozen=True)
class Num:
    value: Rational


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class UnaryOp:
    op: str
    arg: object


@dataclass(frozen=True)
class Power:
    base: object
    exponent: Rational
    base_text: str = ""


@dataclass(frozen=True)
class Call:
    name: str
    arg: object


OpStackEntry = namedtuple("OpStackEntry", "op precedence")


def parse_expr(tokstream):
    """Parse a complete expression."""
    if tokstream.token_type == TokenType.END:
        tokstream.syntax("Expression expected")
    result = parse_binop(tokstream)
    if tokstream.token_type != TokenType.END:
        tokstream.syntax("Unrecognized token")
    return result


def parse_binop(tokstream):
    """Operator precedence parser for + - * /"""
    opstack = [parse_unop(tokstream)]

    def reduce(precedence):
        while len(opstack) > 2 and opstack[-2].precedence >= precedence:
            opstack[-3:] = [BinaryOp(opstack[-2].op, opstack[-3], opstack[-1])]

    while tokstream.token_type == TokenType.OPER:
        value = tokstream.token_value
        if value in ("*", "/"):
            reduce(4)
            opstack.append(OpStackEntry(value, 4))
        elif value in ("+", "-"):
            reduce(3)
            opstack.append(OpStackEntry(value, 3))
        else:
            break
        tokstream.next()
        if tokstream.token_type == TokenType.END:
            tokstream.syntax("Expression expected after operator")
        opstack.append(parse_unop(tokstream))

    reduce(0)
    return opstack[0]


def parse_unop(tokstream):
    if tokstream.is_oper("+") or tokstream.is_oper("-"):
        op = tokstream.token_value
        tokstream.next()
        return UnaryOp(op, parse_unop(tokstream))
    return parse_power(tokstream)


def parse_power(tokstream):
    start = tokstream.position
    base = parse_primary(tokstream)
    if not tokstream.is_oper("^"):
        return base
    base_text = _strip_parens(tokstream.input[start:tokstream.last_end()])
    tokstream.next()
    exponent = parse_exponent(tokstream)
    if isinstance(base, Power) and base.exponent.q != 1 and exponent.q == 1:
        return Power(base.base, base.exponent * exponent, base.base_text)
    return Power(base, exponent, base_text)


def parse_exponent(tokstream):
    """A literal integer or rational exponent"""
    if tokstream.is_oper("("):
        tokstream.next()
        value = _signed_rational(tokstream)
        tokstream.expect(")")
        return value
    return _signed_rational(tokstream)


def _signed_rational(tokstream):
    sign = 1
    if tokstream.is_oper("-") or tokstream.is_oper("+"):
        sign = -1 if tokstream.token_value == "-" else 1
        tokstream.next()
    numerator = _integer(tokstream)
    denominator = 1
    if tokstream.is_oper("/") and tokstream.peek().type == TokenType.NUMBER:
        tokstream.next()
        denominator = _integer(tokstream)
        if denominator == 0:
            tokstream.syntax("Zero denominator in exponent")
    return sign * Rational(numerator, denominator)


def _integer(tokstream):
    if tokstream.token_type != TokenType.NUMBER:
        tokstream.syntax("Integer exponent expected")
    value = int(tokstream.token_value)
    tokstream.next()
    return value


def parse_primary(tokstream):
    token = tokstream.token
    if token.type == TokenType.NUMBER:
        tokstream.next()
        return Num(Rational(int(token.value)))
    if token.type == TokenType.IDENT:
        tokstream.next()
        if token.value not in FUNCTIONS:
            return Var(token.value)
        if not tokstream.is_oper("("):
            tokstream.syntax(f"'(' expected after {token.value}")
        tokstream.next()
        start = tokstream.position
        arg = parse_binop(tokstream)
        text = tokstream.input[start:tokstream.last_end()]
        tokstream.expect(")")
        match token.value:
            case "sqrt":
                return Power(arg, Rational(1, 2), _strip_parens(text))
            case "cbrt":
                return Power(arg, Rational(1, 3), _strip_parens(text))
            case _:
                return Call(token.value, arg)
    if tokstream.is_oper("("):
        tokstream.next()
        expr = parse_binop(tokstream)
        tokstream.expect(")")
        return expr
    tokstream.syntax("Expression expected")


def _strip_parens(text):
    text = "".join(text.split())
    while text.startswith("(") and text.endswith(")") and _balanced(text[1:-1]):
        text = text[1:-1]
    return text


def _balanced(text):
    depth = 0
    for ch in text:
        depth += {"(": 1, ")": -1}.get(ch, 0)
        if depth < 0:
            return False
    return depth == 0


def parse(text):
    return parse_expr(TokenStream(text))


# evaluation to sympy

def _check_var(node, var):
    if node.name != var.name:
        raise ParseError(f"unknown symbol {node.name!r} (the variable is {var.name})")


def to_sympy(node, var):
    """The sympy expression of a tree without log/atan calls"""
    match node:
        case Num(value):
            return value
        case Var():
            _check_var(node, var)
            return var
        case UnaryOp("-", arg):
            return -to_sympy(arg, var)
        case UnaryOp(_, arg):
            return to_sympy(arg, var)
        case BinaryOp("+", left, right):
            return to_sympy(left, var) + to_sympy(right, var)
        case BinaryOp("-", left, right):
            return to_sympy(left, var) - to_sympy(right, var)
        case BinaryOp("*", left, right):
            return to_sympy(left, var) * to_sympy(right, var)
        case BinaryOp("/", left, right):
            denominator = to_sympy(right, var)
            if denominator == 0:
                raise ParseError("division by zero")
            return to_sympy(left, var) / denominator
        case Power(base, exponent, _):
            return to_sympy(base, var) ** exponent
        case Call(name, _):
            raise UnsupportedIntegrand(f"{name}(...) is not allowed here")


def _mentions_var(node):
    match node:
        case Var():
            return True
        case Num():
            return False
        case UnaryOp(_, arg) | Call(_, arg):
            return _mentions_var(arg)
        case BinaryOp(_, left, right):
            return _mentions_var(left) or _mentions_var(right)
        case Power(base, _, _):
            return _mentions_var(base)


def _has_radical(node):
    match node:
        case Power(base, exponent, _):
            return (exponent.q != 1 and _mentions_var(base)) or _has_radical(base)
        case UnaryOp(_, arg) | Call(_, arg):
            return _has_radical(arg)
        case BinaryOp(_, left, right):
            return _has_radical(left) or _has_radical(right)
        case _:
            return False


def _factors(node, exponent=1):
    """Flatten products and quotients into (node, exponent) pairs"""
    match node:
        case BinaryOp("*", left, right):
            return _factors(left, exponent) + _factors(right, exponent)
        case BinaryOp("/", left, right):
            return _factors(left, exponent) + _factors(right, -exponent)
        case UnaryOp("-", arg):
            return [(Num(Rational(-1)), 1)] + _factors(arg, exponent)
        case UnaryOp(_, arg):
            return _factors(arg, exponent)
        case Power(base, power, _) if power.q == 1 and _has_radical(base):
            return _factors(base, exponent * int(power))
        case _:
            return [(node, exponent)]


def _terms(node, sign=1):
    """Flatten sums and differences into (node, sign) pairs"""
    match node:
        case BinaryOp("+", left, right):
            return _terms(left, sign) + _terms(right, sign)
        case BinaryOp("-", left, right):
            return _terms(left, sign) + _terms(right, -sign)
        case UnaryOp("-", arg):
            return _terms(arg, -sign)
        case UnaryOp(_, arg):
            return _terms(arg, sign)
        case _:
            return [(node, sign)]


# integrands

@dataclass(frozen=True, eq=False)
class IntegrandSpec:
    """``F(var) * R(var)^(-exponent)``"""

    F: RationalFunction
    R: Poly
    exponent: Rational
    var: Symbol
    radicand_text: str = ""

    @property
    def index(self):
        return self.exponent.q

    @property
    def radicand(self):
        return RationalFunction.from_polys(self.R, Poly(1, self.var))

    @property
    def radicand_display(self):
        return self.radicand_text or format_polynomial(self.R, FieldTower())

    def function_field(self):
        return RadicalFunctionField.for_spec(self)

    def element(self):
        """The integrand as an element of the function field"""
        return self.function_field().integrand(self.F, self.exponent)

    def with_F(self, F):
        return IntegrandSpec(F, self.R, self.exponent, self.var, self.radicand_text)

    def __eq__(self, other):
        if not isinstance(other, IntegrandSpec):
            return NotImplemented
        return (
            self.exponent == other.exponent
            and self.var == other.var
            and self.R == other.R
            and self.F == other.F
        )

    __hash__ = None

    def __str__(self):
        numerator = str(self.F)
        if any(op in numerator for op in (" ", "/")):
            numerator = f"({numerator})"
        p = self.exponent
        return f"{numerator}/({self.radicand_display})^({p.p}/{p.q})"


def _radicand_poly(expr, var, text):
    num, den = sympy.fraction(sympy.together(expr))
    try:
        if sympy.Poly(den, var).degree() > 0:
            raise UnsupportedRadicand(f"radicand {text} is not a polynomial")
        return Poly(sympy.expand(num / den), var, domain=QQ)
    except BasePolynomialError as e:
        raise UnsupportedRadicand(f"radicand {text} is not a rational polynomial: {e}")


def parse_integrand(text, var="t", exponent=None):
    """
    Split ``text`` into ``F * R^(-p)``.

    The radical factor is found syntactically: a power of a polynomial in
    the variable with a non-integer literal exponent. Integer parts of the
    exponent move into F.
    """
    var = Symbol(var) if isinstance(var, str) else var
    tree = parse(text)

    cofactor = []
    radicals = {}
    for node, power in _factors(tree):
        if isinstance(node, Power) and node.exponent.q != 1 and _mentions_var(node.base):
            if _has_radical(node.base):
                raise UnsupportedIntegrand(f"nested radical in {text}")
            base = sympy.expand(to_sympy(node.base, var))
            entry = radicals.setdefault(base, [node.base_text, Rational(0)])
            entry[1] += node.exponent * power
        elif _has_radical(node):
            raise UnsupportedIntegrand(f"{text} is not a rational function times a single radical power")
        else:
            cofactor.append(to_sympy(node, var) ** power)

    fractional = {}
    for base, (base_text, power) in radicals.items():
        if power.q == 1:
            cofactor.append(base ** power)
        else:
            fractional[base] = (base_text, power)
    if not fractional:
        raise NotARadicalIntegrand(f"{text} has no radical factor R({var})^(-p)")
    if len(fractional) > 1:
        bases = ", ".join(str(b) for b in fractional)
        raise Ambiguous(f"{text} has several radicands: {bases}")

    (base, (base_text, total)), = fractional.items()
    p = -total - sympy.floor(-total)
    shift = total + p
    if p not in SUPPORTED_EXPONENTS:
        raise UnsupportedExponent(f"exponent {-p} on {base_text} (supported: -1/2, -1/3, -2/3)")
    if exponent is not None and Rational(exponent) != p:
        raise UnsupportedExponent(f"{text} has exponent {-p}, not -{Rational(exponent)}")

    R = _radicand_poly(base, var, base_text)
    if R.degree() < 1:
        raise UnsupportedRadicand(f"radicand {base_text} is constant")
    if R.gcd(R.diff()).degree() > 0:
        raise NotSquarefree(f"radicand {base_text} has a repeated root")

    F_expr = sympy.Mul(*cofactor) * base ** int(shift)
    F = RationalFunction.from_expr(F_expr, var)
    spec = IntegrandSpec(F, R, p, var, base_text)
    logger.debug("parsed %r as F=%s, R=%s, p=%s", text, F, R.as_expr(), p)
    return spec


def parse_rational(text, var="t"):
    """A RationalFunction from text without radicals"""
    var = Symbol(var) if isinstance(var, str) else var
    tree = parse(text)
    if _has_radical(tree):
        raise UnsupportedIntegrand(f"{text} contains a radical of {var}")
    return RationalFunction.from_expr(to_sympy(tree, var), var)


# closed forms

def _constant(expr):
    return FieldTower.for_constants([expr]).element(expr)


def _radical_power(node, field, spec):
    base = sympy.expand(to_sympy(node.base, spec.var))
    if not base.has(spec.var):
        return field.constant(_constant(base ** node.exponent))
    k = node.exponent * field.index
    if k.q != 1:
        raise UnsupportedExpression(
            f"{node.base_text}^({node.exponent}) is not a power of the {field.index}-th root of the radicand")
    R = spec.R.as_expr()
    if sympy.expand(base - R) == 0:
        sign = 1
    elif field.index % 2 and sympy.expand(base + R) == 0:
        sign = (-1) ** int(k)
    else:
        raise UnsupportedExpression(f"radical of {node.base_text} is foreign to radicand {spec.radicand_display}")
    return field.monomial(int(k), sign)


def to_field(node, field, spec):
    """Algebraic tree as an element of K(t)[y]/(y^n - R)"""
    match node:
        case Num(value):
            return field.constant(value)
        case Var():
            _check_var(node, spec.var)
            return field.element([RationalFunction.variable(spec.var)])
        case UnaryOp("-", arg):
            return -to_field(arg, field, spec)
        case UnaryOp(_, arg):
            return to_field(arg, field, spec)
        case BinaryOp(op, left, right):
            a, b = to_field(left, field, spec), to_field(right, field, spec)
            match op:
                case "+":
                    return a + b
                case "-":
                    return a - b
                case "*":
                    return a * b
                case "/":
                    return a / b
        case Power(base, exponent, _) if exponent.q == 1:
            return to_field(base, field, spec) ** int(exponent)
        case Power():
            return _radical_power(node, field, spec)
        case Call(name, _):
            raise UnsupportedExpression(f"{name}(...) inside an algebraic term")


def parse_closed_form(text, spec):
    """
    An AntiderivativeExpr from text: algebraic terms plus constant multiples
    of log(...) and atan(...), with radicals limited to powers of R^(1/n).
    """
    tree = parse(text)
    field = spec.function_field()
    rational = field.zero()
    logs, atans = [], []
    for term, sign in _terms(tree):
        factors = _factors(term)
        calls = [(node, power) for node, power in factors if isinstance(node, Call)]
        if not calls:
            rational = rational + to_field(term, field, spec) * sign
            continue
        if len(calls) > 1 or calls[0][1] != 1:
            raise UnsupportedExpression(f"term {term} is not a constant times one log or atan")
        call = calls[0][0]
        constants = [(node, power) for node, power in factors if not isinstance(node, Call)]
        if any(_mentions_var(node) for node, _ in constants):
            raise UnsupportedExpression(f"{call.name}(...) has a non-constant coefficient")
        coefficient = sympy.Integer(sign)
        for node, power in constants:
            coefficient *= to_sympy(node, spec.var) ** power
        coefficient = _constant(sympy.expand(coefficient))
        argument = to_field(call.arg, field, spec)
        match call.name:
            case "log":
                logs.append(LogTerm(coefficient, argument))
            case "atan":
                atans.append(AtanTerm(coefficient, argument))
            case _:
                raise UnsupportedExpression(f"unknown function {call.name}")
    return AntiderivativeExpr(rational, tuple(logs), tuple(atans))


def print_expr(value):
    """Canonical text of any printable object of the package"""
    return str(value)
