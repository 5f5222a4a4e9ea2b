"""
Arithmetic in K(t)[y]/(y^n - R(t)) for n = 2, 3.

Elements are stored on the basis 1, y, ..., y^(n-1) with RationalFunction
coefficients, which makes zero tests and equality exact. Differentiation
uses y' = R' y / (n R).
"""
import logging
from dataclasses import dataclass

import sympy
from sympy import Poly, Rational

from .errors import DivisionByZero, InvalidInput, UnsupportedExpression
from .fields import FieldElement, join_signed
from .rational import RationalFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RadicalFunctionField:
    """The field generated over K(t) by y with y^index = radicand"""

    radicand: RationalFunction
    index: int
    text: str = ""

    def __post_init__(self):
        if self.index not in (2, 3):
            raise InvalidInput(f"radical index {self.index} (only 2 and 3 are supported)")

    @classmethod
    def for_spec(cls, spec):
        return cls(spec.radicand, spec.index, spec.radicand_display)

    @property
    def var(self):
        return self.radicand.var

    def same_as(self, other):
        return self.index == other.index and self.radicand == other.radicand

    def element(self, components):
        components = list(components) + [0] * (self.index - len(components))
        if len(components) != self.index:
            raise InvalidInput(f"{len(components)} components for index {self.index}")
        return AlgebraicFunctionElement(self, tuple(self._rational(c) for c in components))

    def _rational(self, value):
        if isinstance(value, RationalFunction):
            return value.rename(self.var) if value.is_constant else value
        return RationalFunction.constant(value, self.var)

    def zero(self):
        return self.element([0])

    def one(self):
        return self.element([1])

    def constant(self, value):
        return self.element([value])

    def monomial(self, k, coefficient=1):
        """``coefficient * y^k`` reduced with y^n = R"""
        whole, position = divmod(k, self.index)
        coefficient = self._rational(coefficient) * self.radicand ** whole
        components = [0] * self.index
        components[position] = coefficient
        return self.element(components)

    @property
    def y(self):
        return self.monomial(1)

    def integrand(self, F, exponent):
        """``F * R^(-exponent)`` as an element"""
        k = self.index - exponent * self.index
        if not Rational(k).is_Integer:
            raise InvalidInput(f"exponent {exponent} does not match index {self.index}")
        return self.monomial(int(k), F / self.radicand)

    def from_expr(self, expr, y):
        """Element from a sympy expression in the variable and the symbol ``y`` standing for the radical"""
        expr = sympy.together(sympy.sympify(expr))
        num, den = sympy.fraction(expr)
        return self._from_polynomial(num, y) / self._from_polynomial(den, y)

    def _from_polynomial(self, expr, y):
        result = self.zero()
        for (k,), coeff in Poly(expr, y).terms():
            result = result + self.monomial(k, RationalFunction.from_expr(coeff, self.var))
        return result

    def radical_text(self, k):
        q = Rational(k, self.index)
        text = self.text or str(self.radicand)
        return f"({text})^({q.p}/{q.q})"


@dataclass(frozen=True, eq=False)
class AlgebraicFunctionElement:
    field: RadicalFunctionField
    components: tuple

    @property
    def is_zero(self):
        return all(c.is_zero for c in self.components)

    @property
    def is_rational(self):
        return all(c.is_zero for c in self.components[1:])

    def component(self, k):
        return self.components[k]

    def _coerce(self, other):
        if isinstance(other, AlgebraicFunctionElement):
            if not other.field.same_as(self.field):
                raise UnsupportedExpression(
                    f"elements over y^{other.field.index} = {other.field.radicand} "
                    f"and y^{self.field.index} = {self.field.radicand} do not mix"
                )
            return other
        if isinstance(other, (RationalFunction, FieldElement, int, Rational)):
            return self.field.element([other])
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return AlgebraicFunctionElement(
            self.field, tuple(a + b for a, b in zip(self.components, other.components)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicFunctionElement(self.field, tuple(-c for c in self.components))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n, R = self.field.index, self.field.radicand
        result = [RationalFunction.constant(0, self.field.var) for _ in range(n)]
        for i, a in enumerate(self.components):
            if a.is_zero:
                continue
            for j, b in enumerate(other.components):
                if b.is_zero:
                    continue
                product = a * b
                if i + j >= n:
                    product = product * R
                result[(i + j) % n] = result[(i + j) % n] + product
        return AlgebraicFunctionElement(self.field, tuple(result))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero("inverse of zero in the function field")
        R = self.field.radicand
        if self.field.index == 2:
            a0, a1 = self.components
            norm = a0 * a0 - R * a1 * a1
            return self.field.element([a0 / norm, -a1 / norm])
        a0, a1, a2 = self.components
        norm = a0 ** 3 + R * a1 ** 3 + R * R * a2 ** 3 - 3 * R * a0 * a1 * a2
        adjugate = (a0 * a0 - R * a1 * a2, R * a2 * a2 - a0 * a1, a1 * a1 - a0 * a2)
        return self.field.element([c / norm for c in adjugate])

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).is_zero

    __hash__ = None

    def diff(self):
        """Derivative in the field's variable"""
        n, R = self.field.index, self.field.radicand
        log_derivative = R.diff() / (n * R)
        return AlgebraicFunctionElement(self.field, tuple(
            g.diff() + k * log_derivative * g for k, g in enumerate(self.components)))

    def __str__(self):
        pieces = []
        for k, coefficient in enumerate(self.components):
            if coefficient.is_zero:
                continue
            if k == 0:
                pieces.append(str(coefficient))
            else:
                pieces.append(_radical_term(coefficient, k, self.field))
        return join_signed(pieces)

    def __repr__(self):
        return f"AlgebraicFunctionElement({self})"


def _radical_term(coefficient, k, field):
    """``coefficient * y^k``; a radicand in the denominator is printed as a negative power"""
    lowered = coefficient * field.radicand
    if lowered.den.degree() < coefficient.den.degree():
        coefficient, k = lowered, k - field.index
    radical = field.radical_text(abs(k))
    one = coefficient.den.one
    num = RationalFunction(coefficient.num, one, coefficient.tower)
    den = RationalFunction(coefficient.den, one, coefficient.tower)

    sign = ""
    if num.is_constant:
        sign, text = num.constant_value().factor_text()
        sign = "-" if sign == "-" else ""
        head = "" if text == "1" else text
    else:
        head = str(num)
        if " " in head:
            head = f"({head})"
    den_text = "" if den.is_constant else str(den)
    if " " in den_text or "*" in den_text:
        den_text = f"({den_text})"

    if k > 0:
        body = f"{head}*{radical}" if head else radical
        return sign + (f"{body}/{den_text}" if den_text else body)
    bottom = f"({den_text}*{radical})" if den_text else radical
    return sign + f"{head or '1'}/{bottom}"


def differentiate_in_quotient(g, R=None, n=None):
    """
    Derivative of an AntiderivativeExpr or AlgebraicFunctionElement inside
    K(t)[y]/(y^n - R). ``R`` and ``n``, when given, must match the element's field.
    """
    field = _field_of(g)
    if R is not None and n is not None:
        expected = RadicalFunctionField(RationalFunction.from_polys(R, Poly(1, R.gen)), n)
        if not expected.same_as(field):
            raise UnsupportedExpression(f"element lives over y^{field.index} = {field.radicand}")
    derivative = g.derivative() if hasattr(g, "derivative") else g.diff()
    if isinstance(derivative, RationalFunction):
        derivative = field.element([derivative])
    return derivative


def _field_of(g):
    if isinstance(g, AlgebraicFunctionElement):
        return g.field
    rational = getattr(g, "rational", None)
    if isinstance(rational, AlgebraicFunctionElement):
        return rational.field
    for term in tuple(getattr(g, "logs", ())) + tuple(getattr(g, "atans", ())):
        if isinstance(term.argument, AlgebraicFunctionElement):
            return term.argument.field
    raise UnsupportedExpression("expression does not live in a radical function field")
