"""
Radical scalars such as c^(1/3) or C^(-1/2) that multiply otherwise
radical-free data, and rational functions scaled by them.
"""
from dataclasses import dataclass

import sympy
from sympy import Rational

from .errors import InvalidInput
from .fields import FieldElement, FieldTower


@dataclass(frozen=True, eq=False)
class RadicalUnit:
    """
    ``base^(power/index)``.

    Square roots of negative rationals are principal (i*sqrt(q)); odd roots
    of negative rationals are real, so (-2)^(1/3) = -2^(1/3).
    """

    base: FieldElement
    index: int
    power: int = 1

    def numeric(self):
        z = self.base.numeric()
        exponent = self.power / self.index
        if self.base.is_rational and self.index % 2 and z.real < 0:
            return (-1) ** self.power * (-z.real) ** exponent
        return z ** exponent

    def __str__(self):
        sign, text = self.base.factor_text()
        if sign == "-":
            text = f"(-{text})" if not text.startswith("(") else f"(-{text[1:-1]})"
        return f"{text}^({self.power}/{self.index})"


def _canonical(coeff, units):
    """Reduce powers, merge rational bases per index and pull out perfect powers."""
    if coeff.is_zero:
        return coeff, ()
    rational = {}
    algebraic = {}
    for unit in units:
        if unit.index < 1:
            raise InvalidInput(f"radical index {unit.index}")
        whole, power = divmod(unit.power, unit.index)
        if whole:
            coeff = coeff * unit.base ** whole
        if power == 0:
            continue
        if unit.base.is_rational:
            q = unit.base.as_rational()
            if q < 0:
                q = -q
                if unit.index % 2:
                    coeff = coeff * (-1) ** power
                else:
                    key = ("-1", unit.index)
                    minus_one = algebraic.setdefault(key, [unit.base.tower.element(-1), 0])
                    minus_one[1] += power
            rational[unit.index] = rational.get(unit.index, Rational(1)) * q ** power
        else:
            key = (str(unit.base), unit.index)
            entry = algebraic.setdefault(key, [unit.base, 0])
            entry[1] += power

    result = []
    for index in sorted(rational):
        m = rational[index]
        coeff = coeff / m.q
        inside_n = m.p * m.q ** (index - 1)
        outside, inside = 1, 1
        for prime, exponent in sympy.factorint(inside_n).items():
            outside *= prime ** (exponent // index)
            inside *= prime ** (exponent % index)
        coeff = coeff * outside
        if inside != 1:
            result.append(RadicalUnit(FieldTower().element(inside), index, 1))
    for key in sorted(algebraic):
        base, power = algebraic[key]
        whole, power = divmod(power, key[1])
        if whole:
            coeff = coeff * base ** whole
        if power:
            result.append(RadicalUnit(base, key[1], power))
    if coeff.is_zero:
        return coeff, ()
    return coeff, tuple(result)


def _unit_signature(unit):
    return (str(unit.base), unit.index, unit.power)


@dataclass(frozen=True, eq=False)
class RadicalScalar:
    """``coeff * prod(units)``, kept canonical by :meth:`of`."""

    coeff: FieldElement
    units: tuple = ()

    @classmethod
    def of(cls, coeff, units=()):
        if not isinstance(coeff, FieldElement):
            coeff = FieldTower().element(coeff)
        coeff, units = _canonical(coeff, units)
        return cls(coeff, units)

    @classmethod
    def root(cls, base, index, power=1):
        if not isinstance(base, FieldElement):
            base = FieldTower().element(base)
        if base.is_zero:
            raise InvalidInput("radical of zero")
        return cls.of(base.tower.one, (RadicalUnit(base, index, power),))

    @property
    def is_zero(self):
        return self.coeff.is_zero

    @property
    def is_unit_free(self):
        return not self.units

    def _coerce(self, other):
        if isinstance(other, RadicalScalar):
            return other
        if isinstance(other, (FieldElement, int, Rational)):
            return RadicalScalar.of(other)
        return None

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RadicalScalar.of(self.coeff * other.coeff, self.units + other.units)

    __rmul__ = __mul__

    def inverse(self):
        units = tuple(RadicalUnit(u.base, u.index, -u.power) for u in self.units)
        return RadicalScalar.of(self.coeff.inverse(), units)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __neg__(self):
        return RadicalScalar(-self.coeff, self.units)

    def __pow__(self, n):
        units = tuple(RadicalUnit(u.base, u.index, u.power * n) for u in self.units)
        return RadicalScalar.of(self.coeff ** n, units)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return (
            self.coeff == other.coeff
            and [_unit_signature(u) for u in self.units] == [_unit_signature(u) for u in other.units]
        )

    __hash__ = None

    def numeric(self):
        value = self.coeff.numeric()
        for unit in self.units:
            value *= unit.numeric()
        return value

    def factor_text(self):
        """(sign, text) for use in front of ``*``, as FieldElement.factor_text"""
        sign, text = self.coeff.factor_text()
        if self.units:
            units = "*".join(str(u) for u in self.units)
            text = units if text == "1" else f"{text}*{units}"
        return sign, text

    def __str__(self):
        if not self.units:
            return str(self.coeff)
        sign, text = self.factor_text()
        return ("-" if sign == "-" else "") + text


@dataclass(frozen=True, eq=False)
class ScaledFunction:
    """A RationalFunction times a RadicalScalar, e.g. c^(-1/3)*H(z)."""

    scalar: RadicalScalar
    function: object

    @property
    def is_zero(self):
        return self.scalar.is_zero or self.function.is_zero

    def normalized(self):
        """Equivalent form whose function has a monic numerator"""
        if self.is_zero:
            return ScaledFunction(RadicalScalar.of(0), self.function * 0)
        lead = self.function.leading_coefficient()
        return ScaledFunction(self.scalar * lead, self.function / lead)

    def __eq__(self, other):
        if not isinstance(other, ScaledFunction):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        a, b = self.normalized(), other.normalized()
        return a.scalar == b.scalar and a.function == b.function

    __hash__ = None

    def __str__(self):
        if self.is_zero:
            return "0"
        if self.scalar == 1:
            return str(self.function)
        sign, text = self.scalar.factor_text()
        sign = "-" if sign == "-" else ""
        if text == "1":
            return sign + _wrapped(self.function)
        return f"{sign}{text}*{_wrapped(self.function)}"


def _wrapped(function):
    text = str(function)
    if any(op in text for op in (" + ", " - ", "/")):
        return f"({text})"
    return text
