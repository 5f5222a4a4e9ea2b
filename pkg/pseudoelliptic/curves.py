"""
Genus of cyclic covers, and residues of phi(x) dx/y^e on the curve
y^3 = x(x - K).

A differential with zero residue everywhere is of the second kind; on a
curve of genus one such a differential that is not exact has no elementary
integral. Residues are read off truncated Laurent expansions in a local
uniformizer tau: x = tau^3 over x = 0, x - K = tau^3 over x = K,
x = tau^-3 over infinity, and x - x0 = tau on each of the three sheets over
any other pole x0.
"""
import logging
from dataclasses import dataclass
from math import gcd

from sympy import Rational, Symbol

from .config import get_settings
from .errors import InvalidInput, InvariantViolation
from .fields import OMEGA, FieldElement, FieldTower
from .radicals import RadicalScalar
from .rational import RationalFunction, _coeffs, polynomial_roots

logger = logging.getLogger(__name__)

TAU = Symbol("tau")


# genus

def genus_XR(n, degR):
    """Genus of y^n = R(x) for R with degR simple roots"""
    if n < 2:
        raise InvalidInput(f"radical index {n} must be at least 2")
    if degR < 1:
        raise InvalidInput(f"radicand degree {degR} must be at least 1")
    ramification = (n - 1) * degR + n - gcd(n, degR)
    return ramification // 2 - n + 1


def genus_Yk(n, k):
    """Genus of the quotient curve carrying the k-th eigencomponent of the index-n cover"""
    if n < 2:
        raise InvalidInput(f"radical index {n} must be at least 2")
    if not 0 <= k <= n - 1:
        raise InvalidInput(f"eigenspace index {k} outside 0..{n - 1}")
    return (n + 1 - gcd(n, k) - gcd(n, k + 1)) // 2


# series

@dataclass(frozen=True, eq=False)
class PuiseuxSeries:
    """
    ``sum coefficients[i] * tau^(valuation + i) + O(tau^precision)``.

    The leading coefficient is nonzero; the zero series has no coefficients
    and valuation equal to its precision.
    """

    valuation: int
    coefficients: tuple
    precision: int
    tower: FieldTower

    @classmethod
    def of(cls, valuation, coefficients, precision, tower):
        coefficients = list(coefficients)[:max(precision - valuation, 0)]
        while coefficients and coefficients[0].is_zero:
            coefficients.pop(0)
            valuation += 1
        if not coefficients:
            valuation = precision
        return cls(valuation, tuple(coefficients), precision, tower)

    @classmethod
    def laurent(cls, f, precision):
        """Expansion at tau = 0 of a RationalFunction in tau"""
        tower, domain = f.tower, f.domain
        if f.is_zero:
            return cls.of(precision, (), precision, tower)
        num = list(reversed(_coeffs(f.num)))
        den = list(reversed(_coeffs(f.den)))
        low_num = next(i for i, c in enumerate(num) if c)
        low_den = next(i for i, c in enumerate(den) if c)
        num, den = num[low_num:], den[low_den:]
        valuation = low_num - low_den

        inverse = domain.one / den[0]
        quotient = []
        for k in range(max(precision - valuation, 0)):
            total = num[k] if k < len(num) else domain.zero
            for i in range(1, min(k, len(den) - 1) + 1):
                total -= den[i] * quotient[k - i]
            quotient.append(total * inverse)
        return cls.of(valuation, [FieldElement(tower, c) for c in quotient], precision, tower)

    @classmethod
    def binomial(cls, a, exponent, precision):
        """
        ``(1 + a(tau))^exponent`` for a polynomial ``a`` with ``a(0) = 0``,
        by the power recurrence b_n = (1/n) sum_k ((exponent + 1) k - n) a_k b_(n-k).
        """
        tower = a.tower
        if not a.is_polynomial or not a.coefficient(0).is_zero:
            raise InvariantViolation(f"{a} is not a polynomial vanishing at 0")
        exponent = Rational(exponent)
        terms = a.coefficients()
        b = [tower.one]
        for n in range(1, max(precision, 0)):
            total = tower.zero
            for k in range(1, min(n, len(terms) - 1) + 1):
                if terms[k].is_zero:
                    continue
                total = total + terms[k] * b[n - k] * ((exponent + 1) * k - n)
            b.append(total / n)
        return cls.of(0, b, precision, tower)

    @property
    def is_zero(self):
        return not self.coefficients

    @property
    def pole_order(self):
        return 0 if self.is_zero else max(-self.valuation, 0)

    def coefficient(self, n):
        if n >= self.precision:
            raise InvariantViolation(f"coefficient of tau^{n} is beyond the precision {self.precision}")
        i = n - self.valuation
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return self.tower.zero

    def residue(self):
        return self.coefficient(-1)

    def __add__(self, other):
        tower = self.tower.join(other.tower)
        valuation = min(self.valuation, other.valuation)
        precision = min(self.precision, other.precision)
        coefficients = [
            self.coefficient(n) + other.coefficient(n) for n in range(valuation, precision)
        ]
        return PuiseuxSeries.of(valuation, coefficients, precision, tower)

    def __mul__(self, other):
        tower = self.tower.join(other.tower)
        valuation = self.valuation + other.valuation
        precision = min(self.precision + other.valuation, other.precision + self.valuation)
        if self.is_zero or other.is_zero:
            return PuiseuxSeries.of(precision, (), precision, tower)
        coefficients = []
        for n in range(valuation, precision):
            total = tower.zero
            for i, a in enumerate(self.coefficients):
                j = n - valuation - i
                if j < 0:
                    break
                if j < len(other.coefficients):
                    total = total + a * other.coefficients[j]
            coefficients.append(total)
        return PuiseuxSeries.of(valuation, coefficients, precision, tower)

    def __str__(self):
        pieces = [
            f"{c}*tau^{self.valuation + i}"
            for i, c in enumerate(self.coefficients) if not c.is_zero
        ]
        return " + ".join(pieces + [f"O(tau^{self.precision})"])


# residues

@dataclass(frozen=True, eq=False)
class ResidueRecord:
    point: str
    residue: RadicalScalar
    order: int

    def as_row(self):
        return {"point": self.point, "residue": str(self.residue), "order": self.order}


@dataclass(frozen=True, eq=False)
class ResidueCertificate:
    records: tuple

    @property
    def is_second_kind(self):
        return all(r.residue.is_zero for r in self.records)

    @property
    def verdict(self):
        return "second-kind" if self.is_second_kind else "third-kind"

    def rows(self):
        return [r.as_row() for r in self.records]

    def at(self, point):
        return next(r for r in self.records if r.point == point)


def _order_at_zero(f):
    num = list(reversed(_coeffs(f.num)))
    den = list(reversed(_coeffs(f.den)))
    return next(i for i, c in enumerate(num) if c) - next(i for i, c in enumerate(den) if c)


def _expand(rational_part, a, exponent, slack):
    pole = max(-_order_at_zero(rational_part), 0)
    return PuiseuxSeries.laurent(rational_part, slack) * PuiseuxSeries.binomial(a, exponent, pole + slack)


def local_residue(rational_part, a, exponent, slack=None):
    """
    ``(residue, pole order)`` of ``rational_part(tau) * (1 + a(tau))^exponent dtau``
    at tau = 0. The expansion is redone with more terms and must agree.
    """
    if rational_part.is_zero:
        return rational_part.tower.zero, 0
    slack = slack or get_settings().series_slack
    series = _expand(rational_part, a, exponent, slack)
    check = _expand(rational_part, a, exponent, 2 * slack)
    if not series.residue() == check.residue():
        raise InvariantViolation(f"residue of {rational_part} changed with the truncation order")
    return series.residue(), series.pole_order


def second_kind_check(phi, K, power=1):
    """
    Residues of ``phi(x) dx/y^power`` on y^3 = x(x - K) at the three branch
    points and at every point over a finite pole of phi away from 0 and K.
    Branch-point residues are exact up to the stored unit; sheet residues
    carry the cube root of x0(x0 - K) explicitly.
    """
    if phi.is_zero:
        raise InvalidInput("second-kind check of the zero differential")
    if K.is_zero:
        raise InvalidInput("curve y^3 = x^2 is singular")
    if power not in (1, 2):
        raise InvalidInput(f"power {power} of y must be 1 or 2")
    e = power
    exponent = Rational(-e, 3)
    tower = phi.tower.join(K.tower)
    tau = RationalFunction.variable(TAU, tower)
    cube = tau ** 3

    records = []
    branches = (
        ("P0", phi.substitute(cube) * tau ** (2 - e) * 3, -cube / K, RadicalScalar.root(-K, 3, -e)),
        ("PK", phi.substitute(K + cube) * tau ** (2 - e) * 3, cube / K, RadicalScalar.root(K, 3, -e)),
        ("Pinf", phi.substitute(cube.inverse()) * tau ** (2 * e - 4) * -3, -cube * K, RadicalScalar.of(1)),
    )
    for point, rational_part, a, unit in branches:
        residue, order = local_residue(rational_part, a, exponent)
        records.append(ResidueRecord(point, RadicalScalar.of(residue) * unit, order))

    tower = tower.adjoin_value(OMEGA)
    poles, tower = polynomial_roots(phi.den, tower)
    omega = tower.element(OMEGA)
    for x0 in poles:
        g0 = x0 * (x0 - K)
        if g0.is_zero:
            continue
        local = RationalFunction.variable(TAU, tower)
        shifted = phi.substitute(local + x0)
        a = (local * (x0 * 2 - K) + local ** 2) / g0
        residue, order = local_residue(shifted, a, exponent)
        for j in range(3):
            unit = RadicalScalar.of(omega ** (-j * e)) * RadicalScalar.root(g0, 3, -e)
            records.append(ResidueRecord(f"x={x0} sheet {j}", RadicalScalar.of(residue) * unit, order))

    certificate = ResidueCertificate(tuple(records))
    logger.debug(
        "residues of (%s) dx/y^%d on y^3 = x(x - %s): %s",
        phi, e, K, ", ".join(f"{r.point}: {r.residue}" for r in records),
    )
    return certificate
