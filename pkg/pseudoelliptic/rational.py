"""
Univariate rational functions over a FieldTower.

A RationalFunction is always stored in canonical form: coprime numerator
and denominator, denominator monic. Two canonical forms compare equal
exactly when the functions are equal.
"""
import logging
from dataclasses import dataclass

import sympy
from sympy import Poly, Rational
from sympy.polys.polyerrors import BasePolynomialError

from .errors import (
    DivisionByZero,
    InvariantViolation,
    NotSquarefree,
    UnsupportedIntegrand,
    UnsupportedRadicand,
)
from .fields import FieldElement, FieldTower, ProjectivePoint, embedding_key, join_signed

logger = logging.getLogger(__name__)


def variable_name(var):
    """Printed name of a variable"""
    return var.name


def _coeffs(p):
    """Dense coefficients of ``p``, highest degree first, as domain elements"""
    return p.rep.to_list()


def _poly(coeffs, var, domain):
    coeffs = list(coeffs) or [domain.zero]
    return Poly.from_list(coeffs, var, domain=domain)


def _on(p, var, domain):
    """``p`` as a Poly in ``var`` over ``domain``"""
    if p.gen != var:
        p = _poly(_coeffs(p), var, p.get_domain())
    if p.get_domain() != domain:
        p = p.set_domain(domain)
    return p


def ratfun_normalize(num, den, tower):
    """Canonical RationalFunction num/den: gcd removed, denominator monic"""
    if den.is_zero:
        raise DivisionByZero("rational function with zero denominator")
    domain = tower.domain
    num, den = num.set_domain(domain), den.set_domain(domain)
    if num.is_zero:
        return RationalFunction(num, _poly([domain.one], den.gen, domain), tower)
    num, den = num.cancel(den, include=True)
    lead = den.rep.LC()
    if lead != domain.one:
        scale = domain.quo(domain.one, lead)
        num, den = num.mul_ground(scale), den.mul_ground(scale)
    return RationalFunction(num, den, tower)


def homogeneous_compose(p, top, bottom, degree):
    """
    ``sum a_i top^i bottom^(degree - i)`` for ``p = sum a_i t^i``.

    This is ``p(top/bottom) * bottom^degree``; ``degree`` must be at least
    the degree of ``p``.
    """
    domain = top.get_domain()
    if p.is_zero:
        return _poly([], top.gen, domain)
    if p.get_domain() != domain:
        p = p.set_domain(domain)
    n = p.degree()
    if degree < n:
        raise InvariantViolation(f"cannot homogenize degree {n} to degree {degree}")
    coeffs = _coeffs(p)
    result = _poly([coeffs[0]], top.gen, domain)
    bottom_power = _poly([domain.one], top.gen, domain)
    for a in coeffs[1:]:
        bottom_power = bottom_power * bottom
        result = result * top + bottom_power.mul_ground(a)
    if degree > n:
        result = result * bottom ** (degree - n)
    return result


@dataclass(frozen=True, eq=False)
class RationalFunction:
    num: Poly
    den: Poly
    tower: FieldTower

    # construction

    @classmethod
    def from_polys(cls, num, den, tower=None):
        tower = tower or FieldTower()
        var = num.gen
        return ratfun_normalize(_on(num, var, tower.domain), _on(den, var, tower.domain), tower)

    @classmethod
    def polynomial(cls, coeffs, var, tower=None):
        """Polynomial from coefficients (highest degree first) in the tower"""
        tower = tower or FieldTower()
        reps = [tower.element(c).rep for c in coeffs]
        return cls(_poly(reps, var, tower.domain), _poly([tower.domain.one], var, tower.domain), tower)

    @classmethod
    def constant(cls, value, var, tower=None):
        if isinstance(value, FieldElement):
            tower = value.tower if tower is None else tower.join(value.tower)
        tower = tower or FieldTower()
        return cls.polynomial([value], var, tower)

    @classmethod
    def variable(cls, var, tower=None):
        return cls.polynomial([1, 0], var, tower)

    @classmethod
    def from_expr(cls, expr, var, tower=None):
        """
        Build from a sympy expression in ``var``. Constants are placed in the
        smallest supported tower containing them unless ``tower`` is given.
        """
        expr = sympy.sympify(expr)
        num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))
        try:
            if tower is None:
                constants = Poly(num, var).coeffs() + Poly(den, var).coeffs()
                tower = FieldTower.for_constants(constants)
            num = Poly(num, var, domain=tower.domain)
            den = Poly(den, var, domain=tower.domain)
        except BasePolynomialError as e:
            raise UnsupportedIntegrand(f"{expr} is not a rational function of {var}: {e}")
        return ratfun_normalize(num, den, tower)

    # inspection

    @property
    def var(self):
        return self.num.gen

    @property
    def domain(self):
        return self.tower.domain

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.degree() == 0

    @property
    def is_constant(self):
        return self.is_polynomial and self.num.degree() <= 0

    def leading_coefficient(self):
        return FieldElement(self.tower, self.num.rep.LC())

    def constant_value(self):
        if not self.is_constant:
            raise InvariantViolation(f"{self} is not constant")
        return FieldElement(self.tower, self.num.rep.LC())

    def coefficients(self):
        """Numerator coefficients, lowest degree first, as FieldElements"""
        return [FieldElement(self.tower, c) for c in reversed(_coeffs(self.num))]

    def coefficient(self, k):
        """Coefficient of var^k of a polynomial"""
        if not self.is_polynomial:
            raise InvariantViolation(f"{self} is not a polynomial")
        coefficients = self.coefficients()
        if k >= len(coefficients):
            return self.tower.zero
        return coefficients[k]

    # conversion

    def lift(self, tower):
        if tower == self.tower:
            return self
        return RationalFunction(self.num.set_domain(tower.domain), self.den.set_domain(tower.domain), tower)

    def rename(self, var):
        if var == self.var:
            return self
        return RationalFunction(_on(self.num, var, self.domain), _on(self.den, var, self.domain), self.tower)

    def to_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            if other.var != self.var and not other.is_constant:
                if not self.is_constant:
                    raise InvariantViolation(f"mixing variables {self.var} and {other.var}")
                return self.rename(other.var)._coerce(other)
            other = other.rename(self.var)
        elif isinstance(other, (FieldElement, int, Rational)):
            other = RationalFunction.constant(other, self.var, self.tower)
        else:
            return None, None
        if other.tower != self.tower:
            tower = self.tower.join(other.tower)
            return self.lift(tower), other.lift(tower)
        return self, other

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return ratfun_normalize(a.num * b.den + b.num * a.den, a.den * b.den, a.tower)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, self.tower)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return ratfun_normalize(a.num * b.num, a.den * b.den, a.tower)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero(f"inverse of zero in {self.var}")
        return ratfun_normalize(self.den, self.num, self.tower)

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n, self.tower)

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return _coeffs(a.num) == _coeffs(b.num) and _coeffs(a.den) == _coeffs(b.den)

    __hash__ = None

    # calculus and composition

    def diff(self):
        num = self.num.diff() * self.den - self.num * self.den.diff()
        return ratfun_normalize(num, self.den ** 2, self.tower)

    def substitute(self, g):
        """``self(g)``: compose with a RationalFunction ``g`` in another variable"""
        f = self
        if f.tower != g.tower:
            tower = f.tower.join(g.tower)
            f, g = f.lift(tower), g.lift(tower)
        if f.is_zero:
            return RationalFunction.constant(0, g.var, f.tower)
        n, m = f.num.degree(), f.den.degree()
        top = homogeneous_compose(f.num, g.num, g.den, max(n, m))
        bottom = homogeneous_compose(f.den, g.num, g.den, max(n, m))
        return ratfun_normalize(top, bottom, f.tower)

    def scale_variable(self, c):
        """``self(c*var)`` for a nonzero constant ``c``"""
        c = c if isinstance(c, FieldElement) else self.tower.element(c)
        tower = self.tower.join(c.tower)
        f, c = self.lift(tower), c.lift(tower).rep
        parts = []
        for p in (f.num, f.den):
            power, scaled = tower.domain.one, []
            for a in reversed(_coeffs(p)):
                scaled.append(a * power)
                power = power * c
            parts.append(_poly(list(reversed(scaled)), f.var, tower.domain))
        return ratfun_normalize(parts[0], parts[1], tower)

    def shift(self, a):
        """``self(var + a)``"""
        a = self.tower.element(a) if not isinstance(a, FieldElement) else a
        f = self.lift(self.tower.join(a.tower))
        rep = a.lift(f.tower).rep
        return ratfun_normalize(f.num.shift(rep), f.den.shift(rep), f.tower)

    def evaluate(self, point):
        """Value at a FieldElement (or int); raises DivisionByZero at a pole"""
        if not isinstance(point, FieldElement):
            point = self.tower.element(point)
        tower = self.tower.join(point.tower)
        f = self.lift(tower)
        x = point.lift(tower).rep
        top, bottom = _horner(_coeffs(f.num), x, tower.domain), _horner(_coeffs(f.den), x, tower.domain)
        if not bottom:
            raise DivisionByZero(f"{self} has a pole at {point}")
        return FieldElement(tower, top / bottom)

    def power_section(self, n, new_var, shift=0):
        """
        The function ``phi`` with ``self = var^shift * phi(var^n)``, in ``new_var``.

        Raises InvariantViolation if ``self`` does not have that shape.
        """
        f = self
        if shift:
            f = f / RationalFunction.variable(f.var, f.tower) ** shift
        parts = []
        for p in (f.num, f.den):
            low = list(reversed(_coeffs(p)))
            if any(c for i, c in enumerate(low) if i % n):
                raise InvariantViolation(f"{self} is not of the form {f.var}^{shift}*phi({f.var}^{n})")
            parts.append(_poly(list(reversed(low[::n])), new_var, f.domain))
        return ratfun_normalize(parts[0], parts[1], f.tower)

    def __str__(self):
        return format_rational_function(self)

    def __repr__(self):
        return f"RationalFunction({self}, {self.tower})"


def _horner(coeffs, x, domain):
    acc = domain.zero
    for c in coeffs:
        acc = acc * x + c
    return acc


def ratfun_compose_moebius(f, moebius):
    """``f(M(t))`` for a MoebiusMap ``M``, in the same variable as ``f``"""
    return f.substitute(moebius.as_function(f.var, f.tower))


# printing

def format_polynomial(p, tower, var_text=None):
    var_text = var_text or variable_name(p.gen)
    if p.is_zero:
        return "0"
    coeffs = _coeffs(p)
    n = p.degree()
    pieces = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        k = n - i
        sign, text = FieldElement(tower, c).factor_text()
        mono = "" if k == 0 else var_text if k == 1 else f"{var_text}^{k}"
        if not mono:
            value = FieldElement(tower, c).to_sympy()
            body = str(abs(value)) if value.is_Rational else text
        elif text == "1":
            body = mono
        else:
            body = f"{text}*{mono}"
        pieces.append(("-" if sign == "-" else "") + body)
    return join_signed(pieces)


def _term_count(p):
    return sum(1 for c in _coeffs(p) if c)


def _display_scale(f):
    """Positive rational clearing denominators in both numerator and denominator"""
    if not f.tower.is_rational:
        return 1
    values = [f.domain.to_sympy(c) for c in _coeffs(f.num) + _coeffs(f.den) if c]
    return sympy.ilcm(*[v.q for v in values]) if len(values) > 1 else values[0].q


def format_rational_function(f):
    if f.is_zero:
        return "0"
    if f.is_polynomial:
        return format_polynomial(f.num, f.tower)
    num, den = f.num, f.den
    scale = _display_scale(f)
    if scale != 1:
        num, den = num.mul_ground(f.domain.convert(scale)), den.mul_ground(f.domain.convert(scale))
    num_text = format_polynomial(num, f.tower)
    den_text = format_polynomial(den, f.tower)
    if _term_count(num) > 1:
        num_text = f"({num_text})"
    if not (_term_count(den) == 1 and den.degree() == 1 and den_text == variable_name(den.gen)):
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"


# roots

def polynomial_roots(p, tower):
    """
    Distinct roots of a Poly with coefficients in ``tower``, adjoining a
    generator for each factor without roots in the tower. Returns
    ``(roots, tower)``; raises Unsupported when a factor needs anything
    beyond a square root or a real cube root.
    """
    _, factors = p.set_domain(tower.domain).factor_list()
    pending = [f for f, _ in factors if f.degree() > 0]
    roots = []
    while pending:
        g = pending.pop(0).set_domain(tower.domain)
        if g.degree() == 1:
            lead, constant = _coeffs(g)
            roots.append(FieldElement(tower, -constant / lead))
            continue
        tower, root = tower.adjoin(g)
        roots.append(root)
        g = g.set_domain(tower.domain)
        rest = g.quo(_poly([tower.domain.one, -root.rep], g.gen, tower.domain))
        if rest.degree() > 0:
            pending.append(rest)
    return [root.lift(tower) for root in roots], tower


# roots of radicands

def poly_roots_in_supported_towers(R, tower=None):
    """
    Roots of a squarefree rational polynomial ``R``, in the smallest
    supported tower over ``tower``. Returns ``(roots, tower)`` with the
    roots as ProjectivePoints sorted by modulus and then argument.
    """
    tower = tower or FieldTower()
    R = R.set_domain(sympy.QQ) if R.get_domain() != sympy.QQ else R
    if R.degree() < 1:
        raise UnsupportedRadicand(f"constant radicand {R.as_expr()}")
    if R.gcd(R.diff()).degree() > 0:
        raise NotSquarefree(f"{R.as_expr()} has a repeated root")
    _, factors = R.factor_list()
    found = []
    for factor, multiplicity in factors:
        if multiplicity > 1:
            raise NotSquarefree(f"{R.as_expr()} has a repeated factor {factor.as_expr()}")
        degree = factor.degree()
        if degree == 1:
            a, b = factor.all_coeffs()
            found.append(-b / a)
        elif degree == 2:
            a, b, _ = factor.all_coeffs()
            tower, root = tower.adjoin(factor)
            found.append(root)
            found.append(-root - b / a)
        else:
            raise UnsupportedRadicand(
                f"{R.as_expr()} has an irreducible factor {factor.as_expr()} of degree {degree}"
            )
    roots = [tower.element(r) for r in found]
    roots.sort(key=lambda r: embedding_key(r.numeric()))
    logger.debug("roots of %s lie in %s", R.as_expr(), tower)
    return [ProjectivePoint.finite(r) for r in roots], tower


