"""
Exact integration of rational functions over a FieldTower and the
antiderivative expressions it produces.

Hermite reduction (Mack's linear version) splits off the rational part;
the Rothstein-Trager resultant gives the logarithmic part, adjoining the
resultant's roots to the tower as needed. Antiderivatives are kept in the
Liouville shape v + sum c_i log(u_i), optionally with arctangents from
folding conjugate log pairs.
"""
import logging
from dataclasses import dataclass

import sympy
from sympy import Dummy, Poly
from sympy.integrals.rationaltools import log_to_atan

from .errors import InvariantViolation, PartialResult, Unsupported
from .fields import FieldElement, FieldTower, join_signed
from .rational import RationalFunction, _coeffs, _poly, polynomial_roots

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LogTerm:
    coefficient: FieldElement
    argument: object

    def derivative(self):
        return self.argument.diff() / self.argument * self.coefficient

    def map(self, fn):
        return LogTerm(self.coefficient, fn(self.argument))

    def __str__(self):
        return _call_text(self.coefficient, "log", self.argument)


@dataclass(frozen=True, eq=False)
class AtanTerm:
    coefficient: FieldElement
    argument: object

    def derivative(self):
        return self.argument.diff() / (1 + self.argument * self.argument) * self.coefficient

    def map(self, fn):
        return AtanTerm(self.coefficient, fn(self.argument))

    def __str__(self):
        return _call_text(self.coefficient, "atan", self.argument)


def _call_text(coefficient, name, argument):
    sign, text = coefficient.factor_text()
    body = f"{name}({argument})" if text == "1" else f"{text}*{name}({argument})"
    return ("-" if sign == "-" else "") + body


@dataclass(frozen=True, eq=False)
class AntiderivativeExpr:
    """``rational + sum(logs) + sum(atans)``"""

    rational: object
    logs: tuple = ()
    atans: tuple = ()

    @property
    def is_zero(self):
        return self.rational.is_zero and not self.logs and not self.atans

    def derivative(self):
        result = self.rational.diff()
        for term in self.logs + self.atans:
            result = result + term.derivative()
        return result

    def __add__(self, other):
        if not isinstance(other, AntiderivativeExpr):
            return NotImplemented
        return AntiderivativeExpr(
            self.rational + other.rational, self.logs + other.logs, self.atans + other.atans)

    def map(self, fn):
        return AntiderivativeExpr(
            fn(self.rational),
            tuple(term.map(fn) for term in self.logs),
            tuple(term.map(fn) for term in self.atans),
        )

    def back_substitute(self, rule):
        return back_substitute(self, rule)

    def __str__(self):
        pieces = []
        if not self.rational.is_zero:
            pieces.append(str(self.rational))
        pieces.extend(str(term) for term in self.logs + self.atans)
        return join_signed(pieces)

    def __repr__(self):
        return f"AntiderivativeExpr({self})"


# Hermite reduction

def gcdex_diophantine(a, b, c):
    """
    ``(s, t)`` with ``s*a + t*b == c`` and ``s == 0`` or ``deg s < deg b``,
    for ``c`` in the ideal generated by ``a`` and ``b``.
    """
    s, g = a.half_gcdex(b)
    s *= c.exquo(g)
    if s and s.degree() >= b.degree():
        _, s = s.div(b)
    t = (c - s * a).exquo(b)
    return s, t


def hermite_reduce(a, d):
    """
    Split ``a/d`` (``deg a < deg d``, ``d`` monic) as ``(ga/gd)' + q + r/ds``
    with ``ds`` squarefree, ``q`` a polynomial and ``deg r < deg ds``.
    Returns ``(ga, gd, q, r, ds)``.
    """
    one = _poly([d.get_domain().one], d.gen, d.get_domain())
    ga, gd = one * 0, one

    dm = d.gcd(d.diff())
    ds = d.quo(dm)

    while dm.degree() > 0:
        ddm = dm.diff()
        dm2 = dm.gcd(ddm)
        dms = dm.quo(dm2)
        ds_ddm_dm = (ds * ddm).quo(dm)

        b, c = gcdex_diophantine(-ds_ddm_dm, dms, a)
        a = c - b.diff() * ds.quo(dms)

        ga = ga * dm + b * gd
        gd = gd * dm
        ga, gd = ga.cancel(gd, include=True)
        dm = dm2

    q, r = a.div(ds)
    return ga, gd, q, r, ds


# Rothstein-Trager

def _resultant_roots(factor, tower):
    """Every root of a resultant factor, adjoining what the tower lacks"""
    try:
        return polynomial_roots(factor, tower)
    except Unsupported as e:
        raise PartialResult(
            f"log part needs the roots of {factor.as_expr()}, outside supported towers ({e})",
            factor=factor.as_expr(),
        )


def rothstein_trager(a, d, tower):
    """Log terms of ``a/d`` for squarefree monic ``d`` with ``deg a < deg d``"""
    if a.is_zero:
        return []
    var = d.gen
    z = Dummy("z")
    dd = d.diff()
    D = Poly(d.as_expr(), var, z, domain=tower.domain)
    A = Poly(a.as_expr() - z * dd.as_expr(), var, z, domain=tower.domain)
    resultant = D.resultant(A)
    _, factors = resultant.factor_list()
    logger.debug(
        "resultant of %s factors with degrees %s",
        d.as_expr(), [f.degree() for f, _ in factors],
    )

    terms = []
    for factor, _ in factors:
        if factor.degree() < 1:
            continue
        roots, root_tower = _resultant_roots(factor, tower)
        domain = root_tower.domain
        d_here, a_here, dd_here = (p.set_domain(domain) for p in (d, a, dd))
        one = _poly([domain.one], var, domain)
        for c in roots:
            argument = d_here.gcd(a_here - dd_here.mul_ground(c.rep))
            if argument.degree() > 0:
                terms.append(LogTerm(c, RationalFunction.from_polys(argument, one, root_tower)))
    return terms


# real form

def _is_real(element):
    return sympy.im(element.to_sympy()) == 0


def _conjugate_function(f):
    num = [FieldElement(f.tower, c).conjugate().rep for c in _coeffs(f.num)]
    return RationalFunction.from_polys(_poly(num, f.var, f.domain), f.den, f.tower)


def _real_imaginary(f):
    """Real and imaginary parts of a polynomial's coefficients, as sympy values"""
    values = [sympy.expand(FieldElement(f.tower, c).to_sympy()) for c in _coeffs(f.num)]
    return [sympy.expand(sympy.re(v)) for v in values], [sympy.expand(sympy.im(v)) for v in values]


def _fold_pair(term):
    """``c log u + conj(c) log conj(u)`` as real logs and arctangents"""
    var = term.argument.var
    c = term.coefficient.to_sympy()
    a, b = sympy.expand(sympy.re(c)), sympy.expand(sympy.im(c))
    P, Q = _real_imaginary(term.argument)
    tower = FieldTower.for_constants([a, b] + P + Q)
    P = Poly.from_list([tower.domain.from_sympy(v) for v in P], var, domain=tower.domain)
    Q = Poly.from_list([tower.domain.from_sympy(v) for v in Q], var, domain=tower.domain)
    one = _poly([tower.domain.one], var, tower.domain)

    logs, atans = [], []
    if a != 0:
        logs.append(LogTerm(tower.element(a), RationalFunction.from_polys(P * P + Q * Q, one, tower)))
    if b != 0 and not P.is_zero and not Q.is_zero:
        for piece in sympy.Add.make_args(log_to_atan(P, Q)):
            calls = [f for f in sympy.Mul.make_args(piece) if isinstance(f, sympy.atan)]
            if len(calls) != 1:
                raise InvariantViolation(f"unexpected arctangent term {piece}")
            scale = sympy.expand(b * piece / calls[0])
            argument = RationalFunction.from_expr(calls[0].args[0], var, tower.join(FieldTower.for_constants([scale])))
            atans.append(AtanTerm(argument.tower.element(scale), argument))
    return logs, atans


def to_real_form(expr):
    """
    Fold each log pair with conjugate coefficients and conjugate arguments
    into ``a*log(P^2 + Q^2)`` plus arctangents. Terms without a partner stay.
    """
    remaining = list(expr.logs)
    logs, atans = [], list(expr.atans)
    while remaining:
        term = remaining.pop(0)
        if _is_real(term.coefficient) and all(_is_real(c) for c in term.argument.coefficients()):
            logs.append(term)
            continue
        try:
            partner_coefficient = term.coefficient.conjugate()
            partner_argument = _conjugate_function(term.argument)
        except InvariantViolation:
            logs.append(term)
            continue
        partner = next(
            (other for other in remaining
             if other.coefficient == partner_coefficient and other.argument == partner_argument),
            None,
        )
        if partner is None:
            logs.append(term)
            continue
        remaining.remove(partner)
        folded_logs, folded_atans = _fold_pair(term)
        logs.extend(folded_logs)
        atans.extend(folded_atans)
    return AntiderivativeExpr(expr.rational, tuple(logs), tuple(atans))


# integration

def integrate_rational(f, real_form=False):
    """
    Antiderivative of a RationalFunction. Raises PartialResult when a
    resultant factor has roots outside supported towers.
    """
    tower, var = f.tower, f.var
    if f.is_zero:
        return AntiderivativeExpr(RationalFunction.constant(0, var, tower))
    polynomial, remainder = f.num.div(f.den)
    ga, gd, q, r, ds = hermite_reduce(remainder, f.den)
    polynomial = polynomial + q

    rational = RationalFunction.from_polys(ga, gd, tower)
    if not polynomial.is_zero:
        rational = rational + RationalFunction.from_polys(
            polynomial.integrate(), _poly([tower.domain.one], var, tower.domain), tower)
    logs = rothstein_trager(r, ds, tower)
    result = AntiderivativeExpr(rational, tuple(logs))
    if real_form:
        result = to_real_form(result)
    logger.debug("integral of %s: %s", f, result)
    return result


# back substitution

def substitute_into(f, rule):
    """``f(rule)`` for a RationalFunction ``f``; ``rule`` is a RationalFunction or function-field element"""
    if rule is None:
        return f
    if isinstance(rule, RationalFunction):
        return f.substitute(rule)
    num = _horner([FieldElement(f.tower, c) for c in _coeffs(f.num)], rule)
    den = _horner([FieldElement(f.tower, c) for c in _coeffs(f.den)], rule)
    return num / den


def _horner(coeffs, x):
    acc = x * 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def back_substitute(expr, rule):
    """Replace the reduction variable by ``rule`` in every part of ``expr``"""
    if rule is None:
        return expr
    return expr.map(lambda f: substitute_into(f, rule))


@dataclass(frozen=True)
class Verification:
    verified: bool
    discrepancy: object

    def __bool__(self):
        return self.verified


def verify_antiderivative(g, spec, target=None):
    """
    Differentiate ``g`` in K(t)[y]/(y^n - R) and compare with the integrand
    of ``spec`` (or with ``target``). The discrepancy is exactly zero on success.
    """
    field = spec.function_field()
    target = spec.element() if target is None else target
    derivative = g.derivative()
    if isinstance(derivative, RationalFunction):
        derivative = field.element([derivative])
    discrepancy = derivative - target
    logger.debug("verification of %s: discrepancy %s", g, discrepancy)
    return Verification(discrepancy.is_zero, discrepancy)
