"""
Exact number fields used throughout the package.

A FieldTower is the rationals extended by a short ordered list of
generators (square roots, or real cube roots of rationals). Arithmetic is
delegated to sympy's AlgebraicField domain for the whole tower, so a
FieldElement is a tower plus one domain element. Every generator carries
a numeric embedding so that roots can be labelled reproducibly.
"""
import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy
from sympy import I, QQ, Poly, Rational, Symbol
from sympy.polys.polyerrors import CoercionFailed, NotAlgebraic

from .config import get_settings
from .errors import DivisionByZero, InvalidInput, InvariantViolation, Unsupported

logger = logging.getLogger(__name__)

MAX_TOWER_HEIGHT = 4
MINPOLY_VAR = Symbol("x")

# primitive cube root of unity
OMEGA = (-1 + sympy.sqrt(3) * I) / 2

_TIE_DIGITS = 12


@lru_cache(maxsize=None)
def _domain(values):
    if not values:
        return QQ
    return QQ.algebraic_field(*values)


def numeric_value(expr):
    """Complex embedding of an exact constant"""
    return complex(sympy.N(expr, get_settings().embed_digits))


def embedding_key(z):
    """Sort key for roots: modulus first, then argument in [0, 2*pi)"""
    phase = cmath.phase(z) % (2 * math.pi)
    if round(phase, _TIE_DIGITS) == round(2 * math.pi, _TIE_DIGITS):
        phase = 0.0
    return (round(abs(z), _TIE_DIGITS), round(phase, _TIE_DIGITS))


def _isolation_radius(value, embedding):
    minpoly = sympy.minimal_polynomial(value, MINPOLY_VAR, polys=True)
    distances = [abs(complex(r) - embedding) for r in minpoly.nroots(n=30)]
    distances = [d for d in distances if d > 10 ** -20]
    return min(distances) / 2 if distances else math.inf


@dataclass(frozen=True)
class Generator:
    name: str
    value: sympy.Expr
    minpoly: Poly
    embedding: complex
    radius: float

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FieldTower:
    """The rationals extended by ``generators``, in adjunction order."""

    generators: tuple = ()

    @property
    def domain(self):
        return _domain(tuple(g.value for g in self.generators))

    @property
    def height(self):
        return len(self.generators)

    @property
    def is_rational(self):
        return not self.generators

    @property
    def zero(self):
        return FieldElement(self, self.domain.zero)

    @property
    def one(self):
        return FieldElement(self, self.domain.one)

    def __str__(self):
        if not self.generators:
            return "QQ"
        return "QQ(" + ", ".join(g.name for g in self.generators) + ")"

    def contains(self, value):
        value = sympy.sympify(value)
        if not value.is_number:
            return False
        try:
            self.domain.from_sympy(value)
        except (CoercionFailed, NotAlgebraic):
            return False
        return True

    def element(self, value):
        """Coerce an int, Fraction, sympy number or FieldElement into this tower"""
        if isinstance(value, FieldElement):
            return value.lift(self)
        if isinstance(value, Fraction):
            value = Rational(value.numerator, value.denominator)
        if isinstance(value, int):
            return FieldElement(self, self.domain.convert(value))
        value = sympy.sympify(value)
        try:
            return FieldElement(self, self.domain.from_sympy(value))
        except (CoercionFailed, NotAlgebraic):
            raise InvariantViolation(f"{value} is not an element of {self}")

    def from_rep(self, rep):
        return FieldElement(self, rep)

    def adjoin(self, minpoly, irreducible=False, near=None):
        """
        Adjoin a root of ``minpoly`` (a Poly with coefficients in this tower).

        Returns ``(tower, root)``. If the polynomial already has a root in
        this tower the tower comes back unchanged, unless ``irreducible`` is
        set, in which case the split is reported as an error. ``near`` picks
        the root closest to a complex number; otherwise the root with the
        positive square root is taken.
        """
        p = self._over_self(minpoly)
        degree = p.degree()
        if degree < 1:
            raise InvalidInput(f"cannot adjoin a root of constant {p.as_expr()}")
        if degree > 3:
            raise Unsupported(f"adjoining a root of a degree {degree} polynomial")
        p = p.monic()

        local = self._roots_here(p)
        if local:
            if irreducible:
                raise InvariantViolation(f"{p.as_expr()} splits over {self}")
            return self, _closest(local, near)

        if self.height >= MAX_TOWER_HEIGHT:
            raise Unsupported(f"tower {self} is already at the maximum height")

        coeffs = [self.domain.to_sympy(c) for c in p.rep.to_list()]
        if degree == 2:
            _, b, c = coeffs
            scale, value = _square_root_generator(sympy.expand(b * b - 4 * c))
            name = f"sqrt({_plain(sympy.expand(value ** 2))})"
            candidates = [sympy.expand((-b + sign * scale * value) / 2) for sign in (1, -1)]
        else:
            if coeffs[1] != 0 or coeffs[2] != 0:
                raise Unsupported(f"general cubic {p.as_expr()} needs a non-radical extension")
            q = -coeffs[3]
            if not q.is_Rational:
                raise Unsupported(f"cube root of the irrational {q}")
            scale, value = _cube_root_generator(q)
            name = _plain(value)
            candidates = [scale * value]

        generator_poly = _generator_minpoly(self, value, degree)
        embedding = numeric_value(value)
        generator = Generator(
            name=name,
            value=value,
            minpoly=generator_poly,
            embedding=embedding,
            radius=_isolation_radius(value, embedding),
        )
        tower = FieldTower(self.generators + (generator,))
        roots = [tower.element(candidate) for candidate in candidates]
        root = _closest(roots, near)
        logger.debug("adjoined %s to %s", name, self)
        return tower, root

    def adjoin_value(self, value):
        """Smallest supported extension of this tower containing ``value``"""
        value = sympy.sympify(value)
        if self.contains(value):
            return self
        minpoly = sympy.minimal_polynomial(value, MINPOLY_VAR, polys=True)
        target = numeric_value(value)
        if self.generators:
            _, factors = minpoly.set_domain(self.domain).factor_list()
            minpoly = min(
                (f for f, _ in factors),
                key=lambda f: abs(_numeric_horner(f, self, target)),
            )
        tower, _ = self.adjoin(minpoly, near=target)
        if not tower.contains(value):
            raise Unsupported(f"{value} is not in a supported radical tower")
        return tower

    def join(self, other):
        return _join(self, other)

    @classmethod
    def for_constants(cls, values):
        """Smallest tower built from radicals that contains every constant in ``values``"""
        tower = cls()
        for value in values:
            value = sympy.sympify(value)
            if not value.is_number or value.is_Rational or tower.contains(value):
                continue
            try:
                tower = tower.adjoin_value(value)
                continue
            except Unsupported:
                pass
            for atom in sorted(_radical_atoms(value), key=sympy.default_sort_key):
                tower = tower.adjoin_value(atom)
            if not tower.contains(value):
                raise Unsupported(f"constant {value} is outside supported towers")
        return tower

    def _over_self(self, p):
        if not isinstance(p, Poly):
            p = Poly.from_list(list(p), MINPOLY_VAR, domain=self.domain)
        if p.get_domain() != self.domain:
            p = p.set_domain(self.domain)
        return p

    def _roots_here(self, p):
        _, factors = p.factor_list()
        roots = []
        for f, _ in factors:
            if f.degree() == 1:
                a, b = f.rep.to_list()
                roots.append(FieldElement(self, -b / a))
        return roots


def tower_adjoin(tower, minpoly, near=None, irreducible=False):
    """``(tower, root)`` with a root of ``minpoly``; the tower grows only if it has to."""
    return tower.adjoin(minpoly, irreducible=irreducible, near=near)


@lru_cache(maxsize=None)
def _join(left, right):
    if left == right or not right.generators:
        return left
    if not left.generators:
        return right
    tower = left
    for generator in right.generators:
        tower = tower.adjoin_value(generator.value)
    return tower


def _generator_minpoly(tower, value, degree):
    coeffs = [1] + [0] * (degree - 1) + [-sympy.expand(value ** degree)]
    return Poly.from_list(coeffs, MINPOLY_VAR, domain=tower.domain)


def _square_root_generator(disc):
    """(scale, value) with sqrt(disc) = scale*value and value free of rational factors"""
    root = sympy.sqrt(disc)
    if disc.is_Rational:
        scale, value = root.as_coeff_Mul()
        return scale, value
    return sympy.Integer(1), root


def _cube_root_generator(q):
    root = sympy.real_root(q, 3)
    scale, value = root.as_coeff_Mul()
    if value.could_extract_minus_sign():
        scale, value = -scale, -value
    return scale, value


def _radical_atoms(value):
    atoms = {
        a for a in value.atoms(sympy.Pow)
        if a.exp.is_Rational and not a.exp.is_Integer
    }
    if value.has(I):
        atoms.add(I)
    return atoms


def _closest(roots, near):
    if near is None or len(roots) == 1:
        return roots[0]
    return min(roots, key=lambda r: abs(r.numeric() - near))


def _numeric_horner(p, tower, z):
    acc = 0j
    for c in p.rep.to_list():
        acc = acc * z + numeric_value(tower.domain.to_sympy(c))
    return acc


@dataclass(frozen=True, eq=False)
class FieldElement:
    """An exact element of a FieldTower"""

    tower: FieldTower
    rep: object

    @property
    def domain(self):
        return self.tower.domain

    @property
    def is_zero(self):
        return not self.rep

    @property
    def is_one(self):
        return self.rep == self.domain.one

    @property
    def is_rational(self):
        return self.to_sympy().is_Rational

    def __bool__(self):
        return not self.is_zero

    def lift(self, tower):
        if tower == self.tower:
            return self
        try:
            return FieldElement(tower, tower.domain.convert_from(self.rep, self.domain))
        except (CoercionFailed, NotAlgebraic):
            raise InvariantViolation(f"{self} does not lie in {tower}")

    def _pair(self, other):
        if isinstance(other, FieldElement):
            if other.tower == self.tower:
                return self, other
            tower = self.tower.join(other.tower)
            return self.lift(tower), other.lift(tower)
        if isinstance(other, (int, Fraction, sympy.Rational)):
            return self, self.tower.element(other)
        return None, None

    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, a.rep + b.rep)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, a.rep - b.rep)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, a.rep * b.rep)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __neg__(self):
        return FieldElement(self.tower, -self.rep)

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.one
        for _ in range(n):
            result = result * self
        return result

    def inverse(self):
        if self.is_zero:
            raise DivisionByZero("inverse of zero")
        return FieldElement(self.tower, self.domain.one / self.rep)

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.rep == b.rep

    __hash__ = None

    def to_sympy(self):
        return self.domain.to_sympy(self.rep)

    def numeric(self):
        return numeric_value(self.to_sympy())

    def as_rational(self):
        value = self.to_sympy()
        if not value.is_Rational:
            raise InvariantViolation(f"{self} is not rational")
        return value

    def conjugate(self):
        return self.tower.element(sympy.expand(sympy.conjugate(self.to_sympy())))

    def real_part(self):
        return self.tower.element(sympy.expand(sympy.re(self.to_sympy())))

    def imag_part(self):
        return self.tower.element(sympy.expand(sympy.im(self.to_sympy())))

    def factor_text(self):
        """
        (sign, text) for use as a coefficient in front of ``*``.

        Rationals come out bare when integral, in parentheses otherwise;
        irrational values are always parenthesized and carry sign '+'.
        """
        value = sympy.expand(self.to_sympy())
        if value.is_Rational:
            sign = "-" if value < 0 else "+"
            magnitude = abs(value)
            text = str(magnitude) if magnitude.is_Integer else f"({magnitude})"
            return sign, text
        return "+", format_number(value)

    def __str__(self):
        return format_number(self.to_sympy())

    def __repr__(self):
        return f"FieldElement({self}, {self.tower})"


def _plain(expr):
    return sympy.sstr(expr).replace("**", "^")


def _format_monomial(mono):
    factors = list(sympy.Mul.make_args(mono))
    parts = []
    if I in factors:
        factors.remove(I)
        roots = [f for f in factors if f.is_Pow and f.exp == Rational(1, 2) and f.base.is_Integer]
        if roots:
            factors.remove(roots[0])
            parts.append(f"sqrt({-roots[0].base})")
        else:
            parts.append("sqrt(-1)")
    parts.extend(_plain(f) for f in factors)
    return "*".join(parts)


def format_number(value):
    """
    Canonical text for an exact constant, e.g. ``(2 + (1/3)*sqrt(-3))``.
    Rationals are printed bare; anything else is parenthesized.
    """
    value = sympy.expand(sympy.sympify(value))
    if value.is_Rational:
        return str(value)
    terms = sympy.Add.make_args(value)
    constants = [term for term in terms if term.is_Rational]
    others = sorted((term for term in terms if not term.is_Rational), key=sympy.default_sort_key)
    pieces = []
    for term in constants + others:
        coeff, mono = term.as_coeff_Mul()
        if mono == 1:
            pieces.append(str(coeff))
            continue
        mono_text = _format_monomial(mono)
        sign = "-" if coeff < 0 else ""
        coeff = abs(coeff)
        if coeff == 1:
            pieces.append(f"{sign}{mono_text}")
        elif coeff.is_Integer:
            pieces.append(f"{sign}{coeff}*{mono_text}")
        else:
            pieces.append(f"{sign}({coeff})*{mono_text}")
    return "(" + join_signed(pieces) + ")"


def join_signed(pieces):
    """Join terms that may carry a leading '-' into 'a + b - c'"""
    if not pieces:
        return "0"
    text = pieces[0]
    for piece in pieces[1:]:
        if piece.startswith("-"):
            text += " - " + piece[1:]
        else:
            text += " + " + piece
    return text


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """A point of the projective line: a FieldElement, or infinity when ``value`` is None"""

    value: object = None

    @classmethod
    def finite(cls, value):
        return cls(value)

    @classmethod
    def infinity(cls):
        return cls(None)

    @property
    def is_infinite(self):
        return self.value is None

    @property
    def tower(self):
        return FieldTower() if self.is_infinite else self.value.tower

    def lift(self, tower):
        return self if self.is_infinite else ProjectivePoint(self.value.lift(tower))

    def numeric(self):
        return complex("inf") if self.is_infinite else self.value.numeric()

    def __eq__(self, other):
        if not isinstance(other, ProjectivePoint):
            return NotImplemented
        if self.is_infinite or other.is_infinite:
            return self.is_infinite and other.is_infinite
        return self.value == other.value

    __hash__ = None

    def __str__(self):
        return "oo" if self.is_infinite else str(self.value)

    def __repr__(self):
        return f"ProjectivePoint({self})"
