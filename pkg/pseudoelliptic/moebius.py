"""
Moebius transformations t -> (A t + B)/(C t + D) over a FieldTower: the
involutions pairing the roots of a quartic, the order-3 rotation of the
roots of a cubic, and fixed points.
"""
import logging
from dataclasses import dataclass

import sympy
from sympy import Symbol

from .errors import DegenerateMap, DegeneratePairing, InvariantViolation
from .fields import FieldElement, FieldTower, ProjectivePoint
from .rational import RationalFunction, _poly

logger = logging.getLogger(__name__)

_FIXED_POINT_VAR = Symbol("x")
_SIGN_DIGITS = 60


def _sign(value):
    """Sign of a real algebraic number; zero is decided exactly"""
    value = sympy.expand(value)
    if value.is_zero is None:
        value = sympy.simplify(value)
    if value.is_zero:
        return 0
    return 1 if value.evalf(_SIGN_DIGITS) > 0 else -1


def _as_elements(values, tower=None):
    elements = [v for v in values if isinstance(v, FieldElement)]
    for element in elements:
        tower = element.tower if tower is None else tower.join(element.tower)
    tower = tower or FieldTower()
    return [tower.element(v) for v in values], tower


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    A: FieldElement
    B: FieldElement
    C: FieldElement
    D: FieldElement

    @classmethod
    def of(cls, A, B, C, D, tower=None):
        """Normalized map: the first nonzero of A, C is 1"""
        (A, B, C, D), tower = _as_elements((A, B, C, D), tower)
        if (A * D - B * C).is_zero:
            raise DegenerateMap(f"singular matrix [[{A}, {B}], [{C}, {D}]]")
        lead = A if not A.is_zero else C
        return cls(A / lead, B / lead, C / lead, D / lead)

    @classmethod
    def identity(cls, tower=None):
        return cls.of(1, 0, 0, 1, tower)

    @property
    def tower(self):
        return self.A.tower

    @property
    def det(self):
        return self.A * self.D - self.B * self.C

    def lift(self, tower):
        return MoebiusMap(*(x.lift(tower) for x in (self.A, self.B, self.C, self.D)))

    def __call__(self, point):
        if not isinstance(point, ProjectivePoint):
            point = ProjectivePoint.finite(self.tower.element(point))
        if point.is_infinite:
            if self.C.is_zero:
                return ProjectivePoint.infinity()
            return ProjectivePoint.finite(self.A / self.C)
        x = point.value
        den = self.C * x + self.D
        if den.is_zero:
            return ProjectivePoint.infinity()
        return ProjectivePoint.finite((self.A * x + self.B) / den)

    def compose(self, other):
        """``self o other``: apply ``other`` first"""
        a, b, c, d = self.A, self.B, self.C, self.D
        e, f, g, h = other.A, other.B, other.C, other.D
        return MoebiusMap.of(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inverse(self):
        return MoebiusMap.of(self.D, -self.B, -self.C, self.A)

    def power(self, n):
        result = MoebiusMap.identity(self.tower)
        step = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            result = result.compose(step)
        return result

    def is_identity(self):
        return self.B.is_zero and self.C.is_zero and self.A == self.D

    def order(self, limit=12):
        """Smallest n <= limit with self^n = id, or None"""
        current = self
        for n in range(1, limit + 1):
            if current.is_identity():
                return n
            current = current.compose(self)
        return None

    def multiplier(self, point):
        """Derivative of the map at a finite fixed point; reciprocal of the one at the other fixed point"""
        if point.is_infinite:
            if not self.C.is_zero:
                raise InvariantViolation("infinity is not a fixed point")
            return self.D / self.A
        return self.det / (self.C * point.value + self.D) ** 2

    def as_function(self, var, tower=None):
        tower = self.tower if tower is None else tower.join(self.tower)
        num = RationalFunction.polynomial([self.A, self.B], var, tower)
        den = RationalFunction.polynomial([self.C, self.D], var, tower)
        return num / den

    def __eq__(self, other):
        if not isinstance(other, MoebiusMap):
            return NotImplemented
        return all(x == y for x, y in zip(
            (self.A, self.B, self.C, self.D), (other.A, other.B, other.C, other.D)))

    __hash__ = None

    def __str__(self):
        var = Symbol("t")
        return str(self.as_function(var))

    def __repr__(self):
        return f"MoebiusMap({self})"


def _check_distinct(points):
    for i, p in enumerate(points):
        for q in points[i + 1:]:
            if p == q:
                raise DegeneratePairing(f"repeated point {p}")


def involution_from_pairing(pair1, pair2):
    """The unique involution swapping the points of ``pair1`` and of ``pair2``"""
    (a, b), (c, d) = pair1, pair2
    _check_distinct([a, b, c, d])
    if a.is_infinite:
        return involution_from_pairing((c, d), (b, a))
    if b.is_infinite:
        return involution_from_pairing((c, d), (a, b))
    if c.is_infinite:
        return involution_from_pairing((a, b), (d, c))
    if d.is_infinite:
        a, b, c = a.value, b.value, c.value
        return MoebiusMap.of(c, a * b - c * (a + b), 1, -c)
    a, b, c, d = a.value, b.value, c.value, d.value
    ab, cd = a * b, c * d
    return MoebiusMap.of(ab - cd, (a + b) * cd - (c + d) * ab, (a + b) - (c + d), cd - ab)


def _to_zero_one_infinity(z1, z2, z3):
    """Map sending z1, z2, z3 to 0, 1, oo"""
    return MoebiusMap.of(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))


def cyclic_from_roots(roots):
    """The order-3 map r1 -> r2 -> r3 -> r1"""
    points = list(roots)
    if len(points) != 3:
        raise DegeneratePairing(f"expected three roots, got {len(points)}")
    _check_distinct(points)
    infinite = [i for i, p in enumerate(points) if p.is_infinite]
    if infinite:
        i = infinite[0]
        points = points[i + 1:] + points[:i + 1]
        r1, r2 = points[0].value, points[1].value
        return MoebiusMap.of(r1, -(r1 * r1 - r1 * r2 + r2 * r2), 1, -r2)
    r0, r1, r2 = (p.value for p in points)
    first = _to_zero_one_infinity(r0, r1, r2)
    second = _to_zero_one_infinity(r1, r2, r0)
    return second.inverse().compose(first)


def fixed_points(moebius):
    """
    ``(alpha, beta, tower)`` for a non-identity, non-parabolic map.

    ``beta`` is infinity whenever infinity is fixed. Otherwise order-3 maps
    take as ``alpha`` the fixed point with the larger imaginary part (ties by
    real part), and every other map the one with the smaller real part (ties
    by imaginary part).
    """
    if moebius.is_identity():
        raise DegenerateMap("identity has no isolated fixed points")
    A, B, C, D = moebius.A, moebius.B, moebius.C, moebius.D
    tower = moebius.tower
    if C.is_zero:
        if (D - A).is_zero:
            raise DegenerateMap("translation fixes only infinity")
        alpha = ProjectivePoint.finite(B / (D - A))
        return alpha, ProjectivePoint.infinity(), tower
    quadratic = _poly([C.rep, (D - A).rep, (-B).rep], _FIXED_POINT_VAR, tower.domain)
    if ((D - A) * (D - A) + 4 * B * C).is_zero:
        raise DegenerateMap("parabolic map has a single fixed point")
    tower, r1 = tower.adjoin(quadratic)
    r2 = (A - D) / C - r1
    r1, r2 = r1.lift(tower), r2.lift(tower)

    gap = (r1 - r2).to_sympy()
    re_sign, im_sign = _sign(sympy.re(gap)), _sign(sympy.im(gap))
    if moebius.order(limit=3) == 3:
        r1_first = im_sign > 0 or (im_sign == 0 and re_sign < 0)
    else:
        r1_first = re_sign < 0 or (re_sign == 0 and im_sign < 0)
    alpha, beta = (r1, r2) if r1_first else (r2, r1)
    logger.debug("fixed points of %s: alpha=%s beta=%s", moebius, alpha, beta)
    return ProjectivePoint.finite(alpha), ProjectivePoint.finite(beta), tower
