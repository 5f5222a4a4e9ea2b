"""
The square-root branch.

The four roots of R (a cubic gets infinity as its fourth root) are paired
in three ways by the involutions S1, S2, S3, which together with the
identity form a Klein four-group. F splits into four character
projections. F0 is the obstruction; every other projection changes sign
under some involution S, and the substitution x = ((t - alpha)/(t - beta))^2
through the fixed points of S turns its integral into one over the conic
w^2 = Q(x). The Euler substitution then makes that integral rational.
"""
import logging
from dataclasses import dataclass

from sympy import Poly, Rational, Symbol

from .errors import InvariantViolation, NotAntiInvariant, UnsupportedRadicand
from .fields import ProjectivePoint
from .funcfield import RadicalFunctionField
from .moebius import fixed_points, involution_from_pairing
from .radicals import RadicalScalar, ScaledFunction
from .rational import (
    RationalFunction,
    _poly,
    format_polynomial,
    homogeneous_compose,
    poly_roots_in_supported_towers,
    ratfun_compose_moebius,
)
from .report import DiagnosticReport, Obstruction, Reduction, Status

logger = logging.getLogger(__name__)

X = Symbol("x")
U = Symbol("u")
V = Symbol("v")

# signs of f, f o S1, f o S2, f o S3 in F0, F1, F2, F3
CHARACTERS = (
    (1, 1, 1, 1),
    (1, 1, -1, -1),
    (1, -1, 1, -1),
    (1, -1, -1, 1),
)

# S1 = (r1 r2 | r3 r4), S2 = (r1 r3 | r2 r4), S3 = (r1 r4 | r2 r3)
PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def quartic_roots(R):
    """Roots of a cubic or quartic radicand, with infinity as the fourth root of a cubic"""
    if R.degree() not in (3, 4):
        raise UnsupportedRadicand(f"square-root radicand {R.as_expr()} must have degree 3 or 4")
    roots, tower = poly_roots_in_supported_towers(R)
    if R.degree() == 3:
        roots.append(ProjectivePoint.infinity())
    return roots, tower


def klein_involutions(roots):
    return tuple(
        involution_from_pairing((roots[i], roots[j]), (roots[k], roots[l]))
        for (i, j), (k, l) in PAIRINGS
    )


@dataclass(frozen=True, eq=False)
class V4Projections:
    F0: RationalFunction
    F1: RationalFunction
    F2: RationalFunction
    F3: RationalFunction
    involutions: tuple

    def component(self, j):
        return (self.F0, self.F1, self.F2, self.F3)[j]

    def total(self):
        return self.F0 + self.F1 + self.F2 + self.F3

    def check(self, F):
        """Raise InvariantViolation unless the projections sum to F and carry their characters"""
        if not self.total() == F:
            raise InvariantViolation(f"projections of {F} do not sum to it")
        for j in (1, 2, 3):
            Fj = self.component(j)
            for k, S in enumerate(self.involutions, start=1):
                expected = Fj if k == j else -Fj
                if not ratfun_compose_moebius(Fj, S) == expected:
                    raise InvariantViolation(f"F{j} has the wrong character under S{k}")

    def items(self):
        return tuple((f"F{j}", self.component(j)) for j in range(4))


def _check_klein_group(maps):
    S1, S2, S3 = maps
    for k, S in enumerate(maps, start=1):
        if not S.compose(S).is_identity():
            raise InvariantViolation(f"S{k} = {S} is not an involution")
    if not S1.compose(S2) == S3:
        raise InvariantViolation("S1 o S2 != S3: the maps do not form a Klein four-group")


def v4_projections(F, S1, S2, S3):
    maps = (S1, S2, S3)
    _check_klein_group(maps)
    images = [F] + [ratfun_compose_moebius(F, S) for S in maps]
    parts = []
    for signs in CHARACTERS:
        total = RationalFunction.constant(0, F.var, F.tower)
        for sign, image in zip(signs, images):
            total = total + image * sign
        parts.append(total / 4)
    projections = V4Projections(*parts, maps)
    logger.debug(
        "projections of %s: %s",
        F, ", ".join(f"{name}={'0' if f.is_zero else f}" for name, f in projections.items()),
    )
    return projections


def pick_anti_involution(Fj, j, involutions):
    """
    Index k != j with Fj o Sk = -Fj, preferring an Sk that fixes infinity,
    then the lower index.
    """
    candidates = [
        k for k in (1, 2, 3)
        if k != j and ratfun_compose_moebius(Fj, involutions[k - 1]) == -Fj
    ]
    if not candidates:
        raise NotAntiInvariant(f"F{j} = {Fj} is not odd under any involution")
    for k in candidates:
        if involutions[k - 1].C.is_zero:
            return k
    return candidates[0]


@dataclass(frozen=True, eq=False)
class SqrtReduction:
    """
    ``integral Fj(t) dt/sqrt(R(t)) = prefactor * integral G(x) dx/sqrt(Q(x))``
    under ``x = back(t)``, with ``Q = (x - a)(x - b)`` monic and ``C`` the
    leading coefficient of R in the fixed-point coordinate.
    """

    S: object
    alpha: ProjectivePoint
    beta: ProjectivePoint
    prefactor: RadicalScalar
    G: RationalFunction
    Q: RationalFunction
    C: object
    a: object
    b: object
    back: RationalFunction
    label: str = ""

    @property
    def var(self):
        return self.back.var

    @property
    def difference(self):
        return self.alpha.value - self.beta.value

    def integrand_text(self):
        return f"{ScaledFunction(self.prefactor, self.G)}/({self.Q})^(1/2)"

    def back_text(self):
        return f"x = {self.back}"

    def pullback(self, field):
        """``prefactor * G(x) dx/sqrt(Q(x))`` written in t, as an element of K(t)[y]/(y^2 - R)"""
        x_of_t = self.back
        integrand = self.G.substitute(x_of_t) * x_of_t.diff()
        if self.beta.is_infinite:
            coefficient = integrand / 2
        else:
            t = RationalFunction.variable(self.var, x_of_t.tower)
            coefficient = integrand * (t - self.beta.value) ** 2 / (self.difference * 2)
        return field.monomial(-1, coefficient)


def _u_value(point, alpha, beta, tower):
    if beta.is_infinite:
        return point.value - alpha.value
    if point.is_infinite:
        return tower.one
    return (point.value - alpha.value) / (point.value - beta.value)


def _check_permutes(S, roots):
    for r in roots:
        image = S(r)
        if not any(image == q for q in roots):
            raise InvariantViolation(f"{S} sends the root {r} to {image}, which is not a root")


def goursat_reduce(Fj, R, S, roots=None, label=""):
    """Reduce ``integral Fj dt/sqrt(R)`` for ``Fj o S = -Fj`` to an integral over a conic"""
    if not ratfun_compose_moebius(Fj, S) == -Fj:
        raise NotAntiInvariant(f"{Fj} is not odd under {S}")
    if roots is None:
        roots, _ = quartic_roots(R)
    _check_permutes(S, roots)

    alpha, beta, tower = fixed_points(S)
    tower = tower.join(Fj.tower)
    var = R.gen
    one = tower.domain.one
    alpha_value = alpha.value.lift(tower)
    t = RationalFunction.variable(var, tower)

    if beta.is_infinite:
        t_of_u = RationalFunction.polynomial([1, alpha_value], U, tower)
        P = RationalFunction.from_polys(R, Poly(1, var), tower).shift(alpha_value).rename(U)
        back = (t - alpha_value) ** 2
    else:
        beta_value = beta.value.lift(tower)
        top = _poly([(-beta_value).rep, alpha_value.rep], U, tower.domain)
        bottom = _poly([-one, one], U, tower.domain)
        t_of_u = RationalFunction.from_polys(top, bottom, tower)
        P = RationalFunction.from_polys(
            homogeneous_compose(R, top, bottom, 4), _poly([one], U, tower.domain), tower)
        back = ((t - alpha_value) / (t - beta_value)) ** 2

    try:
        even = P.power_section(2, X)
        G = Fj.substitute(t_of_u).power_section(2, X, shift=1)
    except InvariantViolation as e:
        raise InvariantViolation(f"{S} does not act as u -> -u in its fixed-point coordinate: {e}")
    C = P.coefficient(4)
    Q = even / C

    squares = []
    for r in roots:
        square = _u_value(r, alpha, beta, tower) ** 2
        if not any(square == s for s in squares):
            squares.append(square)
    if len(squares) != 2:
        raise InvariantViolation(f"roots of {R.as_expr()} give {len(squares)} values of u^2, expected 2")
    a, b = squares
    if not (Q.coefficient(1) == -(a + b) and Q.coefficient(0) == a * b):
        raise InvariantViolation(f"Q = {Q} does not vanish at {a} and {b}")

    if beta.is_infinite:
        prefactor = RadicalScalar.of(Rational(1, 2))
    else:
        prefactor = RadicalScalar.of((alpha_value - beta.value) / 2)
    prefactor = prefactor * RadicalScalar.root(C, 2, -1)

    logger.debug("reduced %s with S=%s alpha=%s beta=%s: G=%s Q=%s", Fj, S, alpha, beta, G, Q)
    return SqrtReduction(S, alpha, beta, prefactor, G, Q, C, a, b, back, label)


@dataclass(frozen=True, eq=False)
class EulerForm:
    """``integral W(v) dv`` with ``v = back`` in K(t)[y]/(y^2 - R)"""

    W: RationalFunction
    back: object

    def back_text(self):
        return f"v = {self.back}"


def euler_rationalize(reduction, field):
    """
    Rationalize the conic integral by ``sqrt(C (x - a)(x - b)) = v (x - a)``,
    so ``x = (C b - a v^2)/(C - v^2)`` and ``dx/sqrt(C Q) = 2 dv/(C - v^2)``.
    """
    C, a, b = reduction.C, reduction.a, reduction.b
    tower = reduction.G.tower.join(C.tower).join(a.tower).join(b.tower)
    v_squared = RationalFunction.polynomial([1, 0, 0], V, tower)
    denominator = C - v_squared
    x_of_v = (C * b - a * v_squared) / denominator
    W = reduction.G.substitute(x_of_v) / denominator

    t = RationalFunction.variable(field.var, tower)
    alpha = reduction.alpha.value
    if reduction.beta.is_infinite:
        back = field.monomial(1, ((t - alpha) ** 2 - a).inverse())
    else:
        beta = reduction.beta.value
        difference = reduction.difference
        W = W * difference
        back = field.monomial(1, difference ** 2 / ((t - alpha) ** 2 - (t - beta) ** 2 * a))
    return EulerForm(W, back)


def sqrt_diagnose(F, R, field=None, label=None):
    """Goursat's test for ``integral F dt/sqrt(R)`` with the reductions of every odd projection"""
    roots, tower = quartic_roots(R)
    field = field or RadicalFunctionField(RationalFunction.from_polys(R, Poly(1, R.gen)), 2)
    label = label or f"{F}/({format_polynomial(R, tower)})^(1/2)"
    involutions = klein_involutions(roots)
    logger.debug("roots %s give involutions %s", [str(r) for r in roots], [str(S) for S in involutions])

    projections = v4_projections(F, *involutions)
    projections.check(F)

    reductions = []
    for j in (1, 2, 3):
        Fj = projections.component(j)
        if Fj.is_zero:
            continue
        k = pick_anti_involution(Fj, j, involutions)
        reduction = goursat_reduce(Fj, R, involutions[k - 1], roots, label=f"F{j}")
        euler = euler_rationalize(reduction, field)
        reductions.append(Reduction(
            name=f"F{j}",
            integrand=reduction.integrand_text(),
            variable="x",
            back=reduction.back_text(),
            rational=euler.W,
            rule=euler.back,
            rationalized=(str(euler.W), "v", euler.back_text()),
        ))

    F0 = projections.F0
    if F0.is_zero:
        status, obstruction = Status.ELEMENTARY, None
    else:
        # the V4 test is only sufficient at exponent 1/2
        status = Status.INCONCLUSIVE
        numerator = str(F0)
        if " " in numerator or "/" in numerator:
            numerator = f"({numerator})"
        obstruction = Obstruction(
            witness=str(F0),
            differential=f"Integral({numerator}/{field.radical_text(1)}, {R.gen})",
            residual=F0,
        )
    logger.debug("square-root diagnosis of %s: %s", label, status.value)
    return DiagnosticReport(
        status=status,
        integrand=label,
        exponent=Rational(1, 2),
        involutions=tuple((f"S{k}", S) for k, S in enumerate(involutions, start=1)),
        projections=projections.items(),
        reductions=tuple(reductions),
        obstruction=obstruction,
    )
