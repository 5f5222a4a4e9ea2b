"""
The cube-root branch.

The three roots of R (a quadratic gets infinity as its third) are rotated
by an order-3 Moebius map S. In the coordinate z = (t - alpha)/(t - beta)
through its fixed points, S is z -> omega*z and R becomes c(z^3 - K) up to
the factor (1 - z)^-3. The integrand becomes H(z) dz/(z^3 - K)^(1/3), and H
splits into eigencomponents H_k(z) = z^k phi_k(z^3). H_0 and H_2 integrate
along rational curves; H_1 lives on the genus-one curve y^3 = x(x - K) and
is the obstruction. At exponent 2/3 the roles move: H~_0 is the
obstruction and H~_1, H~_2 integrate rationally.

The cube root of c is kept out of the field. Everything is computed with
the radical-free numerators (alpha - beta) F(t(z))/(1 - z) and
(alpha - beta) F(t(z)), and c^(-1/3), c^(-2/3) are attached only to what is
reported.
"""
import logging
from dataclasses import dataclass

from sympy import Poly, Rational, Symbol

from .curves import second_kind_check
from .errors import InvariantViolation, Unsupported, UnsupportedExponent, UnsupportedRadicand
from .exprio import IntegrandSpec
from .fields import OMEGA, ProjectivePoint
from .moebius import cyclic_from_roots, fixed_points
from .radicals import RadicalScalar, ScaledFunction
from .rational import RationalFunction, _poly, format_polynomial, homogeneous_compose, poly_roots_in_supported_towers
from .report import DiagnosticReport, Obstruction, Reduction, Status

logger = logging.getLogger(__name__)

Z = Symbol("z")
X = Symbol("x")
W = Symbol("w")
U = Symbol("u")
S = Symbol("s")


def cubic_roots(R):
    """Roots of a quadratic or cubic radicand, with infinity as the third root of a quadratic"""
    if R.degree() not in (2, 3):
        raise UnsupportedRadicand(f"cube-root radicand {R.as_expr()} must have degree 2 or 3")
    roots, tower = poly_roots_in_supported_towers(R)
    if R.degree() == 2:
        roots.append(ProjectivePoint.infinity())
    return roots, tower


@dataclass(frozen=True, eq=False)
class CanonicalCubicForm:
    """``R(t(z)) (1 - z)^3 = c (z^3 - K)`` with ``t(z) = (alpha - beta z)/(1 - z)``, or ``R(alpha + z)`` when beta is infinite"""

    S: object
    alpha: ProjectivePoint
    beta: ProjectivePoint
    c: object
    K: object
    tower: object
    multiplier: object
    var: Symbol

    @property
    def difference(self):
        return self.alpha.value - self.beta.value

    @property
    def omega(self):
        return self.tower.element(OMEGA)

    def t_of_z(self):
        alpha = self.alpha.value
        if self.beta.is_infinite:
            return RationalFunction.polynomial([1, alpha], Z, self.tower)
        top = _poly([(-self.beta.value).rep, alpha.rep], Z, self.tower.domain)
        bottom = _poly([-self.tower.domain.one, self.tower.domain.one], Z, self.tower.domain)
        return RationalFunction.from_polys(top, bottom, self.tower)

    def z_of_t(self):
        t = RationalFunction.variable(self.var, self.tower)
        if self.beta.is_infinite:
            return t - self.alpha.value
        return (t - self.alpha.value) / (t - self.beta.value)

    def to_dict(self):
        return {
            "S": str(self.S),
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "c": str(self.c),
            "K": str(self.K),
            "multiplier": str(self.multiplier),
        }


def canonical_form(R, roots=None, swap=False):
    """
    Canonical form of a quadratic or cubic radicand. ``swap`` exchanges
    alpha and beta when both are finite, which replaces z by 1/z.
    """
    if roots is None:
        roots, _ = cubic_roots(R)
    S_map = cyclic_from_roots(roots)
    alpha, beta, tower = fixed_points(S_map)
    if swap and not beta.is_infinite:
        alpha, beta = beta, alpha
    tower = tower.adjoin_value(OMEGA)
    alpha, beta = alpha.lift(tower), beta.lift(tower)
    var = R.gen
    one = tower.domain.one

    if beta.is_infinite:
        P = RationalFunction.from_polys(R, Poly(1, var), tower).shift(alpha.value).rename(Z)
    else:
        top = _poly([(-beta.value).rep, alpha.value.rep], Z, tower.domain)
        bottom = _poly([-one, one], Z, tower.domain)
        P = RationalFunction.from_polys(homogeneous_compose(R, top, bottom, 3), _poly([one], Z, tower.domain), tower)
    if not (P.coefficient(1).is_zero and P.coefficient(2).is_zero):
        raise InvariantViolation(f"{R.as_expr()} in the fixed-point coordinate of {S_map} is {P}, not c(z^3 - K)")
    c = P.coefficient(3)
    K = -P.coefficient(0) / c
    multiplier = S_map.multiplier(alpha)

    logger.debug("canonical form of %s: S=%s alpha=%s beta=%s c=%s K=%s", R.as_expr(), S_map, alpha, beta, c, K)
    return CanonicalCubicForm(S_map, alpha, beta, c, K, tower, multiplier, var)


def build_H(F, cf):
    """``(alpha - beta) F(t(z))/(1 - z)``, or ``F(alpha + z)``; H itself is this times c^(-1/3)"""
    image = F.substitute(cf.t_of_z())
    if cf.beta.is_infinite:
        return image
    return image * cf.difference / RationalFunction.polynomial([-1, 1], Z, cf.tower)


def build_Htilde(F, cf):
    """``(alpha - beta) F(t(z))``, or ``F(alpha + z)``; H~ itself is this times c^(-2/3)"""
    image = F.substitute(cf.t_of_z())
    if cf.beta.is_infinite:
        return image
    return image * cf.difference


def eigen_project(H, k):
    """``(1/3)(H(z) + omega^-k H(omega z) + omega^-2k H(omega^2 z))``"""
    tower = H.tower.adjoin_value(OMEGA)
    omega = tower.element(OMEGA)
    H = H.lift(tower)
    total = H + H.scale_variable(omega) * omega ** (-k) + H.scale_variable(omega * omega) * omega ** (-2 * k)
    return total / 3


def extract_phi(Hk, k):
    """``phi`` with ``Hk(z) = z^k phi(z^3)``"""
    phi = Hk.power_section(3, X, shift=k)
    z = RationalFunction.variable(Hk.var, Hk.tower)
    if not phi.substitute(z ** 3) * z ** k == Hk:
        raise InvariantViolation(f"z^{k}*phi(z^3) does not reproduce {Hk}")
    return phi


@dataclass(frozen=True, eq=False)
class EigenComponents:
    H0: RationalFunction
    H1: RationalFunction
    H2: RationalFunction
    phi0: RationalFunction
    phi1: RationalFunction
    phi2: RationalFunction

    def H(self, k):
        return (self.H0, self.H1, self.H2)[k]

    def phi(self, k):
        return (self.phi0, self.phi1, self.phi2)[k]


def eigencomponents(H):
    parts = [eigen_project(H, k) for k in range(3)]
    if not parts[0] + parts[1] + parts[2] == H:
        raise InvariantViolation(f"eigencomponents of {H} do not sum to it")
    phis = [extract_phi(part, k) for k, part in enumerate(parts)]
    logger.debug("eigencomponents: %s", ", ".join("0" if p.is_zero else str(p) for p in parts))
    return EigenComponents(*parts, *phis)


@dataclass(frozen=True, eq=False)
class CubeReduction:
    """
    One rational integral of the cube-root branch.

    ``integrand`` is the reported integral in ``variable``; ``rational`` is
    the same integral in ``variable`` divided by ``scale``, whose value in
    t and y is ``rule``.
    """

    name: str
    variable: Symbol
    integrand: ScaledFunction
    rational: RationalFunction
    rule: object
    scale: RadicalScalar

    def back_text(self):
        if self.scale == 1:
            return f"{self.variable} = {self.rule}"
        sign, text = self.scale.factor_text()
        sign = "-" if sign == "-" else ""
        return f"{self.variable} = {sign}{text}*({self.rule})"

    def as_step(self):
        return Reduction(
            name=self.name,
            integrand=str(self.integrand),
            variable=str(self.variable),
            back=self.back_text(),
            rational=self.rational,
            rule=self.rule,
        )


def _rules(cf, field):
    """Radical-free back rules c^(1/3) w, c^(1/3) u and s/c^(1/3) as elements of K(t)[y]/(y^3 - R)"""
    t = RationalFunction.variable(field.var, cf.tower)
    alpha = cf.alpha.value
    if cf.beta.is_infinite:
        w = field.monomial(1, (t - alpha).inverse())
        u = field.monomial(1, 1)
        s = field.monomial(2, (t - alpha) / field.radicand)
    else:
        difference = cf.difference
        w = field.monomial(1, difference / (t - alpha))
        u = field.monomial(1, difference / (t - cf.beta.value))
        s = field.monomial(2, (t - alpha) / (field.radicand * difference))
    return w, u, s


def reduce_13(components, cf, field):
    """The J0 and J2 integrals of exponent 1/3, skipping zero components"""
    c, K = cf.c, cf.K
    scale = RadicalScalar.root(c, 3, -1)
    rule_w, rule_u, _ = _rules(cf, field)
    reductions = []

    if not components.phi0.is_zero:
        w = RationalFunction.variable(W, cf.tower)
        cube = w ** 3
        rational = components.phi0.substitute(c * K / (c - cube)) * w / (c - cube)
        reported = components.phi0.substitute(K / (1 - cube)) * w / (1 - cube)
        reductions.append(CubeReduction("J0", W, ScaledFunction(scale, reported), rational, rule_w, scale))

    if not components.phi2.is_zero:
        u = RationalFunction.variable(U, cf.tower)
        cube = u ** 3
        rational = components.phi2.substitute((cube + c * K) / c) * u / c
        reported = components.phi2.substitute(cube + K) * u
        reductions.append(CubeReduction("J2", U, ScaledFunction(scale, reported), rational, rule_u, scale))
    return reductions


def reduce_23(components, cf, field):
    """The J1 and J2 integrals of exponent 2/3, skipping zero components"""
    c, K = cf.c, cf.K
    scale = RadicalScalar.root(c, 3, -2)
    _, rule_u, rule_s = _rules(cf, field)
    reductions = []

    if not components.phi1.is_zero:
        s = RationalFunction.variable(S, cf.tower)
        cube = s ** 3
        rational = -(components.phi1.substitute(c * K * cube / (c * cube - 1)) * s / (c * cube - 1))
        reported = -(components.phi1.substitute(K * cube / (cube - 1)) * s / (cube - 1))
        reductions.append(CubeReduction(
            "J1", S, ScaledFunction(scale, reported), rational, rule_s, RadicalScalar.root(c, 3, 1)))

    if not components.phi2.is_zero:
        u = RationalFunction.variable(U, cf.tower)
        cube = u ** 3
        rational = components.phi2.substitute((cube + c * K) / c) / c
        reported = components.phi2.substitute(cube + K)
        reductions.append(CubeReduction(
            "J2", U, ScaledFunction(scale, reported), rational, rule_u, RadicalScalar.root(c, 3, -1)))
    return reductions


def obstruction_residual(component, cf, exponent):
    """The t-integrand whose z-form is exactly the obstructive component"""
    z_of_t = cf.z_of_t()
    image = component.substitute(z_of_t)
    if cf.beta.is_infinite:
        return image
    if exponent == Rational(1, 3):
        t = RationalFunction.variable(cf.var, cf.tower)
        return image / (t - cf.beta.value)
    return image / cf.difference


def obstruction_text(phi, cf, power):
    """``scalar*Integral(phi(x)/(x*(x - K))^(power/3), x)`` with phi normalized to a monic numerator"""
    lead = phi.leading_coefficient()
    phi = phi / lead
    scalar = RadicalScalar.of(lead / 3) * RadicalScalar.root(cf.c, 3, -power)
    sign, text = scalar.factor_text()
    head = ("-" if sign == "-" else "") + ("" if text == "1" else f"{text}*")

    x = RationalFunction.variable(X, cf.tower)
    curve = f"(x*({x - cf.K}))^({power}/3)"
    num = format_polynomial(phi.num, phi.tower)
    if " " in num:
        num = f"({num})"
    if phi.is_polynomial:
        body = f"{num}/{curve}"
    else:
        den = format_polynomial(phi.den, phi.tower)
        if " " in den:
            den = f"({den})"
        body = f"{num}/({den}*{curve})"
    return f"{head}Integral({body}, x)"


def _certify(phi, cf, power):
    try:
        certificate = second_kind_check(phi, cf.K, power=power)
    except Unsupported as e:
        logger.info("residues of %s not computed: %s", phi, e)
        return None, f"residues not computed: {e}"
    return certificate, ""


def cube_diagnose(spec, cf=None):
    """The cube-root test for ``spec`` with reductions of the non-obstructive components"""
    if spec.exponent not in (Rational(1, 3), Rational(2, 3)):
        raise UnsupportedExponent(f"exponent {spec.exponent} is not 1/3 or 2/3")
    cf = cf or canonical_form(spec.R)
    field = spec.function_field()
    power = 1 if spec.exponent == Rational(1, 3) else 2

    if power == 1:
        H = build_H(spec.F, cf)
        obstructive, names = 1, ("H0", "H1", "H2")
    else:
        H = build_Htilde(spec.F, cf)
        obstructive, names = 0, ("Htilde0", "Htilde1", "Htilde2")
    components = eigencomponents(H)
    scale = RadicalScalar.root(cf.c, 3, -power)
    projections = tuple(
        (name, ScaledFunction(scale, components.H(k))) for k, name in enumerate(names)
    ) + tuple(
        (f"phi{k}" if power == 1 else f"phitilde{k}", ScaledFunction(scale, components.phi(k)))
        for k in range(3)
    )

    if power == 1:
        reductions = reduce_13(components, cf, field)
    else:
        reductions = reduce_23(components, cf, field)

    witness = components.H(obstructive)
    message = ""
    if witness.is_zero:
        status, obstruction = Status.ELEMENTARY, None
    else:
        phi = components.phi(obstructive)
        certificate, message = _certify(phi, cf, power)
        certified = certificate is not None and certificate.is_second_kind
        status = Status.CERTIFIED if certified else Status.INCONCLUSIVE
        obstruction = Obstruction(
            witness=str(ScaledFunction(scale, witness)),
            phi=str(ScaledFunction(scale, phi)),
            differential=obstruction_text(phi, cf, power),
            certificate=certificate,
            residual=obstruction_residual(witness, cf, spec.exponent),
        )
    logger.debug("cube-root diagnosis of %s: %s", spec, status.value)
    return DiagnosticReport(
        status=status,
        integrand=str(spec),
        exponent=spec.exponent,
        canonical=cf,
        projections=projections,
        reductions=tuple(r.as_step() for r in reductions),
        obstruction=obstruction,
        message=message,
    )


def field_split(G0, G1, G2, R, var=None, text=""):
    """
    ``integral (G0 + G1 y + G2 y^2) dt`` over y^3 = R as a rational integral
    and the integrands ``G2 R/R^(1/3)`` and ``G1 R/R^(2/3)``.
    """
    var = var or R.gen
    radicand = RationalFunction.from_polys(R, Poly(1, R.gen))
    return (
        G0,
        IntegrandSpec(G2 * radicand, R, Rational(1, 3), var, text),
        IntegrandSpec(G1 * radicand, R, Rational(2, 3), var, text),
    )
