"""
Unit tests for the cube-root branch (pseudoelliptic/cube_goursat.py)
Tests canonical forms, eigencomponents, the rational reductions and the verdicts
"""
import unittest
import random
import sys
import os

import pytest
from sympy import I, Poly, Rational, Symbol, sqrt

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from pseudoelliptic.cube_goursat import (
    build_H,
    build_Htilde,
    canonical_form,
    cube_diagnose,
    eigen_project,
    eigencomponents,
    extract_phi,
    field_split,
    obstruction_text,
)
from pseudoelliptic.errors import InvariantViolation, UnsupportedRadicand
from pseudoelliptic.exprio import parse_integrand
from pseudoelliptic.fields import OMEGA, FieldTower
from pseudoelliptic.funcfield import RadicalFunctionField
from pseudoelliptic.moebius import MoebiusMap
from pseudoelliptic.rational import RationalFunction
from pseudoelliptic.report import Status

t = Symbol("t")
x = Symbol("x")
z = Symbol("z")
w = Symbol("w")
u = Symbol("u")
s = Symbol("s")


def rf(expr, var=t):
    return RationalFunction.from_expr(expr, var)


class TestCanonicalForm(unittest.TestCase):
    """Test R(t(z)) (1 - z)^3 = c (z^3 - K)"""

    def test_pure_cubic(self):
        """Test that t^3 - 1 has S = omega t, alpha = 0, beta = oo and c = K = 1"""
        cf = canonical_form(Poly(t ** 3 - 1, t))
        self.assertEqual(cf.alpha.value, 0)
        self.assertTrue(cf.beta.is_infinite)
        self.assertEqual(cf.c, 1)
        self.assertEqual(cf.K, 1)
        self.assertEqual(cf.multiplier, cf.omega)
        self.assertTrue(cf.tower.contains(sqrt(-3)))

    def test_quadratic(self):
        """Test that t^2 - 1 has S = (t - 3)/(t + 1), alpha = i sqrt(3), c = 4 and K = 1"""
        cf = canonical_form(Poly(t ** 2 - 1, t))
        self.assertEqual(cf.S, MoebiusMap.of(1, -3, 1, 1))
        self.assertEqual(cf.alpha.value, cf.tower.element(I * sqrt(3)))
        self.assertEqual(cf.c, 4)
        self.assertEqual(cf.K, 1)
        self.assertEqual(cf.to_dict()["c"], "4")

    def test_three_rational_roots(self):
        """Test that (t - 1)(t - 2)(t - 3) becomes c (z^3 - K) with K = -1"""
        R = Poly((t - 1) * (t - 2) * (t - 3), t)
        cf = canonical_form(R)
        self.assertEqual(cf.S, MoebiusMap.of(5, -13, 3, -7))
        self.assertEqual(cf.K, -1)
        Z = RationalFunction.variable(z, cf.tower)
        image = rf(R.as_expr()).substitute(cf.t_of_z()) * (1 - Z) ** 3
        self.assertEqual(image, (Z ** 3 - cf.K) * cf.c)

    def test_coordinate_round_trip(self):
        """Test that z(t(z)) = z"""
        cf = canonical_form(Poly((t - 1) * (t - 2) * (t - 3), t))
        self.assertEqual(cf.z_of_t().substitute(cf.t_of_z()), RationalFunction.variable(z, cf.tower))

    def test_swap_exchanges_fixed_points(self):
        """Test that swap exchanges alpha and beta and inverts the multiplier"""
        R = Poly((t - 1) * (t - 2) * (t - 3), t)
        cf = canonical_form(R)
        swapped = canonical_form(R, swap=True)
        self.assertEqual(swapped.alpha, cf.beta)
        self.assertEqual(swapped.beta, cf.alpha)
        self.assertEqual(swapped.multiplier * cf.multiplier, 1)

    def test_wrong_degree(self):
        """Test that a quartic radicand is refused"""
        with self.assertRaises(UnsupportedRadicand):
            canonical_form(Poly(t ** 4 - 1, t))


class TestEigencomponents(unittest.TestCase):
    """Test H, its eigencomponents and phi"""

    def test_build_H_for_quadratic(self):
        """Test that F = 1 over t^2 - 1 gives 2 i sqrt(3)/(1 - z)"""
        cf = canonical_form(Poly(t ** 2 - 1, t))
        self.assertEqual(build_H(rf(1), cf), rf(2 * sqrt(3) * I / (1 - z), z))
        self.assertEqual(build_Htilde(rf(1), cf), rf(2 * sqrt(3) * I, z))

    def test_build_H_for_pure_cubic(self):
        """Test that beta = oo makes H = F(z)"""
        cf = canonical_form(Poly(t ** 3 - 1, t))
        self.assertEqual(build_H(rf(t ** 2 + t), cf), rf(z ** 2 + z, z))

    def test_components_of_mixed_numerator(self):
        """Test that 1 + 5z^2 - 7z/(z^3 + 1) splits by powers of z"""
        H = rf(1 + 5 * z ** 2 - 7 * z / (z ** 3 + 1), z)
        components = eigencomponents(H)
        self.assertEqual(components.H0, 1)
        self.assertEqual(components.H1, rf(-7 * z / (z ** 3 + 1), z))
        self.assertEqual(components.H2, rf(5 * z ** 2, z))
        self.assertEqual(components.phi1, rf(-7 / (x + 1), x))
        self.assertEqual(components.phi2, 5)

    def test_geometric_split(self):
        """Test that 1/(1 - z) = (1 + z + z^2)/(1 - z^3)"""
        components = eigencomponents(rf(1 / (1 - z), z))
        for k in range(3):
            self.assertEqual(components.H(k), rf(z ** k / (1 - z ** 3), z))
            self.assertEqual(components.phi(k), rf(1 / (1 - x), x))

    def test_extract_phi(self):
        """Test that z^2/(z^3 + 2) is z^2 phi(z^3) with phi = 1/(x + 2)"""
        self.assertEqual(extract_phi(rf(z ** 2 / (z ** 3 + 2), z), 2), rf(1 / (x + 2), x))

    def test_extract_phi_wrong_shape(self):
        """Test that z is not z^0 phi(z^3)"""
        with self.assertRaises(InvariantViolation):
            extract_phi(rf(z, z), 0)

    @pytest.mark.slow
    def test_projection_algebra(self):
        """Test that the projections are idempotent, orthogonal and sum to the identity on 100 functions"""
        rng = random.Random(3301)
        tower = FieldTower().adjoin_value(OMEGA)
        for _ in range(100):
            num = sum(rng.randint(-3, 3) * z ** k for k in range(4))
            den = z ** 2 + rng.randint(-3, 3) * z + rng.randint(1, 4)
            scalar = tower.element(rng.randint(-2, 2) + rng.randint(-2, 2) * OMEGA)
            H = rf(num / den, z) * scalar
            parts = [eigen_project(H, k) for k in range(3)]
            self.assertEqual(parts[0] + parts[1] + parts[2], H)
            for k in range(3):
                self.assertEqual(eigen_project(parts[k], k), parts[k])
                for j in range(3):
                    if j != k:
                        self.assertTrue(eigen_project(parts[k], j).is_zero)


class TestReductions(unittest.TestCase):
    """Test the rational integrals and their back rules over t^3 - 1"""

    def test_constant_numerator(self):
        """Test that 1/(t^3 - 1)^(1/3) reduces to w/(1 - w^3) with w = y/t"""
        report = cube_diagnose(parse_integrand("1/(t^3-1)^(1/3)"))
        self.assertEqual(report.status, Status.ELEMENTARY)
        self.assertEqual(len(report.reductions), 1)
        J0 = report.reductions[0]
        self.assertEqual(J0.name, "J0")
        self.assertEqual(J0.rational, rf(w / (1 - w ** 3), w))
        self.assertEqual(J0.back, "w = (t^3-1)^(1/3)/t")

    def test_square_numerator(self):
        """Test that t^2/(t^3 - 1)^(1/3) reduces to u with u = y"""
        report = cube_diagnose(parse_integrand("t^2/(t^3-1)^(1/3)"))
        self.assertEqual(report.status, Status.ELEMENTARY)
        J2 = report.reductions[0]
        self.assertEqual(J2.name, "J2")
        self.assertEqual(J2.rational, rf(u, u))
        self.assertEqual(J2.integrand, "u")
        self.assertEqual(J2.back, "u = (t^3-1)^(1/3)")

    def test_two_thirds(self):
        """Test that t/(t^3 - 1)^(2/3) reduces to s/(1 - s^3) with s = t/y"""
        report = cube_diagnose(parse_integrand("t/(t^3-1)^(2/3)"))
        self.assertEqual(report.status, Status.ELEMENTARY)
        J1 = report.reductions[0]
        self.assertEqual(J1.name, "J1")
        self.assertEqual(J1.rational, rf(s / (1 - s ** 3), s))
        self.assertEqual(J1.back, "s = t/(t^3-1)^(1/3)")

    def test_mixed_numerator(self):
        """Test that 1 + 5t^2 - 7t/(t^3 + 1) keeps J0, J2 and a third-kind obstruction"""
        report = cube_diagnose(parse_integrand("(1 + 5*t^2 - 7*t/(t^3+1))/(t^3-1)^(1/3)"))
        self.assertEqual(report.status, Status.INCONCLUSIVE)
        self.assertEqual([r.name for r in report.reductions], ["J0", "J2"])
        self.assertEqual(report.reductions[1].rational, rf(5 * u, u))
        obstruction = report.obstruction
        self.assertEqual(obstruction.differential, "-(7/3)*Integral(1/((x + 1)*(x*(x - 1))^(1/3)), x)")
        self.assertFalse(obstruction.certified)
        self.assertEqual(report.exit_code, 2)

    def test_projection_names(self):
        """Test that exponent 2/3 reports the tilde projections"""
        report = cube_diagnose(parse_integrand("t/(t^3-1)^(2/3)"))
        names = [name for name, _ in report.projections]
        self.assertEqual(names, ["Htilde0", "Htilde1", "Htilde2", "phitilde0", "phitilde1", "phitilde2"])


class TestVerdicts(unittest.TestCase):
    """Test which components obstruct at each exponent"""

    def test_duality_for_monomials(self):
        """Test that 1 and t swap between elementary and obstructed from 1/3 to 2/3"""
        cases = [
            ("1/(t^3-1)^(1/3)", Status.ELEMENTARY),
            ("1/(t^3-1)^(2/3)", Status.CERTIFIED),
            ("t/(t^3-1)^(1/3)", Status.CERTIFIED),
            ("t/(t^3-1)^(2/3)", Status.ELEMENTARY),
        ]
        for text, expected in cases:
            self.assertEqual(cube_diagnose(parse_integrand(text)).status, expected, msg=text)

    def test_certified_obstruction_text(self):
        """Test the obstruction integral of t/(t^3 - 1)^(1/3)"""
        report = cube_diagnose(parse_integrand("t/(t^3-1)^(1/3)"))
        self.assertEqual(report.obstruction.differential, "(1/3)*Integral(1/(x*(x - 1))^(1/3), x)")
        self.assertTrue(report.obstruction.certified)

    def test_quadratic_radicand_is_certified(self):
        """Test that 1/(t^2 - 1)^(1/3) has a second-kind obstruction"""
        report = cube_diagnose(parse_integrand("1/(t^2-1)^(1/3)"))
        self.assertEqual(report.status, Status.CERTIFIED)
        self.assertEqual([r.name for r in report.reductions], ["J0", "J2"])

    def test_swap_gives_same_verdict(self):
        """Test that exchanging the fixed points does not change the verdict"""
        for text in ("1/((t-1)*(t-2)*(t-3))^(1/3)", "(2*t-4)/((t-1)*(t-2)*(t-3))^(1/3)"):
            spec = parse_integrand(text)
            plain = cube_diagnose(spec)
            swapped = cube_diagnose(spec, cf=canonical_form(spec.R, swap=True))
            self.assertEqual(plain.status, swapped.status, msg=text)

    def test_obstruction_text_monic(self):
        """Test that the leading coefficient moves in front of the integral"""
        cf = canonical_form(Poly(t ** 3 - 1, t))
        self.assertEqual(obstruction_text(rf(2 * x, x), cf, 2), "(2/3)*Integral(x/(x*(x - 1))^(2/3), x)")


class TestFieldSplit(unittest.TestCase):
    """Test splitting G0 + G1 y + G2 y^2 into integrands"""

    def test_split(self):
        """Test that the pieces are G2 y^2 and G1 y"""
        R = Poly(t ** 3 - 1, t)
        field = RadicalFunctionField(rf(t ** 3 - 1), 3)
        G0, G1, G2 = rf(t), rf(1), rf(t)
        rational, third, two_thirds = field_split(G0, G1, G2, R)
        self.assertEqual(rational, G0)
        self.assertEqual(third.exponent, Rational(1, 3))
        self.assertEqual(third.element(), field.monomial(2, G2))
        self.assertEqual(two_thirds.exponent, Rational(2, 3))
        self.assertEqual(two_thirds.element(), field.monomial(1, G1))


if __name__ == '__main__':
    unittest.main()
