"""
Unit tests for reading integrands and closed forms (pseudoelliptic/exprio.py)
"""
import unittest
import random
import sys
import os

import pytest
from sympy import Poly, Rational, Symbol

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from pseudoelliptic.errors import (
    Ambiguous,
    NotARadicalIntegrand,
    NotSquarefree,
    ParseError,
    UnsupportedExponent,
    UnsupportedExpression,
    UnsupportedIntegrand,
)
from pseudoelliptic.exprio import parse, parse_closed_form, parse_integrand, parse_rational, print_expr
from pseudoelliptic.rational import RationalFunction

t = Symbol("t")


class TestParseIntegrand(unittest.TestCase):
    """Test splitting text into F * R^(-p)"""

    def test_square_root_integrand(self):
        """Test t/sqrt((t^2 - 1)(t^2 - 4))"""
        spec = parse_integrand("t/((t^2-1)*(t^2-4))^(1/2)")
        self.assertEqual(spec.exponent, Rational(1, 2))
        self.assertEqual(spec.index, 2)
        self.assertEqual(spec.F, RationalFunction.from_expr(t, t))
        self.assertEqual(spec.R.as_expr(), t ** 4 - 5 * t ** 2 + 4)
        self.assertEqual(str(spec), "t/((t^2-1)*(t^2-4))^(1/2)")

    def test_cube_root_integrand(self):
        """Test 1/(t^2 - 1)^(1/3)"""
        spec = parse_integrand("1/(t^2-1)^(1/3)")
        self.assertEqual(spec.exponent, Rational(1, 3))
        self.assertEqual(spec.radicand_display, "t^2-1")

    def test_two_thirds(self):
        """Test t/(t^3 - 1)^(2/3)"""
        spec = parse_integrand("t/(t^3-1)^(2/3)")
        self.assertEqual(spec.exponent, Rational(2, 3))
        self.assertEqual(spec.F, RationalFunction.from_expr(t, t))

    def test_integer_part_of_exponent_moves_into_F(self):
        """Test that (t^3 - 1)^(-4/3) is (t^3 - 1)^(-1) times the 1/3 radical"""
        spec = parse_integrand("1/(t^3-1)^(4/3)")
        self.assertEqual(spec.exponent, Rational(1, 3))
        self.assertEqual(spec.F, RationalFunction.from_expr(1 / (t ** 3 - 1), t))

    def test_positive_cube_root_becomes_two_thirds(self):
        """Test that (t^3 - 1)^(1/3) is (t^3 - 1) over the 2/3 radical"""
        spec = parse_integrand("t*(t^3-1)^(1/3)")
        self.assertEqual(spec.exponent, Rational(2, 3))
        self.assertEqual(spec.F, RationalFunction.from_expr(t * (t ** 3 - 1), t))

    def test_higher_square_root_power(self):
        """Test that (t^2 - 1)^(-5/2) is (t^2 - 1)^(-2) times the 1/2 radical"""
        spec = parse_integrand("1/(t^2-1)^(5/2)")
        self.assertEqual(spec.exponent, Rational(1, 2))
        self.assertEqual(spec.F, RationalFunction.from_expr(1 / (t ** 2 - 1) ** 2, t))

    def test_exponent_hint_sees_normalized_exponent(self):
        """Test that --exponent is compared after the integer part moves into F"""
        spec = parse_integrand("1/(t^3-1)^(4/3)", exponent="1/3")
        self.assertEqual(spec.exponent, Rational(1, 3))
        with self.assertRaises(UnsupportedExponent):
            parse_integrand("1/(t^3-1)^(4/3)", exponent="2/3")

    def test_positive_power_in_numerator(self):
        """Test that (t^3 - 1)^(2/3) in the numerator is (t^3 - 1) over the 1/3 radical"""
        spec = parse_integrand("(t^3-1)^(2/3)")
        self.assertEqual(spec.exponent, Rational(1, 3))
        self.assertEqual(spec.F, RationalFunction.from_expr(t ** 3 - 1, t))

    def test_sqrt_function(self):
        """Test that sqrt(...) is the 1/2 power"""
        spec = parse_integrand("1/sqrt(t^3-t)")
        self.assertEqual(spec.exponent, Rational(1, 2))

    def test_combined_numerator(self):
        """Test the numerator 1 + 5t^2 - 7t/(t^3 + 1)"""
        spec = parse_integrand("(1 + 5*t^2 - 7*t/(t^3+1))/(t^3-1)^(1/3)")
        expected = RationalFunction.from_expr(1 + 5 * t ** 2 - 7 * t / (t ** 3 + 1), t)
        self.assertEqual(spec.F, expected)

    def test_other_variable(self):
        """Test integrands in x"""
        spec = parse_integrand("1/(x^3-1)^(1/3)", var="x")
        self.assertEqual(spec.var, Symbol("x"))

    def test_exponent_hint_must_match(self):
        """Test that an explicit exponent must agree with the text"""
        with self.assertRaises(UnsupportedExponent):
            parse_integrand("1/(t^3-1)^(1/3)", exponent="2/3")

    def test_unsupported_exponent(self):
        """Test that a fourth root is refused"""
        with self.assertRaises(UnsupportedExponent):
            parse_integrand("1/(t^3-1)^(1/4)")

    def test_no_radical(self):
        """Test that a rational function is not a radical integrand"""
        with self.assertRaises(NotARadicalIntegrand):
            parse_integrand("1/(t^2+1)")

    def test_two_radicands(self):
        """Test that two different radicands are ambiguous"""
        with self.assertRaises(Ambiguous):
            parse_integrand("1/((t^2-1)^(1/3)*(t^2+1)^(1/2))")

    def test_not_squarefree(self):
        """Test that a repeated root is refused at parse"""
        with self.assertRaises(NotSquarefree):
            parse_integrand("1/((t-1)^2*(t+1))^(1/3)")

    def test_nested_radical(self):
        """Test that a radical inside a radical is refused"""
        with self.assertRaises(UnsupportedIntegrand):
            parse_integrand("1/(t + (t^2-1)^(1/2))^(1/3)")

    def test_syntax_error(self):
        """Test that bad syntax is a ParseError pointing at the column"""
        with self.assertRaises(ParseError) as ctx:
            parse_integrand("1/(t^3-1)^(1/3")
        self.assertIn("column", str(ctx.exception))

    def test_unknown_symbol(self):
        """Test that a second symbol is a ParseError"""
        with self.assertRaises(ParseError):
            parse_integrand("s/(t^3-1)^(1/3)")

    def test_double_star(self):
        """Test that ** means ^"""
        self.assertEqual(parse("t**2"), parse("t^2"))


class TestParseRational(unittest.TestCase):
    """Test reading rational functions"""

    def test_parse_rational(self):
        """Test (t^2 + 2)/(2*t)"""
        self.assertEqual(parse_rational("(t^2+2)/(2*t)"), RationalFunction.from_expr((t ** 2 + 2) / (2 * t), t))

    def test_parse_rational_rejects_radicals(self):
        """Test that a radical is refused"""
        with self.assertRaises(UnsupportedIntegrand):
            parse_rational("(t^2+1)^(1/2)")


@pytest.mark.slow
class TestPrintedRoundTrip(unittest.TestCase):
    """Randomized print-then-parse checks"""

    RADICANDS = (
        (t ** 3 - 1, Rational(1, 3)),
        (t ** 3 - 1, Rational(2, 3)),
        ((t ** 2 - 1) * (t ** 2 - 4), Rational(1, 2)),
        (t ** 2 + 1, Rational(1, 3)),
    )

    def setUp(self):
        self.rng = random.Random(4417)

    def _poly(self, degree):
        return sum(Rational(self.rng.randint(-6, 6), self.rng.randint(1, 4)) * t ** k for k in range(degree + 1))

    def _function(self):
        num = self._poly(self.rng.randint(0, 4))
        den = self._poly(self.rng.randint(0, 3))
        while den == 0:
            den = self._poly(self.rng.randint(0, 3))
        return RationalFunction.from_expr(num / den, t)

    def test_round_trip(self):
        """Test that parsing the printed text of 1000 random rational functions gives them back"""
        for _ in range(1000):
            f = self._function()
            self.assertEqual(parse_rational(print_expr(f)), f, msg=print_expr(f))

    def test_integrand_round_trip(self):
        """Test that parsing the printed text of random integrands gives them back"""
        for _ in range(100):
            radicand, p = self.rng.choice(self.RADICANDS)
            spec = parse_integrand(f"1/({radicand})^({p})".replace("**", "^")).with_F(self._function())
            if spec.F.is_zero:
                continue
            self.assertEqual(parse_integrand(print_expr(spec)), spec, msg=print_expr(spec))

    def test_worked_integrand_round_trip(self):
        """Test that t/sqrt((t^2 - 1)(t^2 - 4)) survives print and parse"""
        spec = parse_integrand("t/((t^2-1)*(t^2-4))^(1/2)")
        again = parse_integrand(print_expr(spec))
        self.assertEqual(again, spec)
        self.assertEqual(again.R, Poly(t ** 4 - 5 * t ** 2 + 4, t))


class TestParseClosedForm(unittest.TestCase):
    """Test reading antiderivatives"""

    def setUp(self):
        self.spec = parse_integrand("t^2/(t^3-1)^(1/3)")
        self.field = self.spec.function_field()

    def test_algebraic_closed_form(self):
        """Test that (1/2)*(t^3-1)^(2/3) is y^2/2"""
        g = parse_closed_form("(1/2)*(t^3-1)^(2/3)", self.spec)
        self.assertEqual(g.rational, self.field.monomial(2, Rational(1, 2)))
        self.assertEqual(g.logs, ())

    def test_log_term(self):
        """Test that a constant times log(...) becomes one log term"""
        g = parse_closed_form("-(1/3)*log((t^3-1)^(1/3)/t - 1)", self.spec)
        self.assertEqual(len(g.logs), 1)
        self.assertEqual(g.logs[0].coefficient, Rational(-1, 3))

    def test_cbrt_of_radicand(self):
        """Test that cbrt(t^3-1) is y"""
        g = parse_closed_form("cbrt(t^3-1)", self.spec)
        self.assertEqual(g.rational, self.field.y)

    def test_foreign_radical(self):
        """Test that a radical of another polynomial is refused"""
        with self.assertRaises(UnsupportedExpression):
            parse_closed_form("(t^2+1)^(1/3)", self.spec)

    def test_log_with_variable_coefficient(self):
        """Test that t*log(t) is refused"""
        with self.assertRaises(UnsupportedExpression):
            parse_closed_form("t*log(t)", self.spec)


if __name__ == '__main__':
    unittest.main()
