"""
Exception hierarchy shared by the library and the command line.

Library code raises these; only cli.py turns them into exit codes.
"""


class PseudoEllipticError(Exception):
    """Base class for every error raised by the package"""


# parse errors (exit 1)

class ParseError(PseudoEllipticError):
    """The integrand or closed form text could not be read"""


class NotARadicalIntegrand(ParseError):
    """No factor of the form R(t)^(-p) was found"""


class Ambiguous(ParseError):
    """Two different radicands were found in one integrand"""


class NotSquarefree(ParseError):
    """The radicand has a repeated root"""


# honest limits (exit 3)

class Unsupported(PseudoEllipticError):
    """The input is well formed but outside what the library handles"""


class UnsupportedRadicand(Unsupported):
    """The radicand has an irreducible factor of degree >= 3, or a bad degree"""


class UnsupportedIntegrand(Unsupported):
    """The part multiplying the radical is not a rational function"""


class UnsupportedExponent(Unsupported):
    """The radical exponent is not one of -1/2, -1/3, -2/3"""


class UnsupportedExpression(Unsupported):
    """A closed form uses a radical other than powers of the radicand's root"""


# integration gave up (exit 4)

class PartialResult(PseudoEllipticError):
    """A Rothstein-Trager resultant factor has roots outside supported towers"""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


# internal consistency

class InvariantViolation(PseudoEllipticError):
    """A mathematical invariant that must hold did not"""


class DegeneratePairing(PseudoEllipticError):
    """Points handed to a Moebius construction coincide"""


class DegenerateMap(PseudoEllipticError):
    """The Moebius map is the identity or singular"""


class NotAntiInvariant(PseudoEllipticError):
    """F(S(t)) != -F(t) for the involution chosen for a reduction"""


class InvalidInput(PseudoEllipticError, ValueError):
    """An argument is out of range"""


class DivisionByZero(PseudoEllipticError, ZeroDivisionError):
    """Exact division by zero"""


EXIT_OK = 0
EXIT_PARSE_ERROR = 1
EXIT_OBSTRUCTED = 2
EXIT_UNSUPPORTED = 3
EXIT_PARTIAL = 4
EXIT_NOT_VERIFIED = 5
EXIT_INTERNAL = 6


def exit_code_for(exc):
    """Exit code for a package error; anything else is re-raised"""
    if isinstance(exc, ParseError):
        return EXIT_PARSE_ERROR
    if isinstance(exc, Unsupported):
        return EXIT_UNSUPPORTED
    if isinstance(exc, PartialResult):
        return EXIT_PARTIAL
    if isinstance(exc, PseudoEllipticError):
        return EXIT_INTERNAL
    raise exc
