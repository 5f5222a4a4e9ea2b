"""
Diagnose, integrate and verify: the steps every entry point runs, in order.
"""
import logging
from dataclasses import dataclass, replace

from sympy import Rational

from .cube_goursat import cube_diagnose, field_split
from .errors import InvariantViolation, PartialResult, Unsupported
from .exprio import IntegrandSpec, parse_closed_form, parse_integrand
from .ratint import AntiderivativeExpr, back_substitute, integrate_rational, verify_antiderivative
from .report import DiagnosticReport, Status
from .sqrt_goursat import sqrt_diagnose

logger = logging.getLogger(__name__)


def diagnose(spec):
    """Dispatch on the radical index; honest limits come back as an unsupported report"""
    try:
        if spec.index == 2:
            return sqrt_diagnose(spec.F, spec.R, field=spec.function_field(), label=str(spec))
        return cube_diagnose(spec)
    except Unsupported as e:
        logger.info("%s is unsupported: %s", spec, e)
        return DiagnosticReport(Status.UNSUPPORTED, integrand=str(spec), exponent=spec.exponent, message=str(e))


def _target(spec, report):
    """The part of the integrand the reductions account for"""
    target = spec.element()
    if report.obstruction is not None and report.obstruction.residual is not None:
        target = target - spec.function_field().integrand(report.obstruction.residual, spec.exponent)
    return target


def integrate(spec, real_form=False):
    """
    Diagnose ``spec``, integrate every rational reduction and substitute back.

    The sum is checked by differentiation against the integrand minus its
    obstructive part; a mismatch is a bug and raises InvariantViolation.
    """
    report = diagnose(spec)
    if report.status is Status.UNSUPPORTED:
        return report

    field = spec.function_field()
    total = AntiderivativeExpr(field.zero())
    try:
        for reduction in report.reductions:
            piece = integrate_rational(reduction.rational, real_form=real_form)
            total = total + back_substitute(piece, reduction.rule)
    except PartialResult as e:
        logger.info("integration of %s stopped: %s", spec, e)
        return replace(report, partial=True, message=str(e))

    check = verify_antiderivative(total, spec, target=_target(spec, report))
    if not check:
        raise InvariantViolation(f"antiderivative {total} of {spec} is off by {check.discrepancy}")
    logger.debug("integrated %s: %s", spec, total)
    return replace(report, antiderivative=total, verified=True)


def diagnose_text(text, var="t", exponent=None):
    try:
        spec = parse_integrand(text, var=var, exponent=exponent)
    except Unsupported as e:
        return DiagnosticReport(Status.UNSUPPORTED, integrand=text, message=str(e))
    return diagnose(spec)


def integrate_text(text, var="t", exponent=None, real_form=False):
    try:
        spec = parse_integrand(text, var=var, exponent=exponent)
    except Unsupported as e:
        return DiagnosticReport(Status.UNSUPPORTED, integrand=text, message=str(e))
    return integrate(spec, real_form=real_form)


def verify(closed_text, integrand_text, var="t", exponent=None):
    """Whether ``closed_text`` differentiates to ``integrand_text``; a Verification"""
    spec = parse_integrand(integrand_text, var=var, exponent=exponent)
    antiderivative = parse_closed_form(closed_text, spec)
    return verify_antiderivative(antiderivative, spec)


@dataclass(frozen=True, eq=False)
class FieldIntegral:
    antiderivative: AntiderivativeExpr
    pieces: tuple
    verified: bool

    @property
    def is_elementary(self):
        return all(p.status is Status.ELEMENTARY for p in self.pieces) and self.verified


def integrate_field_element(G, real_form=False):
    """
    Integrate ``G0 + G1 y (+ G2 y^2)`` over y^n = R piece by piece: the
    rational part directly, each radical part as its own integrand.
    """
    field = G.field
    R = field.radicand.num
    text = field.text
    if field.index == 3:
        G0, *specs = field_split(*G.components, R, text=text)
    else:
        G0 = G.component(0)
        specs = [IntegrandSpec(G.component(1) * field.radicand, R, Rational(1, 2), R.gen, text)]

    total = integrate_rational(G0, real_form=real_form).map(lambda f: field.element([f]))
    target = G
    pieces = []
    for spec in specs:
        if spec.F.is_zero:
            continue
        report = integrate(spec, real_form=real_form)
        pieces.append(report)
        if report.antiderivative is None:
            return FieldIntegral(total, tuple(pieces), False)
        total = total + report.antiderivative
        target = target - (spec.element() - _target(spec, report))

    derivative = total.derivative()
    verified = (derivative - target).is_zero
    logger.debug("integral of %s over y^%d = %s: %s", G, field.index, field.radicand, total)
    return FieldIntegral(total, tuple(pieces), verified)
