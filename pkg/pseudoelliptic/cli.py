"""
Command line: ``diagnose``, ``integrate`` and ``verify``.

Reports go to stdout, logs to stderr. The exit code is a function of the
outcome: 0 elementary or verified, 1 unreadable input, 2 obstructed,
3 unsupported, 4 partial integration, 5 verification failed, 6 internal
error (logged with its traceback).
"""
import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor

import pandas as pd

from .config import get_settings
from .errors import EXIT_INTERNAL, EXIT_NOT_VERIFIED, EXIT_OK, PseudoEllipticError, exit_code_for
from .pipeline import diagnose_text, integrate_text, verify

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ["integrand", "exponent", "status", "exit_code", "verified"]


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--integrand", help='integrand text, e.g. "t/((t^2-1)*(t^2-4))^(1/2)"')
    common.add_argument("--var", default="t", help="integration variable (default: t)")
    common.add_argument("--exponent", choices=["1/2", "1/3", "2/3"], default=None,
                        help="radical exponent; inferred from the integrand when omitted")
    common.add_argument("--json", action="store_true", help="emit the report as JSON")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG on stderr")

    parser = argparse.ArgumentParser(
        prog="pseudoelliptic",
        description="Decide and compute elementary integrals of F(t)/R(t)^(1/2), ^(1/3), ^(2/3)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for name, text in (("diagnose", "classify an integrand"), ("integrate", "classify and integrate")):
        sub = commands.add_parser(name, parents=[common], help=text)
        sub.add_argument("--batch", metavar="FILE", help="one integrand per line; # starts a comment")
        sub.add_argument("--summary", metavar="CSV", help="with --batch, write the summary table here")
        if name == "integrate":
            sub.add_argument("--real-form", action="store_true",
                             help="fold conjugate logarithms into real logs and arctangents")

    check = commands.add_parser("verify", parents=[common], help="differentiate a closed form and compare")
    check.add_argument("--antiderivative", required=True, help="closed form to check")
    return parser


def _configure_logging(verbose):
    level = logging.DEBUG if verbose else get_settings().log_level
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _error_code(exc, text):
    code = exit_code_for(exc)
    if code == EXIT_INTERNAL:
        logger.exception("internal error on %s", text)
    return code


def run_one(command, text, var="t", exponent=None, real_form=False, as_json=False):
    """
    Run one integrand and return ``(output, exit code, summary row)``.

    Only plain data comes back so that batch workers can run this in
    another process.
    """
    try:
        if command == "integrate":
            report = integrate_text(text, var=var, exponent=exponent, real_form=real_form)
        else:
            report = diagnose_text(text, var=var, exponent=exponent)
    except PseudoEllipticError as e:
        code = _error_code(e, text)
        row = {"integrand": text, "exponent": exponent, "status": type(e).__name__, "exit_code": code, "verified": None}
        return f"error: {e}", code, row

    if as_json:
        output = json.dumps(report.to_dict(), indent=2)
    elif command == "integrate" and report.antiderivative is not None:
        output = report.closed_form()
    else:
        output = str(report)
    row = {
        "integrand": report.integrand or text,
        "exponent": None if report.exponent is None else str(report.exponent),
        "status": report.status.value,
        "exit_code": report.exit_code,
        "verified": report.verified,
    }
    return output, report.exit_code, row


def _run_star(job):
    return run_one(*job)


def read_batch(path):
    with open(path, "r", encoding="utf-8") as f:
        lines = [line.split("#", 1)[0].strip() for line in f]
    return [line for line in lines if line]


def run_batch(args):
    texts = read_batch(args.batch)
    jobs = [
        (args.command, text, args.var, args.exponent, getattr(args, "real_form", False), args.json)
        for text in texts
    ]
    workers = get_settings().batch_workers
    logger.info("running %d integrands with %d worker(s)", len(jobs), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_star, jobs))
    else:
        results = [_run_star(job) for job in jobs]

    for output, _, _ in results:
        print(output)
        print()
    summary = pd.DataFrame([row for _, _, row in results], columns=SUMMARY_COLUMNS)
    if not args.json:
        print(summary.to_string(index=False))
    if args.summary:
        summary.to_csv(args.summary, index=False)
        logger.info("summary written to %s", args.summary)
    return max((code for _, code, _ in results), default=EXIT_OK)


def cmd_diagnose(args):
    output, code, _ = run_one("diagnose", args.integrand, args.var, args.exponent, as_json=args.json)
    print(output)
    return code


def cmd_integrate(args):
    output, code, _ = run_one("integrate", args.integrand, args.var, args.exponent, args.real_form, args.json)
    print(output)
    return code


def cmd_verify(args):
    try:
        result = verify(args.antiderivative, args.integrand, var=args.var, exponent=args.exponent)
    except PseudoEllipticError as e:
        print(f"error: {e}")
        return _error_code(e, args.integrand)
    if args.json:
        print(json.dumps({
            "verified": result.verified,
            "discrepancy": None if result.verified else str(result.discrepancy),
        }, indent=2))
    elif result.verified:
        print("verified: True")
    else:
        print(f"verified: False\ndiscrepancy: {result.discrepancy}")
    return EXIT_OK if result.verified else EXIT_NOT_VERIFIED


COMMANDS = {"diagnose": cmd_diagnose, "integrate": cmd_integrate, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    if getattr(args, "batch", None):
        return run_batch(args)
    if not args.integrand:
        parser.error("--integrand is required unless --batch is given")
    return COMMANDS[args.command](args)
