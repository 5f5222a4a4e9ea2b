"""
Diagnostic reports: the verdict on one integrand, the data behind it, and
the JSON form the command line emits.
"""
import enum
from dataclasses import dataclass

from .errors import EXIT_OBSTRUCTED, EXIT_OK, EXIT_PARTIAL, EXIT_UNSUPPORTED


class Status(str, enum.Enum):
    ELEMENTARY = "elementary"
    CERTIFIED = "obstructed-certified-nonelementary"
    INCONCLUSIVE = "obstructed-inconclusive"
    UNSUPPORTED = "unsupported"

    @property
    def is_obstructed(self):
        return self in (Status.CERTIFIED, Status.INCONCLUSIVE)

    @property
    def exit_code(self):
        if self is Status.UNSUPPORTED:
            return EXIT_UNSUPPORTED
        if self.is_obstructed:
            return EXIT_OBSTRUCTED
        return EXIT_OK


def _text(value):
    return None if value is None else str(value)


@dataclass(frozen=True, eq=False)
class Reduction:
    """
    One rational integral the integrand was reduced to.

    ``integrand``, ``variable`` and ``back`` are what gets reported;
    ``rational`` is the RationalFunction actually integrated and ``rule``
    the element of K(t)[y]/(y^n - R) its variable stands for.
    """

    name: str
    integrand: str
    variable: str
    back: str
    rational: object = None
    rule: object = None
    rationalized: tuple = None

    def to_dict(self):
        entry = {
            "name": self.name,
            "integrand": self.integrand,
            "variable": self.variable,
            "back": self.back,
        }
        if self.rationalized is not None:
            integrand, variable, back = self.rationalized
            entry["rationalized"] = {"integrand": integrand, "variable": variable, "back": back}
        return entry


@dataclass(frozen=True, eq=False)
class Obstruction:
    witness: str
    phi: str = None
    differential: str = None
    certificate: object = None
    residual: object = None

    @property
    def certified(self):
        if self.certificate is None:
            return None
        return self.certificate.is_second_kind

    def to_dict(self):
        return {
            "witness": self.witness,
            "phi": self.phi,
            "differential": self.differential,
            "residues": [] if self.certificate is None else self.certificate.rows(),
            "certified": self.certified,
        }


@dataclass(frozen=True, eq=False)
class DiagnosticReport:
    status: Status
    integrand: str = ""
    exponent: object = None
    canonical: object = None
    involutions: tuple = ()
    projections: tuple = ()
    reductions: tuple = ()
    obstruction: Obstruction = None
    antiderivative: object = None
    verified: object = None
    partial: bool = False
    message: str = ""

    @property
    def exit_code(self):
        if self.partial:
            return EXIT_PARTIAL
        return self.status.exit_code

    def closed_form(self):
        """The antiderivative, followed by the obstruction integral when there is one"""
        pieces = []
        if self.antiderivative is not None and not self.antiderivative.is_zero:
            pieces.append(str(self.antiderivative))
        if self.obstruction is not None and self.obstruction.differential:
            pieces.append(self.obstruction.differential)
        if not pieces:
            return "0"
        text = pieces[0]
        for piece in pieces[1:]:
            text += " - " + piece[1:] if piece.startswith("-") else " + " + piece
        return text

    def to_dict(self):
        return {
            "status": self.status.value,
            "integrand": self.integrand,
            "exponent": _text(self.exponent),
            "canonical": None if self.canonical is None else self.canonical.to_dict(),
            "involutions": {name: str(S) for name, S in self.involutions},
            "projections": {name: str(f) for name, f in self.projections},
            "reductions": [r.to_dict() for r in self.reductions],
            "obstruction": None if self.obstruction is None else self.obstruction.to_dict(),
            "antiderivative": _text(self.antiderivative),
            "verified": self.verified,
            "partial": self.partial,
            "message": self.message,
        }

    def __str__(self):
        lines = [f"status: {self.status.value}", f"integrand: {self.integrand}"]
        if self.exponent is not None:
            lines.append(f"exponent: {self.exponent}")
        if self.message:
            lines.append(f"message: {self.message}")
        if self.canonical is not None:
            for key, value in self.canonical.to_dict().items():
                lines.append(f"{key}: {value}")
        for name, S in self.involutions:
            lines.append(f"{name}(t) = {S}")
        if self.projections:
            lines.append("projections:")
            lines.extend(f"  {name} = {f}" for name, f in self.projections)
        if self.reductions:
            lines.append("reductions:")
            for r in self.reductions:
                lines.append(f"  {r.name}: {r.integrand} d{r.variable}, {r.back}")
                if r.rationalized is not None:
                    integrand, variable, back = r.rationalized
                    lines.append(f"    rationalized: {integrand} d{variable}, {back}")
        if self.obstruction is not None:
            o = self.obstruction
            lines.append(f"obstruction: {o.witness}")
            if o.phi is not None:
                lines.append(f"  phi = {o.phi}")
            if o.differential is not None:
                lines.append(f"  {o.differential}")
            if o.certificate is not None:
                for row in o.certificate.rows():
                    lines.append(f"  residue at {row['point']}: {row['residue']}")
                lines.append(f"  {o.certificate.verdict}")
        if self.antiderivative is not None:
            lines.append(f"antiderivative: {self.antiderivative}")
        if self.verified is not None:
            lines.append(f"verified: {self.verified}")
        return "\n".join(lines)


_STRING_MAP = {"type": "object", "additionalProperties": {"type": "string"}}

_REDUCTION = {
    "type": "object",
    "required": ["integrand", "variable", "back"],
    "properties": {
        "name": {"type": "string"},
        "integrand": {"type": "string"},
        "variable": {"type": "string"},
        "back": {"type": "string"},
        "rationalized": {
            "type": "object",
            "required": ["integrand", "variable", "back"],
            "properties": {
                "integrand": {"type": "string"},
                "variable": {"type": "string"},
                "back": {"type": "string"},
            },
        },
    },
}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "pseudoelliptic diagnostic report",
    "type": "object",
    "required": [
        "status", "exponent", "canonical", "projections", "reductions",
        "obstruction", "antiderivative", "verified",
    ],
    "properties": {
        "status": {"enum": [s.value for s in Status]},
        "integrand": {"type": "string"},
        "exponent": {"type": ["string", "null"]},
        "canonical": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["S", "alpha", "beta", "c", "K"],
                    "additionalProperties": {"type": "string"},
                },
            ]
        },
        "involutions": _STRING_MAP,
        "projections": _STRING_MAP,
        "reductions": {"type": "array", "items": _REDUCTION},
        "obstruction": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["witness", "phi", "residues", "certified"],
                    "properties": {
                        "witness": {"type": "string"},
                        "phi": {"type": ["string", "null"]},
                        "differential": {"type": ["string", "null"]},
                        "residues": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["point", "residue"],
                                "properties": {
                                    "point": {"type": "string"},
                                    "residue": {"type": "string"},
                                    "order": {"type": "integer"},
                                },
                            },
                        },
                        "certified": {"type": ["boolean", "null"]},
                    },
                },
            ]
        },
        "antiderivative": {"type": ["string", "null"]},
        "verified": {"type": ["boolean", "null"]},
        "partial": {"type": "boolean"},
        "message": {"type": "string"},
    },
}
