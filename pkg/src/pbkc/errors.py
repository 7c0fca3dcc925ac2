"""Exception hierarchy shared by every representation."""


class PbkcError(Exception):
    """Base class for all errors raised by pbkc."""


class SemiringMismatch(PbkcError):
    pass


class NonzeroToleranceOnExactSemiring(PbkcError):
    pass


class DimMismatch(PbkcError):
    pass


class ShapeMismatch(DimMismatch):
    pass


class LengthMismatch(PbkcError):
    pass


class TooManyVariables(PbkcError):
    pass


class MissingOutputIndex(PbkcError):
    pass


class UnassignedVariable(PbkcError):
    pass


class VariableNotInVtree(PbkcError):
    pass


class NotStructured(PbkcError):
    pass


class NotOrdered(PbkcError):
    pass


class InvariantViolation(PbkcError):
    """A representation failed one of its structural invariants.

    ``invariant`` names the violated invariant, ``where`` optionally points
    at the offending field.
    """

    def __init__(self, invariant, detail="", where=None):
        self.invariant = invariant
        self.detail = detail
        self.where = where
        msg = invariant
        if detail:
            msg += f": {detail}"
        if where:
            msg += f" (at {where})"
        super().__init__(msg)


class ParseError(PbkcError):
    """A document could not be parsed; carries line/field diagnostics."""

    def __init__(self, message, line=None, column=None, field=None):
        self.line = line
        self.column = column
        self.field = field
        loc = []
        if line is not None:
            loc.append(f"line {line}")
            if column is not None:
                loc.append(f"column {column}")
        if field is not None:
            loc.append(f"field {field}")
        super().__init__(message + (f" ({', '.join(loc)})" if loc else ""))


class UnsupportedFlavor(PbkcError):
    pass


class UnsupportedConversion(PbkcError):
    pass
