"""Exception hierarchy shared by every module of the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by alttwist."""


class EvenOrCompositeModulus(AlgebraError):
    pass


class Char2Rejected(EvenOrCompositeModulus):
    pass


class ParseError(AlgebraError, ValueError):
    pass


class ZeroDenominator(ParseError):
    pass


class UnitConventionViolated(AlgebraError):
    def __init__(self, i, j, message=None):
        self.pair = (i, j)
        super().__init__(message or f"e0 is not a two-sided unit at ({i}, {j})")


class AlgebraMismatch(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class Singular(AlgebraError):
    pass


class NotStrong(AlgebraError):
    def __init__(self, witness, message=None):
        self.witness = witness
        super().__init__(message or f"involution is not strong at basis index {witness}")


class NotAutomorphism(AlgebraError):
    pass


class InvolutionNotVerified(AlgebraError):
    pass


class ZeroParameter(AlgebraError):
    pass


class UnknownName(AlgebraError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown name"


class VerificationFailed(AlgebraError):
    pass


class _ReportError(AlgebraError):
    """Error carrying the CheckReport that triggered it."""

    def __init__(self, report, message=None):
        self.report = report
        super().__init__(message or report.summary())


class AxiomsFailed(_ReportError):
    pass


class HypothesisFailed(_ReportError):
    @property
    def tag(self):
        return self.report.property


class PreconditionFailed(_ReportError):
    pass
