"""Error hierarchy shared by the library, the service and the CLI.

Every error carries an ``exit_code`` that the CLI maps to its process status.
"""


class ArtifactError(Exception):
    exit_code = 1
    kind = "error"


class SchemaError(ArtifactError):
    """Malformed or inconsistent input document."""

    exit_code = 2
    kind = "schema"


class MathPreconditionError(ArtifactError):
    """A mathematical hypothesis of an algorithm does not hold."""

    exit_code = 3
    kind = "math_precondition"


class PrecisionExhausted(ArtifactError):
    """The requested precision cannot be certified."""

    exit_code = 4
    kind = "precision_exhausted"


class InvalidField(MathPreconditionError):
    pass


class OddValuation(MathPreconditionError):
    pass


class NonSquareResidue(MathPreconditionError):
    pass


class DivisionByZero(MathPreconditionError):
    pass


class RepeatedRoots(MathPreconditionError):
    pass


class RootsNotInField(MathPreconditionError):
    pass


class NotSemistable(MathPreconditionError):
    pass


class NotEisensteinExtension(InvalidField):
    pass


class NoCommonDomain(MathPreconditionError):
    pass


class PointOutsideDomain(MathPreconditionError):
    pass


class HypothesisViolated(MathPreconditionError):
    pass


class PointNotOnCurve(MathPreconditionError):
    pass


class RadiusOutOfRange(MathPreconditionError):
    pass


class NotEvenGenusZero(MathPreconditionError):
    pass


class SingularEndpoint(MathPreconditionError):
    pass


class InvalidPath(MathPreconditionError):
    pass


class MissingReferencePoint(MathPreconditionError):
    pass


class DegenerateGraph(MathPreconditionError):
    pass


class NotAnnihilator(MathPreconditionError):
    pass
