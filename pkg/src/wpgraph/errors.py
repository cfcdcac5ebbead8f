"""Exception hierarchy.

Every error raised on bad input derives from :class:`WPGraphError`, which is a
``ValueError`` so callers that only care about "bad input" can catch that.
"""


class WPGraphError(ValueError):
    pass


# graphs and metrics
class SelfLoopError(WPGraphError):
    pass


class UnknownVertexError(WPGraphError):
    pass


class DisconnectedError(WPGraphError):
    pass


class MalformedMatrixError(WPGraphError):
    pass


# measures
class NegativeWeightError(WPGraphError):
    pass


class MassNotOneError(WPGraphError):
    def __init__(self, total):
        self.total = total
        super().__init__(f"total mass is {total}, expected 1")


class SizeMismatchError(WPGraphError):
    pass


class BadParameterError(WPGraphError):
    pass


# transport
class GraphMismatchError(WPGraphError):
    pass


class TooLargeError(WPGraphError):
    pass


# neighbouring relation and witnesses
class PreconditionViolatedError(WPGraphError):
    pass


class WitnessRejectedError(WPGraphError):
    """A constructed B_s candidate failed exact verification."""


# teleport / genericity
class NotAdjacentError(WPGraphError):
    pass


class ZeroContestedMassError(WPGraphError):
    pass


class IncompatibleMeasureError(WPGraphError):
    pass


class EpsilonTooSmallError(WPGraphError):
    pass


class GenericityExhaustedError(WPGraphError):
    pass


class NotAutomorphismError(WPGraphError):
    pass


# groups
class NotLatinSquareError(WPGraphError):
    pass


class NotAssociativeError(WPGraphError):
    pass


class NoIdentityError(WPGraphError):
    pass


class NoInverseError(WPGraphError):
    pass


class NotGeneratingError(WPGraphError):
    pass


# parsing
class ParseError(WPGraphError):
    pass


class ZeroDenominatorError(ParseError):
    pass
