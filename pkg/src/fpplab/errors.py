"""Exception hierarchy shared by every fpplab module."""


class FPPError(Exception):
    """Base class for all fpplab errors."""


class PreconditionError(FPPError, ValueError):
    """An operation was called outside its documented domain."""


# lattice / sampling
class EmptyIntersection(PreconditionError):
    pass


class CoverageError(PreconditionError):
    pass


class InvalidValueSet(PreconditionError):
    pass


# engine
class OutOfWindow(PreconditionError):
    pass


class NegativeWeights(PreconditionError):
    """Raised by the nonnegative engine; negative-mode callers use path_time."""


class InvalidEpsilon(PreconditionError):
    pass


class UncertifiedWindow(FPPError):
    pass


class CyclicTightGraph(FPPError):
    """Zero-weight cycles make the geodesic family infinite."""


# shapes
class EmptySet(PreconditionError):
    pass


class ResolutionTooCoarse(FPPError):
    pass


class NoValidN(FPPError):
    pass


# constructions
class RatioTooSmall(PreconditionError):
    pass


class ConstraintTooLarge(PreconditionError):
    pass


class NoSuitableA(PreconditionError):
    pass


class LambdaOutOfRange(PreconditionError):
    pass


class ToleranceInfeasible(FPPError):
    pass


class NoNegativeValue(PreconditionError):
    pass


class DimensionTooLow(PreconditionError):
    pass


class AxisAligned(PreconditionError):
    pass


class IsolatedPoints(PreconditionError):
    pass


class CaseMismatch(PreconditionError):
    pass


class ShapeNotInClass(PreconditionError):
    pass


# harness
class DimensionUnsupported(PreconditionError):
    pass


class FormatError(FPPError, ValueError):
    """A configuration, shape or scenario file could not be parsed."""
