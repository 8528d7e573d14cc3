"""Exception hierarchy shared by every module."""


class RDError(Exception):
    """Base class for all errors raised by rdiff."""


class UnsupportedDegree(RDError, ValueError):
    pass


class DegreeMismatch(RDError, ValueError):
    pass


class ReducibleModulus(RDError, ValueError):
    pass


class DivisionByZero(RDError, ZeroDivisionError):
    pass


class FieldMismatch(RDError, ValueError):
    pass


class DimensionMismatch(RDError, ValueError):
    pass


class NonSquare(DimensionMismatch):
    pass


class IndexOutOfRange(RDError, IndexError):
    pass


class Singular(RDError, ValueError):
    pass


class TooLarge(RDError):
    pass


class CauchyCollision(RDError, ValueError):
    pass


class NotMDS(RDError, ValueError):
    pass


class IsMDS(RDError, ValueError):
    pass


class NotSymmetric(RDError, ValueError):
    pass


class EvenOrder(RDError, ValueError):
    pass


class NotCirculant(RDError, ValueError):
    pass


class ExcludedOrder(RDError, ValueError):
    pass


class SingularDiagonal(RDError, ValueError):
    pass


class NotPermutation(RDError, ValueError):
    pass


class ZeroEntry(RDError, ValueError):
    pass


class ConditionNotSatisfied(RDError, ValueError):
    pass


class ConstructionDegenerate(RDError):
    """A constructive witness path and all of its fallbacks failed."""


class MalformedInput(RDError, ValueError):
    pass
