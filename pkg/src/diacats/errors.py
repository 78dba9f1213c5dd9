"""Exception types shared across the library.

Every validation error carries enough payload to point at the offending
piece of data; checkers that return reports instead of raising use the
same names as report codes.
"""


class DiacatsError(Exception):
    """Base class for all library errors."""


class MissingIdentity(DiacatsError):
    pass


class NonAssociative(DiacatsError):
    pass


class DomCodMismatch(DiacatsError):
    pass


class PartialCompositionTable(DiacatsError):
    pass


class TargetMismatch(DiacatsError):
    pass


class ObjectNotInTarget(DiacatsError):
    pass


class EndpointMismatch(DiacatsError):
    pass


class TruncationExceeded(DiacatsError):
    pass


class LimitAbsent(DiacatsError):
    pass


class NonSplitMorphism(DiacatsError):
    pass


class FractionsFailed(DiacatsError):
    pass


class SchemaError(DiacatsError):
    pass


class InvalidFunctor(DiacatsError):
    pass


class InvalidNatTransf(DiacatsError):
    pass


class InvalidSimplicial(DiacatsError):
    pass


class BudgetExceeded(DiacatsError):
    """A computation was aborted because its forecast size exceeds the
    configured budget.  The message carries the forecast."""
