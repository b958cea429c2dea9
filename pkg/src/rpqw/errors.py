"""Classified errors raised by the engine.

Every error a check can hit is a subclass of ``RpqwError`` so the runner can
turn it into a skipped record with a reason instead of crashing.
"""


class RpqwError(Exception):
    """Base class for all classified engine errors."""


class ParameterOrdering(RpqwError):
    pass


class NotNormalized(RpqwError):
    pass


class UnsupportedExponent(RpqwError):
    pass


class NegativeArgument(RpqwError):
    pass


class IndexOrder(RpqwError):
    pass


class IndeterminateAtZero(RpqwError):
    pass


class WindowMismatch(RpqwError):
    pass


class WindowExhausted(RpqwError):
    pass


class NonzeroConstantTerm(RpqwError):
    pass


class DegenerateRecursion(RpqwError):
    pass


class ScaleNotRepresentable(RpqwError):
    pass


class DivisionByZeroMode(RpqwError):
    pass


class TruncationOverflow(RpqwError):
    pass


class PoleHit(RpqwError):
    pass


class ConfigInvalid(RpqwError):
    pass
