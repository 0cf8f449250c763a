# -*- coding: utf-8 -*-
"""Exceptions raised by the unequal crossover package"""


class CrossoverError(Exception):
    """Base class for every error raised by this package."""
    pass


# Validation errors: the caller handed us something we cannot work with.

class ValidationError(CrossoverError, ValueError):
    pass


class NegativeMass(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class MeanOutOfRange(ValidationError):
    pass


class TruncationTooSmall(ValidationError):
    pass


class ParamMismatch(ValidationError):
    pass


class ConfigError(ValidationError):
    pass


# Numerical errors: the input was fine but the computation failed.

class NumericalError(CrossoverError, ArithmeticError):
    pass


class LeakExceeded(NumericalError):
    pass


class PositivityLost(NumericalError):
    pass


class MassDrift(NumericalError):
    pass


class DivergentInversion(NumericalError):
    pass


class CoefficientOverflow(NumericalError):
    pass


class NotConverged(NumericalError):
    """
    Raised when an iteration hits its iteration limit.

    The best iterate found so far is kept in ``result`` so callers can still inspect it.
    """

    def __init__(self, message, result=None, iterations=None):
        super().__init__(message)
        self.result = result
        self.iterations = iterations
