"""Exception hierarchy.

``ValidationError`` covers bad inputs and parameters (CLI exit code 2),
``NumericalError`` covers failures inside the engines (exit code 3).
"""


class CompConvError(Exception):
    pass


class ValidationError(CompConvError, ValueError):
    pass


class NumericalError(CompConvError, ArithmeticError):
    pass


class NonFiniteValueError(ValidationError):
    pass


class InvalidPaddingError(ValidationError):
    pass


class InvalidCropError(ValidationError):
    pass


class GridFormatError(ValidationError):
    pass


class EmptyDomainError(ValidationError):
    pass


class EmptySetError(ValidationError):
    pass


class NotConvexError(ValidationError):
    pass


class DualCoverageError(ValidationError):
    def __init__(self, axis, needed, given):
        self.axis = axis
        super().__init__(
            f"dual grid on axis {axis} spans [{given[0]:g}, {given[1]:g}] "
            f"but slopes in [{needed[0]:g}, {needed[1]:g}] are required"
        )


class DegenerateParametersError(ValidationError):
    pass


class LevelTooSmallError(ValidationError):
    pass


class EmptySampleError(ValidationError):
    pass


class SchemeError(NumericalError):
    """Engine failure, tagged with the scheme that raised it."""

    def __init__(self, scheme, message):
        self.scheme = scheme
        super().__init__(f"[{scheme}] {message}")
