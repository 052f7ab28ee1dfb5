"""Exception types shared across the package."""


class HolonomyError(Exception):
    """Base class for all package errors."""


class NumericalError(HolonomyError):
    """Non-finite values, singular matrices, or integrator blowup."""


class DomainError(HolonomyError):
    """Evaluation outside the valid parameter or spatial domain."""


class CompositionError(HolonomyError):
    """Endpoints or boundary paths do not match within tolerance."""


class MembershipError(HolonomyError):
    """A matrix fails its group or algebra membership test."""


class FakeCurvatureError(HolonomyError):
    """Connection pair violates dA + [A wedge A] = t_* B beyond tolerance."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TargetMatchingError(HolonomyError):
    """t(h) * source != target beyond the hard limit; integration too
    coarse or the input data is not a valid 2-morphism."""


class ExpressionError(HolonomyError):
    """Malformed scalar field expression."""


class ConfigError(HolonomyError):
    """Invalid CLI configuration; carries a JSON-pointer-style location."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer
