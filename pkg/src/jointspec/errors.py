"""Exception hierarchy for jointspec."""


class JointSpecError(Exception):
    """Base class for every error raised by this package."""


class ParameterMismatchError(JointSpecError):
    pass


class DimensionMismatchError(JointSpecError):
    pass


class ConfigurationError(JointSpecError):
    pass


class NonCommutingError(JointSpecError):
    pass


class CollisionError(JointSpecError):
    pass


class DegreeCapError(JointSpecError):
    pass


class TruncationError(JointSpecError):
    pass


class UnknownModelError(JointSpecError):
    pass


class EmptyWindowError(JointSpecError):
    pass


class WindowExceededError(JointSpecError):
    pass


class InsufficientDataError(JointSpecError):
    pass


class SimplicityError(JointSpecError):
    """A joint eigenvalue of multiplicity > 1 where simplicity is required."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NotALatticeError(JointSpecError):
    pass


class ExtrapolationError(JointSpecError):
    pass


class RoundingError(JointSpecError):
    pass


class NonRationalError(JointSpecError):
    pass


class SpectrumFormatError(JointSpecError):
    pass
