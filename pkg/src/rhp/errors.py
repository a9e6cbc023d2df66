"""Exception types shared across the package."""


class RHPError(Exception):
    """Base class for every error raised by :mod:`rhp`."""


class NoOutEdge(RHPError, ValueError):
    pass


class ShapeMismatch(RHPError, ValueError):
    """A tuple does not have the edge shape an operation requires."""


class PrecondViolation(RHPError, ValueError):
    pass


class MalformedState(RHPError, RuntimeError):
    """The crabwalk met a configuration that valid inputs never produce."""


class NonTermination(RHPError, RuntimeError):
    pass


class InvalidSpec(RHPError, ValueError):
    pass


class InstanceTooLarge(RHPError, ValueError):
    pass


class DimTooLarge(RHPError, ValueError):
    pass


class LabelMismatch(RHPError, KeyError):
    pass


class SizeMismatch(RHPError, ValueError):
    pass
