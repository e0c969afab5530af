"""Exception hierarchy shared by all modules."""


class ChiralSkinError(Exception):
    """Base class for every error raised by the package."""


class ConfigError(ChiralSkinError):
    """Invalid or unreadable experiment configuration."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None and key not in message:
            message = f"{key}: {message}"
        super().__init__(message)


class InvalidParams(ChiralSkinError, ValueError):
    pass


class NumericsError(ChiralSkinError):
    """Base for failures of a numerical procedure on valid input."""


class NonConvergence(NumericsError):
    pass


class DimensionMismatch(ChiralSkinError, ValueError):
    pass


class EmptyInput(ChiralSkinError, ValueError):
    pass


class TruncationTooSmall(NumericsError):
    pass


class DispersionSingularity(NumericsError):
    pass


class BranchLost(NumericsError):
    pass


class SeedNotFound(NumericsError):
    pass


class InsufficientStencil(NumericsError):
    pass


class DomainError(ChiralSkinError, ValueError):
    pass


class QuadratureNotConverged(NumericsError):
    pass


class ZeroState(ChiralSkinError, ValueError):
    pass


class NoPeaks(NumericsError):
    pass


class BaseOnCurve(NumericsError):
    pass
