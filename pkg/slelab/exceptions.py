"""Custom Exceptions"""

class ConfigError(Exception):
    """Raised when a run configuration is invalid or incomplete."""

class InvalidTaskError(Exception):
    """Raised when an unsupported or non-existent task tag is referenced."""

class InvalidParameterError(ValueError):
    """Raised when a numerical parameter lies outside its admissible range."""

class SlitDomainError(ValueError):
    """Raised when a point lies on an open slit or inside a swallowed interval."""

class StepSizeError(RuntimeError):
    """Raised when an Euler step exceeds the stability bound."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step

class ResolutionError(ValueError):
    """Raised when a raster resolution is too coarse for the sampled trace."""

class InsufficientDataError(ValueError):
    """Raised when a truncated trace holds too few features for a statistic."""

class NotFoundError(LookupError):
    """Raised when a requested feature does not occur within the horizon."""


class NumericWarning(RuntimeWarning):
    """Issued when floating-point cancellation degrades a slit-map image."""

class UnresolvedTrialsWarning(RuntimeWarning):
    """Issued when Monte Carlo trials exhaust the horizon without resolving."""
