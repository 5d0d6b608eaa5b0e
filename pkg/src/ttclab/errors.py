"""Exception types shared across the package."""


class TtclabError(Exception):
    """Base class for all package-specific errors."""


class BasisError(TtclabError, ValueError):
    """Invalid spin-basis specification (e.g. particle count below one)."""


class ContractViolationError(TtclabError, ValueError):
    """An input violated a numerical contract (non-Hermitian, non-unitary,
    non-orthonormal, ...)."""


class InsufficientDataError(TtclabError, ValueError):
    """Not enough data points for the requested statistic."""


class PoleProximityError(TtclabError, RuntimeError):
    """A classical trajectory reached the |z| = 1 coordinate pole."""


class ConfigError(TtclabError, ValueError):
    """Invalid or inconsistent run configuration."""
