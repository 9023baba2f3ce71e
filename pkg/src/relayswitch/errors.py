"""Exception hierarchy shared by every module."""


class RelaySwitchError(Exception):
    """Base class for all package errors."""


class ConfigurationError(RelaySwitchError, ValueError):
    """Inconsistent or malformed experiment/trace configuration."""


class ResolutionError(ConfigurationError):
    """Sample rate too low for the Doppler frequency of a hop."""


class InsufficientDataError(RelaySwitchError, ValueError):
    """Not enough samples for the requested statistic."""


class DomainError(RelaySwitchError, ValueError):
    """Argument outside the mathematical domain of a formula."""


class UnsupportedTopologyError(RelaySwitchError, ValueError):
    """Formula only defined for a different number of relays."""
