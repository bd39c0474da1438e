"""Semantic exception hierarchy for qgmaps.

Public functions raise these instead of bare ValueError/RuntimeError so
callers can distinguish domain violations from numerical trouble.
"""


class QGMapsError(Exception):
    """Base class for all qgmaps errors."""


class DomainError(QGMapsError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class NotNormalizableError(DomainError):
    """Entropic index q >= 3: the distribution cannot be normalized."""


class PoleError(DomainError):
    """Evaluation exactly at a pole of the map (duality at q = 5/3)."""


class ConvergenceError(QGMapsError, RuntimeError):
    """An iterative scheme failed to reach its residual tolerance."""


class UnsupportedParametersError(QGMapsError, ValueError):
    """Parameters outside the restricted regime this kernel supports."""


class CompositionError(QGMapsError, ValueError):
    """Maps are not composable: intermediate indices do not match."""
