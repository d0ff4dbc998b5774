"""Exception and warning types raised by mixturecalc.

Input problems derive from ValueError, numerical breakdowns from RuntimeError,
so callers that only know the builtins still catch them.
"""


class MixtureError(Exception):
    """Base class for every error raised by this package."""


class MixtureWarning(UserWarning):
    """Recoverable numerical oddity (large informational residual, loose quadrature)."""


# Input / usage errors

class NonScalarMetric(MixtureError, ValueError):
    """The symmetrized mirrored product has a non-e0 channel."""


class NonScalarMagnitude(MixtureError, ValueError):
    """a * mirror(a) carries a vector remainder."""


class DegenerateVector(MixtureError, ValueError):
    """Null vector part where a unit direction is required."""


class AsymmetryError(MixtureError, ValueError):
    """A tensor expected to be antisymmetric is not."""


class WeakFieldViolation(MixtureError, ValueError):
    """Perturbation exceeds the weak-field guard."""


class ConfigError(MixtureError, ValueError):
    """Invalid scenario configuration.

    Args:
        message: Description of the problem
        key: Dotted key path of the offending entry, if known
    """

    def __init__(self, message: str, key: str = None):
        self.key = key
        if key:
            message = f"{key}: {message}"
        super().__init__(message)


class UnknownSuite(MixtureError, ValueError):
    """Requested verification suite does not exist."""


class UnknownDemo(MixtureError, ValueError):
    """Requested demo does not exist."""


# Numerical failures

class NonConvergence(MixtureError, RuntimeError):
    """Series or iteration did not reach tolerance."""


class SingularFrame(MixtureError, RuntimeError):
    """Frame matrix failed the inversion tolerance."""


class SingularMetric(MixtureError, RuntimeError):
    """Metric failed the inversion tolerance."""


class SingularGauge(MixtureError, RuntimeError):
    """Gauge matrix failed the inversion tolerance."""


class QuadratureFailure(MixtureError, RuntimeError):
    """Adaptive quadrature exhausted its budget."""


class RouteMismatch(MixtureError, RuntimeError):
    """Two computations of the same quantity disagree beyond tolerance."""
