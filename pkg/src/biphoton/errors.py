"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical-guard trips (aliasing, quadrature non-convergence) with 3.
"""


class ConfigurationError(ValueError):
    """Invalid parameters, element ordering, weights, or config file."""


class DomainError(ValueError):
    """A requested coordinate lies outside the sampled grid."""


class GridMismatchError(ValueError):
    """Two fields or a field and a kernel live on incompatible grids."""


class UnsupportedElementError(TypeError):
    """An operation was asked for an element it cannot represent."""


class SamplingError(RuntimeError):
    """A grid is too coarse: chirp aliasing or unresolved fringes."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ShapeError(ValueError):
    """A sampled curve does not have the shape an estimator requires."""
