"""Exception types raised by tbgeo."""


class TbgeoError(Exception):
    """Base class for all errors raised by this package."""


class DimensionError(TbgeoError, ValueError):
    """Array argument has the wrong shape for the manifold it is used with."""


class ChartDomainError(TbgeoError, ValueError):
    """Point lies outside the open box on which a chart is declared."""


class MetricError(TbgeoError, ValueError):
    """Metric Gram matrix is not symmetric positive definite, or is singular."""


class NonFiniteError(TbgeoError, ValueError):
    """A finite-difference estimate or input contains NaN or infinity."""


class AdmissibilityError(TbgeoError, ValueError):
    """Metric weights do not define a Riemannian metric on the tangent bundle.

    Attributes
    ----------
    condition : str
        The inequality that failed, e.g. ``"m1*m3 - m2^2 > 0"``.
    """

    def __init__(self, condition, m1, m2, m3):
        self.condition = condition
        self.weights = (m1, m2, m3)
        super().__init__(
            f"inadmissible metric weights (m1={m1!r}, m2={m2!r}, m3={m3!r}): "
            f"requires {condition}"
        )


class RotationError(TbgeoError, ValueError):
    """Matrix is not a rotation (orthogonal with determinant +1)."""


class CutLocusError(TbgeoError, ValueError):
    """Logarithm requested at a rotation by (nearly) pi."""


class ConfigError(TbgeoError, ValueError):
    """Run configuration could not be parsed or is inconsistent."""
