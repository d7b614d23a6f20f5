"""Weighted natural metrics on tangent bundles, their Levi-Civita connection,
and numerical certification on chart manifolds and TSO(3)."""

from importlib.metadata import PackageNotFoundError, version

from .bundle import (
    SASAKI,
    BundleChart,
    BundlePoint,
    BundleTangent,
    MetricWeights,
    bundle_metric,
    decompose_general_field,
    lc_connection_bundle,
    lc_connection_general,
    lc_connection_lifts,
    validate_weights,
)
from .exceptions import (
    AdmissibilityError,
    ChartDomainError,
    ConfigError,
    CutLocusError,
    DimensionError,
    MetricError,
    NonFiniteError,
    RotationError,
    TbgeoError,
)
from .geodesic import GeodesicTrajectory, integrate_geodesic
from .manifold import ChartManifold, VectorField, euclidean, sphere2_stereographic
from .so3 import exp_so3, log_so3, so3_curvature, tso3_connection_general, tso3_connection_left_invariant

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # pragma: no cover
    __version__ = "0.1.0"

__all__ = [
    "SASAKI",
    "AdmissibilityError",
    "BundleChart",
    "BundlePoint",
    "BundleTangent",
    "ChartDomainError",
    "ChartManifold",
    "ConfigError",
    "CutLocusError",
    "DimensionError",
    "GeodesicTrajectory",
    "MetricError",
    "MetricWeights",
    "NonFiniteError",
    "RotationError",
    "TbgeoError",
    "VectorField",
    "bundle_metric",
    "decompose_general_field",
    "euclidean",
    "exp_so3",
    "integrate_geodesic",
    "lc_connection_bundle",
    "lc_connection_general",
    "lc_connection_lifts",
    "log_so3",
    "so3_curvature",
    "sphere2_stereographic",
    "tso3_connection_general",
    "tso3_connection_left_invariant",
    "validate_weights",
]
