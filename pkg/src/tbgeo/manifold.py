"""Chart-based Riemannian manifolds.

A :class:`ChartManifold` is a single chart (an open axis-aligned box in R^n)
together with the Gram matrix of the metric as a function of the chart
coordinates. Christoffel symbols and the Riemann tensor are derived from it by
central finite differences unless analytic overrides are supplied.

Index conventions
-----------------
``christoffel(M, p)[k, i, j]`` is the symbol with upper index ``k``.
``riemann_tensor(M, p)[k, l, i, j]`` holds the components of the curvature
operator, so that ``curvature(M, x, y, z, p)[k] = R[k, l, i, j] x^i y^j z^l``
with ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._validation import as_vector, check_finite
from .exceptions import ChartDomainError, DimensionError, MetricError

DEFAULT_STEP = 1e-5
# Step for differentiating quantities that are themselves finite differences.
DEFAULT_NESTED_STEP = 1e-4
SYMMETRY_TOL = 1e-12


def _steps(x, h):
    return h * np.maximum(1.0, np.abs(x))


def fd_jacobian(fn, x, h=DEFAULT_STEP):
    """Central-difference Jacobian of ``fn`` at ``x``.

    The derivative axis is appended last: for ``fn(x)`` of shape ``S`` the
    result has shape ``S + (len(x),)``.
    """
    x = np.asarray(x, dtype=float)
    steps = _steps(x, h)
    cols = []
    for j in range(x.shape[0]):
        e = np.zeros_like(x)
        e[j] = steps[j]
        cols.append((np.asarray(fn(x + e)) - np.asarray(fn(x - e))) / (2.0 * steps[j]))
    return check_finite(np.stack(cols, axis=-1), "finite-difference derivative")


@dataclass(frozen=True)
class VectorField:
    """A vector field given by its chart components.

    ``jacobian(p)[k, i]`` is the partial derivative of component ``k`` along
    coordinate ``i``; when it is not supplied it is estimated by central
    differences with step ``fd_step``.
    """

    fn: Callable
    jacobian_fn: Optional[Callable] = None
    fd_step: float = DEFAULT_STEP

    def __call__(self, p):
        return np.asarray(self.fn(np.asarray(p, dtype=float)), dtype=float)

    def jacobian(self, p):
        p = np.asarray(p, dtype=float)
        if self.jacobian_fn is not None:
            return np.asarray(self.jacobian_fn(p), dtype=float)
        return fd_jacobian(self.fn, p, self.fd_step)

    @classmethod
    def constant(cls, v):
        v = np.array(v, dtype=float)
        return cls(lambda p: v, lambda p: np.zeros((v.shape[0], p.shape[0])))

    @classmethod
    def coordinate(cls, i, n):
        """The coordinate field d/dx^i."""
        e = np.zeros(n)
        e[i] = 1.0
        return cls.constant(e)


def as_field(obj):
    """Accept a :class:`VectorField`, a callable, or a constant component array."""
    if isinstance(obj, VectorField):
        return obj
    if callable(obj):
        return VectorField(obj)
    return VectorField.constant(obj)


def field_value(obj, p):
    """Value at ``p`` of a field, or ``obj`` itself when it is already a vector."""
    if isinstance(obj, VectorField) or callable(obj):
        return np.asarray(obj(p), dtype=float)
    return np.asarray(obj, dtype=float)


@dataclass(frozen=True)
class ChartManifold:
    """A Riemannian manifold described in one chart.

    Parameters
    ----------
    dimension : int
    metric_fn : callable
        Maps chart coordinates to the symmetric positive definite Gram matrix.
    lower, upper : array_like, optional
        Bounds of the open box chart domain. ``None`` means unbounded.
    christoffel_fn, riemann_fn : callable, optional
        Analytic overrides, same index layout as :func:`christoffel` and
        :func:`riemann_tensor`.
    """

    dimension: int
    metric_fn: Callable
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    christoffel_fn: Optional[Callable] = None
    riemann_fn: Optional[Callable] = None
    fd_step: float = DEFAULT_STEP
    nested_step: float = DEFAULT_NESTED_STEP
    name: str = field(default="chart", compare=False)

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise DimensionError("dimension must be a positive integer")
        for attr in ("lower", "upper"):
            val = getattr(self, attr)
            if val is not None:
                val = np.broadcast_to(np.asarray(val, dtype=float), (self.dimension,)).copy()
                val.setflags(write=False)
                object.__setattr__(self, attr, val)

    def check_point(self, p):
        p = as_vector(p, self.dimension, "chart point")
        if p.ndim != 1:
            raise DimensionError("chart point must be a single coordinate vector")
        if self.lower is not None and np.any(p <= self.lower):
            raise ChartDomainError(f"point {p} outside chart domain (lower bound {self.lower})")
        if self.upper is not None and np.any(p >= self.upper):
            raise ChartDomainError(f"point {p} outside chart domain (upper bound {self.upper})")
        return p

    def check_vector(self, v, name="tangent vector"):
        return as_vector(v, self.dimension, name)

    def sample_point(self, rng, margin=0.5):
        """Uniform point in the chart box shrunk by ``margin`` (fraction kept)."""
        lo = self.lower if self.lower is not None else -np.ones(self.dimension)
        hi = self.upper if self.upper is not None else np.ones(self.dimension)
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo) * margin
        return rng.uniform(mid - half, mid + half)


def gram(M, p):
    """Validated Gram matrix of the metric at ``p``."""
    p = M.check_point(p)
    G = np.asarray(M.metric_fn(p), dtype=float)
    n = M.dimension
    if G.shape != (n, n):
        raise MetricError(f"metric_fn returned shape {G.shape}, expected {(n, n)}")
    if not np.all(np.isfinite(G)):
        raise MetricError("metric_fn returned non-finite entries")
    if np.max(np.abs(G - G.T)) > SYMMETRY_TOL * max(1.0, np.max(np.abs(G))):
        raise MetricError("metric Gram matrix is not symmetric")
    try:
        np.linalg.cholesky(G)
    except np.linalg.LinAlgError:
        raise MetricError(f"metric Gram matrix is not positive definite at {p}") from None
    return G


def metric_eval(M, p, v, w):
    """Evaluate g_p(v, w). Leading batch axes of ``v`` and ``w`` broadcast."""
    G = gram(M, p)
    v = M.check_vector(v)
    w = M.check_vector(w)
    return np.einsum("...i,ij,...j->...", v, G, w)


def _fd_christoffel(M, p):
    G = np.asarray(M.metric_fn(p), dtype=float)
    dG = fd_jacobian(M.metric_fn, p, M.fd_step)  # dG[i, j, l] = d_l G_ij
    try:
        Ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError:
        raise MetricError(f"singular metric at {p}") from None
    # lowered[l, i, j] = d_i G_jl + d_j G_il - d_l G_ij
    lowered = np.einsum("jli->lij", dG) + np.einsum("ilj->lij", dG) - np.einsum("ijl->lij", dG)
    return 0.5 * np.einsum("kl,lij->kij", Ginv, lowered)


def _christoffel_raw(M, p):
    if M.christoffel_fn is not None:
        return np.asarray(M.christoffel_fn(p), dtype=float)
    return _fd_christoffel(M, p)


def christoffel(M, p):
    """Christoffel symbols of the Levi-Civita connection at ``p``."""
    p = M.check_point(p)
    gram(M, p)
    return check_finite(_christoffel_raw(M, p), "Christoffel symbols")


def riemann_tensor(M, p):
    """Curvature components ``R[k, l, i, j]`` at ``p`` (see module docstring)."""
    p = M.check_point(p)
    if M.riemann_fn is not None:
        return np.asarray(M.riemann_fn(p), dtype=float)
    step = M.fd_step if M.christoffel_fn is not None else M.nested_step
    Gam = _christoffel_raw(M, p)
    dGam = fd_jacobian(lambda q: _christoffel_raw(M, q), p, step)  # [k, i, j, d]
    R = (
        np.einsum("kjli->klij", dGam)
        - np.einsum("kilj->klij", dGam)
        + np.einsum("kim,mjl->klij", Gam, Gam)
        - np.einsum("kjm,mil->klij", Gam, Gam)
    )
    return check_finite(R, "curvature tensor")


def apply_riemann(R, x, y, z):
    """Contract a curvature tensor with vectors: R(x, y)z."""
    return np.einsum("klij,i,j,l->k", R, x, y, z)


def curvature(M, x, y, z, p):
    """The curvature operator R(x, y)z at ``p``."""
    x, y, z = (M.check_vector(a) for a in (x, y, z))
    return apply_riemann(riemann_tensor(M, p), x, y, z)


def covariant_derivative(M, X, Y, p):
    """(nabla_X Y)(p).

    ``X`` only matters through its value at ``p`` and may be a plain vector;
    ``Y`` must be a field (a bare array is read as constant chart components).
    """
    p = M.check_point(p)
    Xp = M.check_vector(field_value(X, p), "X")
    Yf = as_field(Y)
    Yp = M.check_vector(Yf(p), "Y")
    J = check_finite(Yf.jacobian(p), "field Jacobian")
    return J @ Xp + np.einsum("kij,i,j->k", christoffel(M, p), Xp, Yp)


def lie_bracket(X, Y, p):
    """[X, Y](p) = DY.X - DX.Y in chart components."""
    Xf, Yf = as_field(X), as_field(Y)
    p = np.asarray(p, dtype=float)
    out = Yf.jacobian(p) @ Xf(p) - Xf.jacobian(p) @ Yf(p)
    return check_finite(out, "Lie bracket")


def _directional(M, fn, X, p):
    return fd_jacobian(fn, p, M.fd_step) @ X


def koszul_rhs(M, X, Y, Z, p):
    """Right-hand side of the Koszul formula; equals 2 g(nabla_X Y, Z) at ``p``."""
    p = M.check_point(p)
    Xf, Yf, Zf = as_field(X), as_field(Y), as_field(Z)

    def g(a, b):
        return lambda q: a(q) @ np.asarray(M.metric_fn(q), dtype=float) @ b(q)

    G = gram(M, p)
    Xp, Yp, Zp = Xf(p), Yf(p), Zf(p)
    total = (
        _directional(M, g(Yf, Zf), Xp, p)
        + _directional(M, g(Xf, Zf), Yp, p)
        - _directional(M, g(Xf, Yf), Zp, p)
        + lie_bracket(Xf, Yf, p) @ G @ Zp
        - lie_bracket(Xf, Zf, p) @ G @ Yp
        - lie_bracket(Yf, Zf, p) @ G @ Xp
    )
    return float(check_finite(total, "Koszul terms"))


def override_discrepancy(M, points):
    """Largest gap between analytic overrides and finite differences.

    Returns ``(christoffel_gap, riemann_gap)``; a gap is 0.0 when the
    corresponding override is absent.
    """
    fd = ChartManifold(M.dimension, M.metric_fn, M.lower, M.upper,
                       fd_step=M.fd_step, nested_step=M.nested_step)
    gam_gap = riem_gap = 0.0
    for p in points:
        if M.christoffel_fn is not None:
            gam_gap = max(gam_gap, np.max(np.abs(christoffel(M, p) - christoffel(fd, p))))
        if M.riemann_fn is not None:
            riem_gap = max(riem_gap, np.max(np.abs(riemann_tensor(M, p) - riemann_tensor(fd, p))))
    return gam_gap, riem_gap


# --- concrete charts --------------------------------------------------------


def euclidean(n=2):
    """R^n with the identity metric and exact zero connection."""
    eye = np.eye(n)
    return ChartManifold(
        n,
        lambda p: eye,
        christoffel_fn=lambda p: np.zeros((n, n, n)),
        riemann_fn=lambda p: np.zeros((n, n, n, n)),
        name=f"euclidean_{n}",
    )


def _sphere_factor(p):
    return 4.0 / (1.0 + p @ p) ** 2


def sphere2_stereographic(analytic=True, bound=3.0):
    """Unit 2-sphere in stereographic coordinates, g = 4/(1+|x|^2)^2 I.

    With ``analytic=False`` Christoffels and curvature come from finite
    differences of the metric only.
    """
    eye = np.eye(2)

    def metric(p):
        return _sphere_factor(p) * eye

    def gamma(p):
        dphi = -2.0 * p / (1.0 + p @ p)
        return (
            np.einsum("ki,j->kij", eye, dphi)
            + np.einsum("kj,i->kij", eye, dphi)
            - np.einsum("ij,k->kij", eye, dphi)
        )

    def riemann(p):
        # constant curvature 1: R(x, y)z = g(y, z)x - g(x, z)y
        G = metric(p)
        return np.einsum("ki,jl->klij", eye, G) - np.einsum("kj,il->klij", eye, G)

    return ChartManifold(
        2,
        metric,
        lower=-bound,
        upper=bound,
        christoffel_fn=gamma if analytic else None,
        riemann_fn=riemann if analytic else None,
        name="sphere2_stereographic",
    )
