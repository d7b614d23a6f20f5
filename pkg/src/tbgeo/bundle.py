"""Weighted metrics on the tangent bundle and their Levi-Civita connection.

Elements of T_(p,u)TM are represented by their horizontal and vertical parts
``(A, B) = (dpi(Xbar), K(Xbar))``, both tangent vectors at ``p``. The bundle
metric couples the two parts with weights ``(m1, m2, m3)``::

    gbar(Xbar, Ybar) = m1 g(A_X, A_Y) + m2 g(A_X, B_Y) + m2 g(B_X, A_Y) + m3 g(B_X, B_Y)

``m1 = m3 = 1, m2 = 0`` is the Sasaki metric. The induced chart on TM has
coordinates ``(x, u)`` and the connection map in that chart is
``K(xdot, udot) = udot + Gamma(x)(xdot, u)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_vector, frozen
from .exceptions import AdmissibilityError, DimensionError
from .manifold import (
    ChartManifold,
    VectorField,
    apply_riemann,
    as_field,
    christoffel,
    covariant_derivative,
    field_value,
    fd_jacobian,
    gram,
    koszul_rhs,
    lie_bracket,
    riemann_tensor,
)

HORIZONTAL = "h"
VERTICAL = "v"
# Pairing order used by koszul_pairings_oracle: (direction, field, test lift).
KOSZUL_ITEMS = (
    ("h", "h", "h"),
    ("h", "h", "v"),
    ("h", "v", "h"),
    ("h", "v", "v"),
    ("v", "h", "h"),
    ("v", "h", "v"),
    ("v", "v", "h"),
    ("v", "v", "v"),
)


@dataclass(frozen=True)
class MetricWeights:
    """Admissible weights: ``m1 > 0``, ``m3 > 0`` and ``m1*m3 - m2^2 > 0``."""

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        m1, m2, m3 = self.m1, self.m2, self.m3
        if not all(math.isfinite(m) for m in (m1, m2, m3)):
            raise AdmissibilityError("finite weights", m1, m2, m3)
        if not m1 > 0:
            raise AdmissibilityError("m1 > 0", m1, m2, m3)
        if not m3 > 0:
            raise AdmissibilityError("m3 > 0", m1, m2, m3)
        if not m1 * m3 - m2 * m2 > 0:
            raise AdmissibilityError("m1*m3 - m2^2 > 0", m1, m2, m3)

    @property
    def det(self):
        return self.m1 * self.m3 - self.m2 * self.m2

    def as_tuple(self):
        return (self.m1, self.m2, self.m3)


SASAKI = MetricWeights(1.0, 0.0, 1.0)


def validate_weights(m1, m2, m3):
    """Build :class:`MetricWeights`, raising :class:`AdmissibilityError` on failure."""
    return MetricWeights(float(m1), float(m2), float(m3))


def _raw(w):
    if isinstance(w, MetricWeights):
        return w.as_tuple()
    m1, m2, m3 = (float(m) for m in w)
    return m1, m2, m3


def _checked(w):
    return w if isinstance(w, MetricWeights) else validate_weights(*w)


@dataclass(frozen=True)
class BundlePoint:
    """A point (p, u) of TM in the induced chart."""

    base: np.ndarray
    fiber: np.ndarray

    def __post_init__(self):
        base = as_vector(self.base, name="base point")
        fiber = as_vector(self.fiber, base.shape[-1], "fiber vector")
        object.__setattr__(self, "base", frozen(base))
        object.__setattr__(self, "fiber", frozen(fiber))

    @property
    def dimension(self):
        return self.base.shape[-1]


@dataclass(frozen=True)
class BundleTangent:
    """Tangent vector to TM split as (horizontal, vertical) = (dpi, K)."""

    horizontal: np.ndarray
    vertical: np.ndarray

    def __post_init__(self):
        h = as_vector(self.horizontal, name="horizontal part")
        v = as_vector(self.vertical, h.shape[-1], "vertical part")
        if h.shape != v.shape:
            raise DimensionError("horizontal and vertical parts differ in shape")
        object.__setattr__(self, "horizontal", frozen(h))
        object.__setattr__(self, "vertical", frozen(v))

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n), np.zeros(n))

    @classmethod
    def from_array(cls, z):
        z = np.asarray(z, dtype=float)
        n = z.shape[-1] // 2
        return cls(z[..., :n], z[..., n:])

    def as_array(self):
        return np.concatenate([self.horizontal, self.vertical], axis=-1)

    def __add__(self, other):
        return BundleTangent(self.horizontal + other.horizontal, self.vertical + other.vertical)

    def __sub__(self, other):
        return BundleTangent(self.horizontal - other.horizontal, self.vertical - other.vertical)

    def __mul__(self, c):
        return BundleTangent(c * self.horizontal, c * self.vertical)

    __rmul__ = __mul__

    def __neg__(self):
        return BundleTangent(-self.horizontal, -self.vertical)


def _check_dims(M, P):
    if P.dimension != M.dimension:
        raise DimensionError(
            f"bundle point has dimension {P.dimension}, manifold has {M.dimension}"
        )


def bundle_metric(w, M, P, X, Y):
    """gbar_(p,u)(X, Y). Batched tangents (leading axes) are supported.

    ``w`` may be :class:`MetricWeights` or a raw triple; raw triples are not
    validated so the form can be probed outside the admissible region.
    """
    _check_dims(M, P)
    m1, m2, m3 = _raw(w)
    G = gram(M, P.base)

    def g(a, b):
        return np.einsum("...i,ij,...j->...", a, G, b)

    return (
        m1 * g(X.horizontal, Y.horizontal)
        + m2 * g(X.horizontal, Y.vertical)
        + m2 * g(X.vertical, Y.horizontal)
        + m3 * g(X.vertical, Y.vertical)
    )


def weight_matrix(w, n):
    """Block matrix [[m1 I, m2 I], [m2 I, m3 I]] of size 2n."""
    m1, m2, m3 = _raw(w)
    return np.kron(np.array([[m1, m2], [m2, m3]]), np.eye(n))


def weight_matrix_inverse(w, n):
    w = _checked(w)
    small = np.array([[w.m3, -w.m2], [-w.m2, w.m1]]) / w.det
    return np.kron(small, np.eye(n))


def horizontal_lift(X, P):
    X = as_vector(X, P.dimension, "X")
    return BundleTangent(X, np.zeros_like(X))


def vertical_lift(X, P):
    X = as_vector(X, P.dimension, "X")
    return BundleTangent(np.zeros_like(X), X)


def lift(X, P, kind):
    if kind == HORIZONTAL:
        return horizontal_lift(X, P)
    if kind == VERTICAL:
        return vertical_lift(X, P)
    raise ValueError(f"lift kind must be 'h' or 'v', got {kind!r}")


def _gamma_contract(Gam, a, u):
    return np.einsum("kij,i,j->k", Gam, a, u)


def chart_to_bundle_tangent(M, P, xdot, udot):
    """Convert induced-chart velocity (xdot, udot) to (dpi, K) parts."""
    _check_dims(M, P)
    xdot = M.check_vector(xdot, "xdot")
    udot = M.check_vector(udot, "udot")
    Gam = christoffel(M, P.base)
    return BundleTangent(xdot, udot + _gamma_contract(Gam, xdot, P.fiber))


def bundle_tangent_to_chart(M, P, X):
    """Inverse of :func:`chart_to_bundle_tangent`; returns ``(xdot, udot)``."""
    _check_dims(M, P)
    Gam = christoffel(M, P.base)
    return X.horizontal, X.vertical - _gamma_contract(Gam, X.horizontal, P.fiber)


def f_map(w, X):
    """Apply the inverse weight matrix to the (dpi, K) parts of ``X``.

    ``gbar(f_map(w, X), Y) = g(X_h, Y_h) + g(X_v, Y_v)`` for every ``Y``.
    """
    w = _checked(w)
    d = w.det
    h, v = X.horizontal, X.vertical
    return BundleTangent((w.m3 * h - w.m2 * v) / d, (-w.m2 * h + w.m1 * v) / d)


def lift_bracket_oracle(M, X, Y, P, kind_x, kind_y):
    """Lie bracket of lifted fields from the base connection and curvature.

    [X^v, Y^v] = 0, [X^h, Y^v] = (nabla_X Y)^v,
    [X^h, Y^h] = [X, Y]^h - (R(X, Y)u)^v.
    """
    _check_dims(M, P)
    p, u = P.base, P.fiber
    n = M.dimension
    zero = np.zeros(n)
    if kind_x == VERTICAL and kind_y == VERTICAL:
        return BundleTangent.zeros(n)
    if kind_x == HORIZONTAL and kind_y == VERTICAL:
        return BundleTangent(zero, covariant_derivative(M, X, Y, p))
    if kind_x == VERTICAL and kind_y == HORIZONTAL:
        return BundleTangent(zero, -covariant_derivative(M, Y, X, p))
    if kind_x == HORIZONTAL and kind_y == HORIZONTAL:
        Xp, Yp = field_value(X, p), field_value(Y, p)
        R = riemann_tensor(M, p)
        return BundleTangent(lie_bracket(X, Y, p), -apply_riemann(R, Xp, Yp, u))
    raise ValueError(f"lift kinds must be 'h' or 'v', got {kind_x!r}, {kind_y!r}")


# --- closed-form connection -------------------------------------------------


def _block(w, u, kind_direction, kind_field, X, Y, nabla_XY, curv):
    """Parts (H, V) of nabla-bar_{X^a} Y^b as base-level vectors."""
    m1, m2, m3 = w.m1, w.m2, w.m3
    d = w.det
    if kind_direction == HORIZONTAL and kind_field == HORIZONTAL:
        r_uxy = curv(u, X, Y)
        r_xyu = curv(X, Y, u)
        H = nabla_XY + (m2 * m3 * r_uxy + 0.5 * m2 * m3 * r_xyu) / d
        V = (-m2 * m2 * r_uxy - 0.5 * m1 * m3 * r_xyu) / d
        return H, V
    if kind_direction == HORIZONTAL and kind_field == VERTICAL:
        r_uyx = curv(u, Y, X)
        return 0.5 * m3 * m3 * r_uyx / d, nabla_XY - 0.5 * m2 * m3 * r_uyx / d
    if kind_direction == VERTICAL and kind_field == HORIZONTAL:
        r_uxy = curv(u, X, Y)
        return 0.5 * m3 * m3 * r_uxy / d, -0.5 * m2 * m3 * r_uxy / d
    if kind_direction == VERTICAL and kind_field == VERTICAL:
        return np.zeros_like(u), np.zeros_like(u)
    raise ValueError(f"lift kinds must be 'h' or 'v', got {kind_direction!r}, {kind_field!r}")


def levi_civita_components(w, u, F, G, A, B, nabla_FA, nabla_FB, curvature_fn):
    """Connection of gbar from base-level ingredients.

    Computes nabla-bar_{F^h + G^v}(A^h + B^v) at a point with fiber ``u``,
    given the base covariant derivatives ``nabla_F A`` and ``nabla_F B`` and a
    callable ``curvature_fn(x, y, z) = R(x, y)z``. Works on any base for
    which those are available (charts, Lie groups).
    """
    w = _checked(w)
    u = np.asarray(u, dtype=float)
    H = np.zeros_like(u)
    V = np.zeros_like(u)
    for kd, kf, X, Y, nab in (
        ("h", "h", F, A, nabla_FA),
        ("h", "v", F, B, nabla_FB),
        ("v", "h", G, A, None),
        ("v", "v", G, B, None),
    ):
        h, v = _block(w, u, kd, kf, X, Y, nab, curvature_fn)
        H = H + h
        V = V + v
    return BundleTangent(H, V)


def _chart_curvature(M, p):
    R = riemann_tensor(M, p)
    return lambda x, y, z: apply_riemann(R, x, y, z)


def lc_connection_lifts(w, M, P, direction, field, kind_direction, kind_field):
    """nabla-bar_{X^a} Y^b for lifts of base fields.

    ``direction`` is X (only its value at ``P.base`` is used); ``field`` is
    the base field Y. ``kind_direction`` and ``kind_field`` are ``'h'`` or
    ``'v'``.
    """
    w = _checked(w)
    _check_dims(M, P)
    p, u = P.base, P.fiber
    X = M.check_vector(field_value(direction, p), "direction")
    Yf = as_field(field)
    Y = M.check_vector(Yf(p), "field")
    nabla = covariant_derivative(M, X, Yf, p) if kind_direction == HORIZONTAL else None
    H, V = _block(w, u, kind_direction, kind_field, X, Y, nabla, _chart_curvature(M, p))
    return BundleTangent(H, V)


def lc_connection_bundle(w, M, P, F, G, A, B):
    """nabla-bar_{F^h + G^v}(A^h + B^v) for base fields ``A`` and ``B``."""
    w = _checked(w)
    _check_dims(M, P)
    p = P.base
    F = M.check_vector(field_value(F, p), "F")
    G = M.check_vector(field_value(G, p), "G")
    Af, Bf = as_field(A), as_field(B)
    return levi_civita_components(
        w,
        P.fiber,
        F,
        G,
        Af(p),
        Bf(p),
        covariant_derivative(M, F, Af, p),
        covariant_derivative(M, F, Bf, p),
        _chart_curvature(M, p),
    )


def koszul_pairings_oracle(w, M, P, X, Y, Z):
    """The eight values 2 gbar(nabla-bar_{X^a} Y^b, Z^c), from base geometry.

    Order follows :data:`KOSZUL_ITEMS`. The base term 2 g(nabla_X Y, Z) is
    taken from the Koszul formula on M, not from the covariant derivative.
    """
    w = _checked(w)
    _check_dims(M, P)
    p, u = P.base, P.fiber
    Xp, Yp, Zp = (field_value(f, p) for f in (X, Y, Z))
    G = gram(M, p)
    curv = _chart_curvature(M, p)
    two_nabla = koszul_rhs(M, X, Y, Z, p)
    r_uxy = curv(u, Xp, Yp) @ G @ Zp
    r_xyu = curv(Xp, Yp, u) @ G @ Zp
    r_uyx = curv(u, Yp, Xp) @ G @ Zp
    m1, m2, m3 = w.as_tuple()
    return np.array(
        [
            m1 * two_nabla + 2.0 * m2 * r_uxy,
            m2 * two_nabla - m3 * r_xyu,
            m2 * two_nabla + m3 * r_uyx,
            m3 * two_nabla,
            m3 * r_uxy,
            0.0,
            0.0,
            0.0,
        ]
    )


# --- general (fiber-varying) fields ----------------------------------------


@dataclass(frozen=True)
class GeneralFieldDecomposition:
    """A bundle field near (p, u) split into lift-decomposable part plus residual.

    ``A`` and ``B`` are base fields describing how the (dpi, K) parts change
    along horizontal directions; ``dC_du`` and ``dD_du`` are the fiber
    Jacobians of the horizontal and vertical residuals, which vanish at the
    anchor point.
    """

    A: VectorField
    B: VectorField
    dC_du: np.ndarray
    dD_du: np.ndarray


def decompose_general_field(M, P, field_fn):
    """Decompose a bundle field given as ``field_fn(x, u) -> (A, B)``.

    The returned ``A``, ``B`` follow the field along the first-order
    horizontal transport ``u -> u - Gamma(p)(x - p, u)`` of the anchor fiber.
    """
    _check_dims(M, P)
    p, u = np.array(P.base), np.array(P.fiber)
    Gam = christoffel(M, p)
    h = M.fd_step

    def transported(x):
        return u - np.einsum("kij,i,j->k", Gam, x - p, u)

    A = VectorField(lambda x: np.asarray(field_fn(x, transported(x))[0], dtype=float), fd_step=h)
    B = VectorField(lambda x: np.asarray(field_fn(x, transported(x))[1], dtype=float), fd_step=h)
    dC = fd_jacobian(lambda v: np.asarray(field_fn(p, v)[0], dtype=float), u, h)
    dD = fd_jacobian(lambda v: np.asarray(field_fn(p, v)[1], dtype=float), u, h)
    return GeneralFieldDecomposition(A, B, frozen(dC), frozen(dD))


def lc_connection_general(w, M, P, direction, field):
    """Connection for a general bundle field.

    Lift-decomposable part through :func:`lc_connection_bundle`, plus the
    flat fiber derivative ``(dC_du G, dD_du G)`` along the vertical part
    ``G`` of ``direction``.
    """
    n = M.dimension
    dC = np.asarray(field.dC_du, dtype=float)
    dD = np.asarray(field.dD_du, dtype=float)
    if dC.shape != (n, n) or dD.shape != (n, n):
        raise DimensionError(f"fiber Jacobians must be {n}x{n}")
    F, G = direction.horizontal, direction.vertical
    base = lc_connection_bundle(w, M, P, F, G, field.A, field.B)
    return base + BundleTangent(dC @ G, dD @ G)


# --- induced chart on TM ----------------------------------------------------


def induced_bundle_gram(w, M, x, u):
    """Gram matrix of gbar on induced-chart tangents (xdot, udot)."""
    x = M.check_point(x)
    u = M.check_vector(u, "fiber vector")
    n = M.dimension
    G = gram(M, x)
    N = np.einsum("kij,j->ki", christoffel(M, x), u)
    L = np.block([[np.eye(n), np.zeros((n, n))], [N, np.eye(n)]])
    m1, m2, m3 = _raw(w)
    core = np.kron(np.array([[m1, m2], [m2, m3]]), G)
    out = L.T @ core @ L
    return 0.5 * (out + out.T)


@dataclass(frozen=True)
class BundleChart:
    """Induced chart (x, u) on TM, exposed as a 2n-dimensional manifold.

    ``fiber_bound`` bounds the fiber box; the base box is inherited.
    """

    base_manifold: ChartManifold
    weights: MetricWeights
    fiber_bound: float = 50.0

    def manifold(self, fd_step=None):
        M, w = self.base_manifold, _checked(self.weights)
        n = M.dimension
        lo = M.lower if M.lower is not None else np.full(n, -np.inf)
        hi = M.upper if M.upper is not None else np.full(n, np.inf)
        return ChartManifold(
            2 * n,
            lambda z: induced_bundle_gram(w, M, z[:n], z[n:]),
            lower=np.concatenate([lo, np.full(n, -self.fiber_bound)]),
            upper=np.concatenate([hi, np.full(n, self.fiber_bound)]),
            fd_step=fd_step or M.fd_step,
            name=f"T{M.name}",
        )

    def lifted_field(self, field, kind):
        """Induced-chart components of the horizontal or vertical lift."""
        M = self.base_manifold
        n = M.dimension
        f = as_field(field)

        def horizontal(z):
            x, u = z[:n], z[n:]
            X = f(x)
            return np.concatenate([X, -_gamma_contract(christoffel(M, x), X, u)])

        def vertical(z):
            return np.concatenate([np.zeros(n), f(z[:n])])

        if kind == HORIZONTAL:
            return VectorField(horizontal, fd_step=M.fd_step)
        if kind == VERTICAL:
            return VectorField(vertical, fd_step=M.fd_step)
        raise ValueError(f"lift kind must be 'h' or 'v', got {kind!r}")

    def general_field(self, field_fn):
        """Induced-chart components of a field given by (dpi, K) parts."""
        M = self.base_manifold
        n = M.dimension

        def fn(z):
            x, u = z[:n], z[n:]
            A, B = (np.asarray(c, dtype=float) for c in field_fn(x, u))
            return np.concatenate([A, B - _gamma_contract(christoffel(M, x), A, u)])

        return VectorField(fn, fd_step=M.fd_step)

    def to_bundle_tangent(self, z, zdot):
        n = self.base_manifold.dimension
        P = BundlePoint(z[:n], z[n:])
        return chart_to_bundle_tangent(self.base_manifold, P, zdot[:n], zdot[n:])

    def from_bundle_tangent(self, P, X):
        return np.concatenate(bundle_tangent_to_chart(self.base_manifold, P, X))


def brute_force_connection(w, M, P, direction, chart_field_fn, fd_step=None):
    """nabla-bar computed from the Christoffels of the induced chart metric.

    ``chart_field_fn`` is a :class:`VectorField` on the 2n-dimensional chart
    (see :meth:`BundleChart.lifted_field` and :meth:`BundleChart.general_field`).
    Returns the result as (dpi, K) parts.
    """
    chart = BundleChart(M, _checked(w))
    TM = chart.manifold(fd_step)
    z = np.concatenate([P.base, P.fiber])
    zdot = chart.from_bundle_tangent(P, direction)
    comps = covariant_derivative(TM, zdot, chart_field_fn, z)
    return chart.to_bundle_tangent(z, comps)


def lift_bracket_fd(M, X, Y, P, kind_x, kind_y):
    """Lie bracket of lifted fields by finite differences in the induced chart."""
    chart = BundleChart(M, SASAKI)
    z = np.concatenate([P.base, P.fiber])
    comps = lie_bracket(chart.lifted_field(X, kind_x), chart.lifted_field(Y, kind_y), z)
    return chart.to_bundle_tangent(z, comps)


__all__ = [
    "HORIZONTAL",
    "VERTICAL",
    "KOSZUL_ITEMS",
    "SASAKI",
    "MetricWeights",
    "BundlePoint",
    "BundleTangent",
    "BundleChart",
    "GeneralFieldDecomposition",
    "validate_weights",
    "bundle_metric",
    "weight_matrix",
    "weight_matrix_inverse",
    "horizontal_lift",
    "vertical_lift",
    "lift",
    "chart_to_bundle_tangent",
    "bundle_tangent_to_chart",
    "f_map",
    "lift_bracket_oracle",
    "lift_bracket_fd",
    "levi_civita_components",
    "lc_connection_lifts",
    "lc_connection_bundle",
    "koszul_pairings_oracle",
    "decompose_general_field",
    "lc_connection_general",
    "induced_bundle_gram",
    "brute_force_connection",
]
