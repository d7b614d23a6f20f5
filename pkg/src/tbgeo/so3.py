"""SO(3) and its tangent bundle with the weighted metric.

Tangent vectors at ``R`` are written ``R hat(a)`` with body coordinates
``a``; the base metric is bi-invariant, ``g(R hat(a), R hat(b)) = a . b``.
A point of TSO(3) is ``(R, R hat(omega))`` and bundle tangents in the
left-trivialized (dpi, K) split are pairs of body vectors.
"""

from dataclasses import dataclass, field

import numpy as np

from ._validation import as_matrix, as_vector, frozen
from .bundle import MetricWeights, levi_civita_components, validate_weights
from .exceptions import CutLocusError, RotationError
from .manifold import ChartManifold

ORTHO_TOL = 1e-10
_SMALL_ANGLE = 1e-4


def hat(v):
    """Skew matrix with ``hat(v) @ w == cross(v, w)``."""
    x, y, z = as_vector(v, 3, "body vector")
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def vee(m, tol=ORTHO_TOL):
    m = as_matrix(m, (3, 3), "skew matrix")
    if np.max(np.abs(m + m.T)) > tol * max(1.0, np.max(np.abs(m))):
        raise ValueError("vee requires a skew-symmetric matrix")
    return 0.5 * np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]])


def cross(a, b):
    """Cross product of two 3-vectors (``np.cross`` has heavy per-call overhead)."""
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def bracket(a, b):
    return a @ b - b @ a


def check_rotation(R, tol=ORTHO_TOL):
    R = as_matrix(R, (3, 3), "rotation")
    if np.max(np.abs(R.T @ R - np.eye(3))) > tol:
        raise RotationError("matrix is not orthogonal")
    if abs(np.linalg.det(R) - 1.0) > tol:
        raise RotationError("rotation must have determinant +1")
    return R


def project_to_so3(M):
    """Closest rotation in Frobenius norm (polar factor)."""
    U, _, Vt = np.linalg.svd(np.asarray(M, dtype=float))
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return R


def exp_so3(v):
    """Rodrigues formula, with Taylor coefficients for small angles."""
    v = as_vector(v, 3, "rotation vector")
    th2 = v @ v
    th = np.sqrt(th2)
    if th < _SMALL_ANGLE:
        a = 1.0 - th2 / 6.0 + th2 * th2 / 120.0
        b = 0.5 - th2 / 24.0 + th2 * th2 / 720.0
    else:
        a = np.sin(th) / th
        b = (1.0 - np.cos(th)) / th2
    K = hat(v)
    return np.eye(3) + a * K + b * (K @ K)


def log_so3(R, eps=1e-6):
    R = check_rotation(R)
    tr = np.trace(R)
    if tr <= -1.0 + eps:
        raise CutLocusError("rotation angle too close to pi for a unique logarithm")
    w = 0.5 * np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    th = np.arctan2(np.linalg.norm(w), 0.5 * (tr - 1.0))
    if th < _SMALL_ANGLE:
        return (1.0 + th * th / 6.0) * w
    return th / np.sin(th) * w


def right_jacobian(v):
    """``J`` with ``exp(v)^T d exp(v) = hat(J dv)``."""
    v = as_vector(v, 3, "rotation vector")
    th2 = v @ v
    if np.sqrt(th2) < _SMALL_ANGLE:
        a = 0.5 - th2 / 24.0
        b = 1.0 / 6.0 - th2 / 120.0
    else:
        th = np.sqrt(th2)
        a = (1.0 - np.cos(th)) / th2
        b = (th - np.sin(th)) / (th2 * th)
    K = hat(v)
    return np.eye(3) - a * K + b * (K @ K)


def so3_exponential_chart(bound=1.5):
    """SO(3) near the identity in exponential coordinates, bi-invariant metric.

    The chart is ``x -> exp(hat(x))``; by left invariance it models a
    neighbourhood of any rotation.
    """

    def metric(x):
        J = right_jacobian(x)
        return J.T @ J

    return ChartManifold(3, metric, lower=-bound, upper=bound, name="so3")


def to_body(R, M):
    """Body coordinates of a tangent matrix ``M`` at ``R``."""
    return vee(R.T @ M, tol=1e-8)


def edelman_connection(R, zeta, alpha, Ydot=None):
    """nabla_X Y = Ydot + 1/2 R (X^T Y + Y^T X) with X = R hat(zeta), Y = R hat(alpha).

    ``Ydot`` is the ambient derivative of Y along X, as a 3x3 matrix; it
    defaults to ``R hat(zeta) hat(alpha)``, the value for a left-invariant Y.
    """
    R = check_rotation(R)
    X = R @ hat(zeta)
    Y = R @ hat(alpha)
    if Ydot is None:
        Ydot = X @ hat(alpha)
    Ydot = as_matrix(Ydot, (3, 3), "Ydot")
    return Ydot + 0.5 * R @ (X.T @ Y + Y.T @ X)


def so3_curvature(x, y, z, sign=-1.0):
    """R(x, y)z = -1/4 [[x, y], z] in body coordinates.

    ``sign=+1`` gives the opposite convention; it exists only to show that
    the closed-form bundle connection fails to match under it.
    """
    x, y, z = (as_vector(a, 3) for a in (x, y, z))
    return 0.25 * sign * cross(cross(x, y), z)


def tso3_metric(w, a, b, c, d):
    """gbar((a, b), (c, d)) for body-coordinate (dpi, K) pairs."""
    m1, m2, m3 = (w.m1, w.m2, w.m3) if isinstance(w, MetricWeights) else w
    return m1 * (a @ c) + m2 * (a @ d + b @ c) + m3 * (b @ d)


def tso3_connection_left_invariant(w, R, omega, zeta, eta, alpha, beta):
    """Closed-form nabla-bar_X Y on TSO(3) for left-invariant lifted fields.

    X = (R hat(zeta), R hat(eta)), Y = (R hat(alpha), R hat(beta)) at the
    point (R, R hat(omega)). Returns the horizontal and vertical parts as
    3x3 tangent matrices at ``R``.
    """
    if not isinstance(w, MetricWeights):
        w = validate_weights(*w)
    R = check_rotation(R)
    W, Z, E, A, B = (hat(v) for v in (omega, zeta, eta, alpha, beta))
    m1, m2, m3 = w.as_tuple()
    d8 = 8.0 * w.det
    horizontal = (
        R @ (Z @ A + 0.5 * (Z.T @ A + A.T @ Z))
        - R @ (m2 * m3 / d8 * (2.0 * bracket(bracket(W, Z), A) + bracket(bracket(Z, A), W)))
        - R @ (m3 * m3 / d8 * bracket(bracket(W, B), Z))
        - R @ (m3 * m3 / d8 * bracket(bracket(W, E), A))
    )
    vertical = (
        R @ (Z @ B + 0.5 * (Z.T @ B + B.T @ Z))
        + R @ (m2 * m3 / d8 * bracket(bracket(W, B), Z))
        + R @ ((2.0 * m2 * m2 * bracket(bracket(W, Z), A) + m1 * m3 * bracket(bracket(Z, A), W)) / d8)
        + R @ (m2 * m3 / d8 * bracket(bracket(W, E), A))
    )
    return horizontal, vertical


def tso3_connection_body(w, omega, zeta, eta, alpha, beta):
    """Body coordinates of :func:`tso3_connection_left_invariant`.

    Uses ``[[hat(a), hat(b)], hat(c)] = hat((a x b) x c)``; no rotation needed.
    """
    if not isinstance(w, MetricWeights):
        w = validate_weights(*w)
    m1, m2, m3 = w.as_tuple()
    d8 = 8.0 * w.det
    cr = cross
    wz_a = cr(cr(omega, zeta), alpha)
    za_w = cr(cr(zeta, alpha), omega)
    wb_z = cr(cr(omega, beta), zeta)
    we_a = cr(cr(omega, eta), alpha)
    horizontal = (
        0.5 * cr(zeta, alpha)
        - m2 * m3 / d8 * (2.0 * wz_a + za_w)
        - m3 * m3 / d8 * (wb_z + we_a)
    )
    vertical = (
        0.5 * cr(zeta, beta)
        + m2 * m3 / d8 * (wb_z + we_a)
        + (2.0 * m2 * m2 * wz_a + m1 * m3 * za_w) / d8
    )
    return horizontal, vertical


def tso3_connection_generic(w, R, omega, zeta, eta, alpha, beta, sign=-1.0):
    """Same quantity as :func:`tso3_connection_left_invariant`, via the generic
    bundle formulas fed with the Edelman connection and :func:`so3_curvature`.
    """
    R = check_rotation(R)
    nabla_za = to_body(R, edelman_connection(R, zeta, alpha))
    nabla_zb = to_body(R, edelman_connection(R, zeta, beta))
    out = levi_civita_components(
        w,
        as_vector(omega, 3),
        as_vector(zeta, 3),
        as_vector(eta, 3),
        as_vector(alpha, 3),
        as_vector(beta, 3),
        nabla_za,
        nabla_zb,
        lambda x, y, z: so3_curvature(x, y, z, sign=sign),
    )
    return R @ hat(out.horizontal), R @ hat(out.vertical)


@dataclass(frozen=True)
class LeftInvariantBundleField:
    """Bundle field with body parts ``alpha(omega)``, ``beta(omega)`` at one point.

    The Jacobians are derivatives with respect to the fiber body coordinate
    ``omega``; both zero means the field is lift-decomposable.
    """

    alpha: np.ndarray
    beta: np.ndarray
    dalpha_domega: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    dbeta_domega: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))

    def __post_init__(self):
        object.__setattr__(self, "alpha", frozen(as_vector(self.alpha, 3, "alpha")))
        object.__setattr__(self, "beta", frozen(as_vector(self.beta, 3, "beta")))
        object.__setattr__(self, "dalpha_domega", frozen(as_matrix(self.dalpha_domega, (3, 3))))
        object.__setattr__(self, "dbeta_domega", frozen(as_matrix(self.dbeta_domega, (3, 3))))


def fiber_rate(omega, zeta, eta):
    """Rate of the fiber body coordinate along the bundle tangent (zeta, eta).

    From K = omegadot + 1/2 zeta x omega.
    """
    return as_vector(eta, 3) - 0.5 * cross(as_vector(zeta, 3), as_vector(omega, 3))


def tso3_connection_general(w, R, omega, zeta, eta, field, omegadot=None):
    """nabla-bar_X Y for a field whose body parts depend on the fiber coordinate.

    Adds ``R hat(dalpha_domega @ omegadot)`` and ``R hat(dbeta_domega @ omegadot)``
    to the left-invariant result. ``omegadot`` defaults to
    :func:`fiber_rate` of the direction; it is the full change of omega, so
    the term also carries the fiber drift along horizontal directions.
    """
    if omegadot is None:
        omegadot = fiber_rate(omega, zeta, eta)
    omegadot = as_vector(omegadot, 3, "omegadot")
    H, V = tso3_connection_left_invariant(w, R, omega, zeta, eta, field.alpha, field.beta)
    return (
        H + R @ hat(field.dalpha_domega @ omegadot),
        V + R @ hat(field.dbeta_domega @ omegadot),
    )
