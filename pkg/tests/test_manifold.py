import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tbgeo.exceptions import ChartDomainError, DimensionError, MetricError, NonFiniteError
from tbgeo.manifold import (
    ChartManifold,
    VectorField,
    christoffel,
    covariant_derivative,
    curvature,
    euclidean,
    fd_jacobian,
    koszul_rhs,
    lie_bracket,
    metric_eval,
    override_discrepancy,
    riemann_tensor,
)
from tbgeo.verify import random_polynomial_field

# symbolic Christoffels / Riemann of 4/(1+|x|^2)^2 I at (0.3, -0.7), frozen
P0 = np.array([0.3, -0.7])
GAMMA_P0 = np.array([
    [[-30 / 79, 70 / 79], [70 / 79, 30 / 79]],
    [[-70 / 79, -30 / 79], [-30 / 79, 70 / 79]],
])
R0101_P0 = 4.0 / 1.58**2

vec2 = arrays(np.float64, 2, elements=st.floats(-5, 5))
pt2 = arrays(np.float64, 2, elements=st.floats(-2, 2))


def test_metric_eval_identity():
    assert metric_eval(euclidean(2), np.zeros(2), [1, 0], [1, 0]) == 1.0


def test_metric_eval_sphere_origin(sphere):
    assert metric_eval(sphere, np.zeros(2), [1, 0], [1, 0]) == pytest.approx(4.0, abs=1e-15)


@given(pt2, vec2, vec2)
def test_metric_symmetric_and_zero(p, v, w):
    from tbgeo.manifold import sphere2_stereographic

    M = sphere2_stereographic()
    assert abs(metric_eval(M, p, v, w) - metric_eval(M, p, w, v)) < 1e-12
    assert metric_eval(M, p, np.zeros(2), w) == 0.0


def test_metric_positive(sphere, rng):
    for _ in range(50):
        p = sphere.sample_point(rng)
        v = rng.normal(size=2)
        assert metric_eval(sphere, p, v, v) > 0


def test_christoffel_euclidean_zero():
    assert np.all(christoffel(euclidean(3), np.ones(3)) == 0)


@pytest.mark.parametrize("fixture", ["sphere", "sphere_fd"])
def test_christoffel_matches_symbolic(fixture, request):
    M = request.getfixturevalue(fixture)
    tol = 1e-14 if M.christoffel_fn is not None else 1e-8
    np.testing.assert_allclose(christoffel(M, P0), GAMMA_P0, atol=tol)


@pytest.mark.parametrize("fixture", ["sphere", "sphere_fd"])
def test_riemann_matches_symbolic(fixture, request):
    M = request.getfixturevalue(fixture)
    R = riemann_tensor(M, P0)
    tol = 1e-12 if M.riemann_fn is not None else 1e-4
    assert R[0, 1, 0, 1] == pytest.approx(R0101_P0, abs=tol)
    assert R[1, 0, 0, 1] == pytest.approx(-R0101_P0, abs=tol)
    assert R[0, 0, 0, 1] == pytest.approx(0.0, abs=tol)


def test_sectional_curvature_of_sphere_is_one(sphere, rng):
    for _ in range(10):
        p = sphere.sample_point(rng)
        x, y = rng.normal(size=(2, 2))
        num = metric_eval(sphere, p, curvature(sphere, x, y, y, p), x)
        den = metric_eval(sphere, p, x, x) * metric_eval(sphere, p, y, y) - metric_eval(sphere, p, x, y) ** 2
        assert num / den == pytest.approx(1.0, rel=1e-10)


def test_override_discrepancy_small(sphere, rng):
    pts = [sphere.sample_point(rng) for _ in range(5)]
    gam, riem = override_discrepancy(sphere, pts)
    assert gam < 1e-8 and riem < 1e-4


def test_covariant_derivative_flat_constant():
    X = VectorField.constant([1.0, 2.0])
    assert np.all(covariant_derivative(euclidean(2), X(0), X, np.zeros(2)) == 0)


def test_lie_bracket_examples():
    X = VectorField.coordinate(0, 2)
    Y = VectorField(lambda x: np.array([0.0, x[0]]))
    np.testing.assert_allclose(lie_bracket(X, Y, np.array([0.4, 0.1])), [0, 1], atol=1e-9)
    C = VectorField.constant([1.0, -1.0])
    assert np.all(lie_bracket(C, C, np.zeros(2)) == 0)


def test_curvature_flat_zero(rng):
    x, y, z = rng.normal(size=(3, 3))
    assert np.all(curvature(euclidean(3), x, y, z, np.zeros(3)) == 0)


def test_torsion_free(sphere, rng):
    for _ in range(5):
        p = sphere.sample_point(rng)
        X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
        t = covariant_derivative(sphere, X(p), Y, p) - covariant_derivative(sphere, Y(p), X, p)
        assert np.max(np.abs(t - lie_bracket(X, Y, p))) < 1e-8


def test_metric_compatibility_along_curve(sphere, rng):
    for _ in range(5):
        p = sphere.sample_point(rng, margin=1.0)
        a, b = rng.normal(size=(2, 2))
        Y, Z = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
        gamma = lambda t: p + t * a + t * t * b  # noqa: E731
        s = lambda t: metric_eval(sphere, gamma(t), Y(gamma(t)), Z(gamma(t)))  # noqa: E731
        h = 1e-5
        lhs = (s(h) - s(-h)) / (2 * h)
        rhs = metric_eval(sphere, p, covariant_derivative(sphere, a, Y, p), Z(p)) + metric_eval(
            sphere, p, Y(p), covariant_derivative(sphere, a, Z, p)
        )
        assert abs(lhs - rhs) < 1e-4


def test_first_bianchi(sphere, rng):
    p = sphere.sample_point(rng)
    x, y, z = rng.normal(size=(3, 2))
    s = curvature(sphere, x, y, z, p) + curvature(sphere, y, z, x, p) + curvature(sphere, z, x, y, p)
    assert np.max(np.abs(s)) < 1e-4


def test_koszul_rhs(sphere, rng):
    C = VectorField.constant([1.0, 0.5])
    assert koszul_rhs(euclidean(2), C, C, C, np.zeros(2)) == pytest.approx(0.0, abs=1e-9)
    p = sphere.sample_point(rng)
    X, Y, Z = (random_polynomial_field(rng, 2) for _ in range(3))
    expect = 2 * metric_eval(sphere, p, covariant_derivative(sphere, X(p), Y, p), Z(p))
    assert koszul_rhs(sphere, X, Y, Z, p) == pytest.approx(expect, abs=1e-6)
    swapped = koszul_rhs(sphere, X, Y, Z, p) - koszul_rhs(sphere, Y, X, Z, p)
    assert swapped == pytest.approx(2 * metric_eval(sphere, p, lie_bracket(X, Y, p), Z(p)), abs=1e-6)


def test_fd_jacobian_linear():
    A = np.array([[1.0, 2.0], [3.0, 4.0]])
    np.testing.assert_allclose(fd_jacobian(lambda x: A @ x, np.array([0.5, 7.0])), A, atol=1e-9)


def test_chart_domain_enforced(sphere):
    with pytest.raises(ChartDomainError):
        sphere.check_point([3.5, 0.0])
    with pytest.raises(DimensionError):
        sphere.check_point([0.0, 0.0, 0.0])
    with pytest.raises(NonFiniteError):
        sphere.check_point([np.nan, 0.0])


def test_bad_metric_rejected():
    asym = ChartManifold(2, lambda x: np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(MetricError):
        metric_eval(asym, np.zeros(2), [1, 0], [0, 1])
    indefinite = ChartManifold(2, lambda x: np.diag([1.0, -1.0]))
    with pytest.raises(MetricError):
        christoffel(indefinite, np.zeros(2))
