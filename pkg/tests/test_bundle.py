import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tbgeo.bundle import (
    KOSZUL_ITEMS,
    SASAKI,
    BundleChart,
    BundlePoint,
    BundleTangent,
    GeneralFieldDecomposition,
    brute_force_connection,
    bundle_metric,
    chart_to_bundle_tangent,
    bundle_tangent_to_chart,
    decompose_general_field,
    f_map,
    horizontal_lift,
    induced_bundle_gram,
    koszul_pairings_oracle,
    lc_connection_bundle,
    lc_connection_general,
    lc_connection_lifts,
    lift_bracket_fd,
    lift_bracket_oracle,
    validate_weights,
    vertical_lift,
    weight_matrix,
    weight_matrix_inverse,
)
from tbgeo.exceptions import AdmissibilityError, DimensionError
from tbgeo.manifold import (
    VectorField,
    apply_riemann,
    christoffel,
    covariant_derivative,
    euclidean,
    gram,
    metric_eval,
    riemann_tensor,
)
from tbgeo.verify import random_general_field, random_polynomial_field

W_GENERIC = validate_weights(2.0, 0.5, 1.5)


def _point(M, rng):
    return BundlePoint(M.sample_point(rng), rng.normal(size=M.dimension))


# --- weights ---------------------------------------------------------------


def test_validate_weights_examples():
    assert validate_weights(1, 0, 1) == SASAKI
    assert validate_weights(2, 1, 1).det == 1.0
    with pytest.raises(AdmissibilityError, match=r"m1\*m3 - m2\^2 > 0") as info:
        validate_weights(1, 1, 1)
    assert info.value.weights == (1.0, 1.0, 1.0)


@pytest.mark.parametrize("w, cond", [((0, 0, 1), "m1 > 0"), ((1, 0, -1), "m3 > 0"),
                                     ((float("nan"), 0, 1), "finite weights")])
def test_validate_weights_conditions(w, cond):
    with pytest.raises(AdmissibilityError) as info:
        validate_weights(*w)
    assert info.value.condition == cond


weight_value = st.floats(-10, 10).filter(lambda v: v == 0 or abs(v) > 1e-6)


@given(weight_value, weight_value, weight_value)
def test_admissible_iff_weight_matrix_positive(m1, m2, m3):
    eig = np.linalg.eigvalsh(weight_matrix((m1, m2, m3), 2)).min()
    try:
        validate_weights(m1, m2, m3)
    except AdmissibilityError:
        assert eig <= 1e-12 * max(1.0, abs(m1), abs(m3))
    else:
        assert eig > 0


def test_weight_matrix_examples():
    np.testing.assert_array_equal(weight_matrix(SASAKI, 3), np.eye(6))
    w = validate_weights(2, 1, 1)
    np.testing.assert_array_equal(weight_matrix(w, 1), [[2, 1], [1, 1]])
    np.testing.assert_allclose(weight_matrix_inverse(w, 1), [[1, -1], [-1, 2]])
    np.testing.assert_allclose(weight_matrix(W_GENERIC, 2) @ weight_matrix_inverse(W_GENERIC, 2),
                               np.eye(4), atol=1e-15)


# --- metric, lifts, f-map ----------------------------------------------------


def test_bundle_metric_example():
    M = euclidean(2)
    P = BundlePoint([0, 0], [0, 0])
    X = BundleTangent([1, 0], [0, 1])
    assert bundle_metric((2, 1, 3), M, P, X, X) == 5.0


def test_bundle_metric_symmetric_batched(sphere, rng):
    P = _point(sphere, rng)
    X = BundleTangent(rng.normal(size=(7, 2)), rng.normal(size=(7, 2)))
    Y = BundleTangent(rng.normal(size=(7, 2)), rng.normal(size=(7, 2)))
    a = bundle_metric(W_GENERIC, sphere, P, X, Y)
    assert a.shape == (7,)
    np.testing.assert_allclose(a, bundle_metric(W_GENERIC, sphere, P, Y, X), atol=1e-12)


def test_bundle_metric_dimension_mismatch(sphere):
    with pytest.raises(DimensionError):
        bundle_metric(SASAKI, sphere, BundlePoint([0, 0, 0], [0, 0, 0]),
                      BundleTangent.zeros(3), BundleTangent.zeros(3))


def test_lifts_round_trip(rng):
    P = BundlePoint([0.1, 0.2], [1.0, -1.0])
    X, Y = rng.normal(size=(2, 2))
    Z = horizontal_lift(X, P) + vertical_lift(Y, P)
    np.testing.assert_array_equal(Z.horizontal, X)
    np.testing.assert_array_equal(Z.vertical, Y)
    assert np.all(vertical_lift(np.zeros(2), P).as_array() == 0)


def test_bundle_tangent_immutable():
    Z = BundleTangent([1.0, 2.0], [3.0, 4.0])
    with pytest.raises(ValueError):
        Z.horizontal[0] = 5.0


def test_f_map_example():
    A, B = np.array([1.0, 2.0]), np.array([-3.0, 0.5])
    out = f_map(validate_weights(2, 1, 1), BundleTangent(A, B))
    np.testing.assert_allclose(out.horizontal, A - B)
    np.testing.assert_allclose(out.vertical, -A + 2 * B)


def test_f_map_identity(sphere, rng):
    P = _point(sphere, rng)
    X = BundleTangent(rng.normal(size=(50, 2)), rng.normal(size=(50, 2)))
    Y = BundleTangent(rng.normal(size=(50, 2)), rng.normal(size=(50, 2)))
    G = gram(sphere, P.base)
    lhs = bundle_metric(W_GENERIC, sphere, P, f_map(W_GENERIC, X), Y)
    rhs = np.einsum("...i,ij,...j->...", X.horizontal, G, Y.horizontal) + np.einsum(
        "...i,ij,...j->...", X.vertical, G, Y.vertical)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


# --- connection map in the chart ---------------------------------------------


def test_chart_tangent_vertical_curve(sphere, rng):
    P = _point(sphere, rng)
    udot = rng.normal(size=2)
    Z = chart_to_bundle_tangent(sphere, P, np.zeros(2), udot)
    assert np.all(Z.horizontal == 0)
    np.testing.assert_array_equal(Z.vertical, udot)


def test_chart_tangent_round_trip(sphere, rng):
    P = _point(sphere, rng)
    xdot, udot = rng.normal(size=(2, 2))
    back = bundle_tangent_to_chart(sphere, P, chart_to_bundle_tangent(sphere, P, xdot, udot))
    np.testing.assert_allclose(back[0], xdot)
    np.testing.assert_allclose(back[1], udot, atol=1e-14)


def test_parallel_transport_is_horizontal(sphere, rng):
    """The fiber velocity of a parallel-transported vector has no vertical part."""
    p = np.array([0.4, -0.3])
    u = np.array([1.0, 0.5])
    xdot = np.array([0.7, 0.2])
    h = 1e-6
    # one midpoint step of the transport ODE u' = -Gamma(x', u)
    k1 = -np.einsum("kij,i,j->k", christoffel(sphere, p), xdot, u)
    um = u + 0.5 * h * k1
    k2 = -np.einsum("kij,i,j->k", christoffel(sphere, p + 0.5 * h * xdot), xdot, um)
    udot_fd = k2
    Z = chart_to_bundle_tangent(sphere, BundlePoint(p, u), xdot, udot_fd)
    assert np.max(np.abs(Z.vertical)) < 1e-5
    np.testing.assert_array_equal(Z.horizontal, xdot)


def test_induced_gram_flat_sasaki():
    G = induced_bundle_gram(SASAKI, euclidean(2), np.zeros(2), np.ones(2))
    np.testing.assert_array_equal(G, np.eye(4))


def test_induced_gram_matches_bundle_metric(sphere, rng):
    P = _point(sphere, rng)
    z1, z2 = rng.normal(size=(2, 4))
    Gb = induced_bundle_gram(W_GENERIC, sphere, P.base, P.fiber)
    X = chart_to_bundle_tangent(sphere, P, z1[:2], z1[2:])
    Y = chart_to_bundle_tangent(sphere, P, z2[:2], z2[2:])
    assert z1 @ Gb @ z2 == pytest.approx(bundle_metric(W_GENERIC, sphere, P, X, Y), abs=1e-12)
    assert np.linalg.eigvalsh(Gb).min() > 0


# --- brackets of lifts -------------------------------------------------------


@pytest.mark.parametrize("kx, ky", [("h", "h"), ("h", "v"), ("v", "h"), ("v", "v")])
def test_lift_bracket_oracle_vs_chart(sphere, rng, kx, ky):
    P = _point(sphere, rng)
    X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    a = lift_bracket_oracle(sphere, X, Y, P, kx, ky)
    b = lift_bracket_fd(sphere, X, Y, P, kx, ky)
    assert np.max(np.abs((a - b).as_array())) < 1e-6


def test_lift_bracket_examples(rng):
    M = euclidean(2)
    P = BundlePoint([0.2, 0.3], [1.0, 2.0])
    X, Y = VectorField.coordinate(0, 2), VectorField.coordinate(1, 2)
    assert np.all(lift_bracket_oracle(M, X, Y, P, "h", "h").as_array() == 0)
    assert np.all(lift_bracket_oracle(M, X, Y, P, "v", "v").as_array() == 0)


# --- closed-form connection of lifts -----------------------------------------


def test_vv_block_zero(sphere, rng):
    P = _point(sphere, rng)
    X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    assert np.all(lc_connection_lifts(W_GENERIC, sphere, P, X, Y, "v", "v").as_array() == 0)


def test_flat_hh_block(rng):
    M = euclidean(2)
    P = _point(M, rng)
    X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    out = lc_connection_lifts(W_GENERIC, M, P, X, Y, "h", "h")
    np.testing.assert_allclose(out.horizontal, covariant_derivative(M, X(P.base), Y, P.base))
    assert np.all(out.vertical == 0)


def test_sasaki_hh_block(sphere, rng):
    P = _point(sphere, rng)
    X, Y = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    out = lc_connection_lifts(SASAKI, sphere, P, X, Y, "h", "h")
    p = P.base
    np.testing.assert_allclose(out.horizontal, covariant_derivative(sphere, X(p), Y, p), atol=1e-14)
    expect = -0.5 * apply_riemann(riemann_tensor(sphere, p), X(p), Y(p), P.fiber)
    np.testing.assert_allclose(out.vertical, expect, atol=1e-14)


@pytest.mark.parametrize("fixture", ["sphere", "sphere_fd"])
def test_koszul_items(fixture, request, rng):
    M = request.getfixturevalue(fixture)
    for _ in range(5):
        P = _point(M, rng)
        X, Y, Z = (random_polynomial_field(rng, 2) for _ in range(3))
        rhs = koszul_pairings_oracle(W_GENERIC, M, P, X, Y, Z)
        assert rhs[-1] == 0.0
        for k, (kd, kf, kz) in enumerate(KOSZUL_ITEMS):
            conn = lc_connection_lifts(W_GENERIC, M, P, X, Y, kd, kf)
            Zl = horizontal_lift(Z(P.base), P) if kz == "h" else vertical_lift(Z(P.base), P)
            assert 2 * bundle_metric(W_GENERIC, M, P, conn, Zl) == pytest.approx(rhs[k], abs=1e-8)


def test_koszul_flat_item_one(rng):
    M = euclidean(2)
    P = _point(M, rng)
    X, Y, Z = (random_polynomial_field(rng, 2) for _ in range(3))
    p = P.base
    expect = 2 * W_GENERIC.m1 * metric_eval(M, p, covariant_derivative(M, X(p), Y, p), Z(p))
    assert koszul_pairings_oracle(W_GENERIC, M, P, X, Y, Z)[0] == pytest.approx(expect, abs=1e-8)


def test_connection_is_additive(sphere, rng):
    P = _point(sphere, rng)
    F, G = rng.normal(size=(2, 2))
    A, B = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    total = lc_connection_bundle(W_GENERIC, sphere, P, F, G, A, B)
    parts = (lc_connection_lifts(W_GENERIC, sphere, P, F, A, "h", "h")
             + lc_connection_lifts(W_GENERIC, sphere, P, F, B, "h", "v")
             + lc_connection_lifts(W_GENERIC, sphere, P, G, A, "v", "h")
             + lc_connection_lifts(W_GENERIC, sphere, P, G, B, "v", "v"))
    np.testing.assert_allclose(total.as_array(), parts.as_array(), atol=1e-14)


@pytest.mark.parametrize("w", [SASAKI, validate_weights(2, 1, 3), W_GENERIC])
def test_brute_force_christoffel_oracle(sphere, rng, w):
    chart = BundleChart(sphere, w)
    for _ in range(3):
        P = _point(sphere, rng)
        direction = BundleTangent(*rng.normal(size=(2, 2)))
        A, B = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
        hA, vB = chart.lifted_field(A, "h"), chart.lifted_field(B, "v")
        field = VectorField(lambda z: hA(z) + vB(z))
        ref = lc_connection_bundle(w, sphere, P, direction.horizontal, direction.vertical, A, B)
        brute = brute_force_connection(w, sphere, P, direction, field)
        assert np.max(np.abs((ref - brute).as_array())) < 1e-4


# --- general fields ----------------------------------------------------------


def test_general_zero_jacobians_match_lifts(sphere, rng):
    P = _point(sphere, rng)
    A, B = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    d = BundleTangent(*rng.normal(size=(2, 2)))
    field = GeneralFieldDecomposition(A, B, np.zeros((2, 2)), np.zeros((2, 2)))
    np.testing.assert_array_equal(
        lc_connection_general(W_GENERIC, sphere, P, d, field).as_array(),
        lc_connection_bundle(W_GENERIC, sphere, P, d.horizontal, d.vertical, A, B).as_array(),
    )


def test_general_horizontal_direction_ignores_jacobians(sphere, rng):
    P = _point(sphere, rng)
    A, B = random_polynomial_field(rng, 2), random_polynomial_field(rng, 2)
    d = BundleTangent(rng.normal(size=2), np.zeros(2))
    J1, J2 = rng.normal(size=(2, 2, 2))
    a = lc_connection_general(W_GENERIC, sphere, P, d, GeneralFieldDecomposition(A, B, J1, J2))
    b = lc_connection_general(W_GENERIC, sphere, P, d, GeneralFieldDecomposition(A, B, 0 * J1, 0 * J2))
    np.testing.assert_array_equal(a.as_array(), b.as_array())


def test_general_flat_example():
    M = euclidean(2)
    P = BundlePoint([0.0, 0.0], [0.3, 0.1])
    zero = VectorField.constant([0.0, 0.0])
    field = GeneralFieldDecomposition(zero, zero, np.zeros((2, 2)), np.eye(2))
    out = lc_connection_general(SASAKI, M, P, BundleTangent([0, 0], [1, 0]), field)
    np.testing.assert_array_equal(out.horizontal, [0, 0])
    np.testing.assert_array_equal(out.vertical, [1, 0])


def test_general_jacobian_shape_checked(sphere):
    zero = VectorField.constant([0.0, 0.0])
    field = GeneralFieldDecomposition(zero, zero, np.zeros((3, 3)), np.zeros((3, 3)))
    with pytest.raises(DimensionError):
        lc_connection_general(SASAKI, sphere, BundlePoint([0, 0], [0, 0]), BundleTangent.zeros(2), field)


@pytest.mark.parametrize("fixture", ["sphere", "sphere_fd"])
def test_general_field_vs_brute_force(fixture, request, rng):
    M = request.getfixturevalue(fixture)
    chart = BundleChart(M, W_GENERIC)
    for _ in range(3):
        P = _point(M, rng)
        fn = random_general_field(rng, 2)
        d = BundleTangent(*rng.normal(size=(2, 2)))
        ref = lc_connection_general(W_GENERIC, M, P, d, decompose_general_field(M, P, fn))
        brute = brute_force_connection(W_GENERIC, M, P, d, chart.general_field(fn))
        assert np.max(np.abs((ref - brute).as_array())) < 1e-4


def test_decomposition_residual_vanishes_along_horizontal_leaf(sphere, rng):
    P = _point(sphere, rng)
    fn = random_general_field(rng, 2)
    dec = decompose_general_field(sphere, P, fn)
    A0, B0 = fn(P.base, P.fiber)
    np.testing.assert_allclose(dec.A(P.base), A0)
    np.testing.assert_allclose(dec.B(P.base), B0)
