import numpy as np
import pytest
from numpy.testing import assert_allclose

from mixturecalc.algebra import NATURAL
from mixturecalc.errors import SingularFrame, SingularMetric
from mixturecalc.geometry import (
    Box,
    ConnectionField,
    FiniteDifferenceScheme,
    FrameField,
    Variance,
    basis_divergence_matrices,
    christoffel_from_metric,
    commutation_coefficients,
    compatibility_residuals,
    connection_from_frame,
    covariant_derivative,
    curvature,
    exact_connection_from_frame,
    exponential_frame,
    frame_metric,
    frame_mixture,
    interior_lattice,
    lie_bracket_components,
    matrix_curvature,
    polynomial_frame,
    ricci_ansatz_check,
)

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
FD = FiniteDifferenceScheme(1e-3, 2)
Z = np.array([0.1, -0.2, 0.15, 0.05])


def exact_gamma(frame):
    return ConnectionField(lambda z: exact_connection_from_frame(frame, z))


def test_finite_difference_orders():
    def cube(z):
        return np.array(z[0] ** 3)

    z = np.array([0.7, 0.0, 0.0, 0.0])
    fourth = FiniteDifferenceScheme(1e-2, 4).partial(cube, z, 0)
    assert abs(fourth - 3 * 0.49) < 1e-9
    second = FiniteDifferenceScheme(1e-2, 2).partial(cube, z, 0)
    assert second.real == pytest.approx(3 * 0.49 + 1e-4, rel=1e-8)


def test_one_sided_stencil_at_box_edge():
    box = Box((-1.0,) * 4, (1.0,) * 4)
    fd = FiniteDifferenceScheme(1e-2, 2)
    for edge in (1.0, -1.0):
        z = np.array([edge, 0.0, 0.0, 0.0])
        d = fd.partial(lambda p: np.array(p[0] ** 2), z, 0, box)
        assert d.real == pytest.approx(2 * edge, abs=1e-10)


def test_scheme_validation_and_halving():
    with pytest.raises(ValueError):
        FiniteDifferenceScheme(1e-3, 3)
    with pytest.raises(ValueError):
        FiniteDifferenceScheme(-1e-3, 2)
    with pytest.raises(ValueError):
        Box((0.0, 1.0), (1.0, 1.0))
    assert FiniteDifferenceScheme(0.2, 4).halved() == FiniteDifferenceScheme(0.1, 4)
    per_axis = FiniteDifferenceScheme((0.2, 0.4, 0.2, 0.2)).halved()
    assert per_axis.step(1) == pytest.approx(0.2)


def test_frame_at_origin_reproduces_flat_tables():
    frame = polynomial_frame(0.1, seed=4)
    origin = np.zeros(4)
    assert_allclose(frame_metric(frame, MINKOWSKI)(origin), MINKOWSKI, atol=1e-14)
    assert_allclose(frame_mixture(frame, NATURAL.eta)(origin), NATURAL.eta.lower, atol=1e-14)


def test_finite_difference_connection_matches_exact():
    frame = polynomial_frame(0.1, seed=0)
    exact = exact_connection_from_frame(frame, Z)
    coarse = np.abs(connection_from_frame(frame, Z, FD) - exact).max()
    fine = np.abs(connection_from_frame(frame, Z, FD.halved()) - exact).max()
    assert coarse < 1e-5
    assert coarse / fine == pytest.approx(4.0, rel=0.2)


def test_exponential_frame_connection():
    h = np.array([0.1, -0.2, 0.3, 0.05])
    gamma = exact_connection_from_frame(exponential_frame(h), Z)
    assert_allclose(gamma, np.einsum('ma,b->mab', np.eye(4), h), atol=1e-12)


def test_basis_divergence_matrices():
    h = np.array([0.1, -0.2, 0.3, 0.05])
    w, m = basis_divergence_matrices(np.einsum('ma,b->mab', np.eye(4), h), NATURAL.eta)
    assert_allclose(w, -m.T, atol=1e-15)
    assert np.max(np.abs(w)) > 0.1

    w0, m0 = basis_divergence_matrices(np.zeros((4, 4, 4)), NATURAL.eta)
    assert not w0.any() and not m0.any()


def test_frame_geometry_is_compatible():
    frame = polynomial_frame(0.1, seed=2)
    metric, mixture = frame_metric(frame, MINKOWSKI), frame_mixture(frame, NATURAL.eta)
    report = compatibility_residuals(metric, mixture, exact_gamma(frame), Z, FD, NATURAL.mirror,
                                     tol=1e-5)
    assert report.passed, [(c.id, c.residual) for c in report.failures]


def test_mismatched_connection_is_incompatible():
    frame = polynomial_frame(0.1, seed=2)
    metric, mixture = frame_metric(frame, MINKOWSKI), frame_mixture(frame, NATURAL.eta)
    other = exact_gamma(polynomial_frame(0.1, seed=3))
    report = compatibility_residuals(metric, mixture, other, Z, FD, tol=1e-5)
    assert not report.passed


def test_pure_gauge_connection_is_flat():
    tensors = curvature(exact_gamma(polynomial_frame(0.1, seed=1)), Z, FD, g_upper=MINKOWSKI)
    assert np.abs(tensors.R).max() < 1e-5
    assert np.abs(tensors.R + np.einsum('abnm->abmn', tensors.R)).max() == 0.0
    assert abs(tensors.scalar) < 1e-4


def test_curved_connection_is_not_flat():
    def gamma(z):
        h = 0.5 * np.array([0.0, -z[2], z[1], 0.0])
        return np.einsum('ma,b->mab', np.eye(4), h).astype(complex)

    tensors = curvature(ConnectionField(gamma), Z, FD)
    assert np.abs(tensors.R).max() > 0.1


def test_matrix_curvature_of_pure_gauge_vanishes():
    frame = polynomial_frame(0.1, seed=5)

    def potentials(z):
        inv = np.linalg.inv(frame(z))
        return np.stack([inv @ frame.derivative(z, m) for m in range(4)])

    assert np.abs(matrix_curvature(potentials, Z, FD)).max() < 1e-5


def test_commutation_coefficients_match_lie_bracket():
    frame = polynomial_frame(0.1, seed=0)
    gamma = connection_from_frame(frame, Z, FD)
    coeffs = commutation_coefficients(gamma)
    assert_allclose(coeffs.C, lie_bracket_components(frame, Z, FD), atol=1e-10)
    assert_allclose(coeffs.symmetric + coeffs.antisymmetric, gamma, atol=1e-15)
    assert coeffs.lowered is None


def test_christoffel_is_symmetric():
    metric = frame_metric(polynomial_frame(0.1, seed=0), MINKOWSKI)
    gamma = christoffel_from_metric(metric, Z, FD)
    assert_allclose(gamma, np.einsum('sam->sma', gamma), atol=0)
    assert_allclose(christoffel_from_metric(lambda z: MINKOWSKI, Z, FD), 0, atol=1e-12)


def test_covariant_derivative_without_connection_is_gradient():
    def f(z):
        return np.array([z[0] * z[1], z[2], 1.0, z[3] ** 2], dtype=complex)

    flat = ConnectionField(lambda z: np.zeros((4, 4, 4)))
    for variance in Variance:
        assert_allclose(covariant_derivative(f, flat, Z, variance, FD), FD.gradient(f, Z), atol=0)
    with pytest.raises(ValueError):
        covariant_derivative(f, flat, Z, 'vector', FD)


def test_covariant_derivative_adds_connection_term():
    rng = np.random.default_rng(8)
    slope = rng.normal(size=(4, 4))
    offset = rng.normal(size=4)
    gamma = rng.normal(size=(4, 4, 4)) + 1j * rng.normal(size=(4, 4, 4))

    def f(z):
        return slope @ z + offset

    conn = ConnectionField(lambda z: gamma)
    here = f(Z)
    vector = np.array([[sum(here[g] * gamma[a, g, b] for g in range(4)) for b in range(4)]
                       for a in range(4)])
    dual = np.array([[sum(here[g] * gamma[g, a, b] for g in range(4)) for b in range(4)]
                     for a in range(4)])
    expected = {Variance.VECTOR: slope + vector, Variance.DUAL: slope - dual}
    for variance in Variance:
        assert_allclose(covariant_derivative(f, conn, Z, variance, FD), expected[variance],
                        atol=1e-9)


def test_singular_inputs_raise():
    frame = FrameField(lambda z: np.zeros((4, 4)))
    with pytest.raises(SingularFrame):
        connection_from_frame(frame, Z, FD)
    with pytest.raises(SingularMetric):
        christoffel_from_metric(lambda z: np.zeros((4, 4)), Z, FD)
    with pytest.raises(ValueError):
        exact_connection_from_frame(FrameField(lambda z: np.eye(4)), Z)


def test_ricci_ansatz_trace():
    K = np.arange(16, dtype=float).reshape(4, 4)
    assert ricci_ansatz_check(K, NATURAL.eta).passed


def test_interior_lattice_keeps_stencil_inside():
    box = Box((-0.5,) * 4, (0.5,) * 4)
    points = interior_lattice(box, FD, 3)
    assert len(points) == 81
    reach = FD.radius * FD.step(0)
    assert all(np.all(np.abs(p) <= 0.5 - reach) for p in points)
