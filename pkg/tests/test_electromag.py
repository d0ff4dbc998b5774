import warnings

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mixturecalc.algebra import MetricPair, MultiVector
from mixturecalc.electromag import (
    FourPotential,
    MatrixPotentialSet,
    covariant_field_tensor,
    em_derivative,
    faraday_relations,
    faraday_tensor,
    gauge_covariance_check,
    gauge_transform,
    maxwell_residuals,
    perfect_fluid_contraction,
    poynting,
    simple_field_curvature,
    stress_energy,
    su2_gauge,
    yang_mills_field_tensor,
)
from mixturecalc.errors import AsymmetryError, MixtureWarning, RouteMismatch, SingularGauge
from mixturecalc.fields import WaveField, parse_vector_field, polynomial
from mixturecalc.geometry import FiniteDifferenceScheme, matrix_curvature
from mixturecalc.suites import hermitian_potentials

FD = FiniteDifferenceScheme(1e-3, 2)
Z = np.array([0.2, -0.4, 0.3, 0.1])
MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
UNIFORM_B = parse_vector_field([{'polynomial': [[-0.5, [0, 0, 1, 0]]]},
                                {'polynomial': [[0.5, [0, 1, 0, 0]]]}, 0.0], 'A')


def test_derivative_of_static_potential():
    h = FourPotential(polynomial((1.0, (0, 1, 0, 0))), UNIFORM_B)
    sample = em_derivative(h, Z, FD)
    assert sample.alpha == pytest.approx(0.0, abs=1e-10)
    assert_allclose(sample.E, [1.0, 0.0, 0.0], atol=1e-10)
    assert_allclose(sample.B, [0.0, 0.0, 1.0], atol=1e-10)
    assert_allclose(sample.E_physical, [-1.0, 0.0, 0.0], atol=1e-10)
    assert sample.as_multivector().allclose([0, 1, 0, 1j], tol=1e-10)


def test_lorenz_scalar_picks_up_time_derivative():
    h = FourPotential(polynomial((2.0, (1, 0, 0, 0))), parse_vector_field(None, 'A'))
    assert em_derivative(h, Z, FD).alpha == pytest.approx(2.0)


def test_light_cone_wave_solves_maxwell():
    phi = WaveField(1.0, (0.6, 0.8, 0.0), 1.0)
    A = parse_vector_field([0.0, 0.0, {'wave': {'k': [0.6, 0.8, 0.0], 'kind': 'sin'}}], 'A')
    residuals = maxwell_residuals(FourPotential(phi, A), Z, FD)
    assert residuals.max() < 1e-5


def test_maxwell_channels_measure_wave_operator():
    phi = polynomial((1.0, (0, 2, 0, 0)), (1.0, (1, 0, 1, 0)))
    h = FourPotential(phi, parse_vector_field(None, 'A'))
    residuals = maxwell_residuals(h, Z, FD)
    assert residuals.gauss_E == pytest.approx(-2.0, abs=1e-6)
    assert abs(residuals.gauss_B) < 1e-7
    assert np.abs(residuals.faraday).max() < 1e-7


def test_simple_field_curvature():
    def h(z):
        return np.array([np.sin(z[1]), z[0] * z[2], np.cos(z[3]), z[0] ** 2], dtype=complex)

    result = simple_field_curvature(h, Z, FD)
    assert result.residual < 1e-5
    assert result.trace_residual < 1e-12
    assert_allclose(result.F, -result.F.T, atol=1e-15)


def test_faraday_round_trip():
    E, B = np.array([0.3, -1.0, 2.0]), np.array([1.5, 0.2, -0.7])
    F = faraday_tensor(E, B)
    assert_allclose(F, -F.T)
    relations = faraday_relations(F)
    assert relations.EB.allclose(np.concatenate([[0.0], E + 1j * B]), tol=1e-12)
    assert_allclose(relations.F_round, F, atol=1e-12)
    assert_allclose(relations.G_dual, -relations.G_dual.T, atol=1e-12)


def test_faraday_relations_reject_symmetric_tensor():
    with pytest.raises(AsymmetryError):
        faraday_relations(np.eye(4))


def test_poynting_matches_both_routes():
    E, B = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    with warnings.catch_warnings():
        warnings.simplefilter('error', MixtureWarning)
        result = poynting(E, B)
    assert result.allclose([2.0, 0.0, 0.0, 2.0], tol=1e-12)


def test_poynting_raises_when_routes_disagree():
    E, B = np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
    flipped = MetricPair(np.diag([-1.0, 1.0, 1.0, 1.0]), np.diag([-1.0, 1.0, 1.0, 1.0]))
    with pytest.raises(RouteMismatch, match="Poynting routes disagree"):
        poynting(E, B, g=flipped)
    assert poynting(E, B, g=flipped, tol=None).allclose([2.0, 0.0, 0.0, 2.0], tol=1e-12)


def test_stress_energy_density():
    E, B = np.array([0.5, 1.0, 0.0]), np.array([0.0, 0.3, 2.0])
    T = stress_energy(faraday_tensor(E, B), MetricPair(MINKOWSKI, MINKOWSKI))
    assert T[0, 0].real == pytest.approx(0.5 * (E @ E + B @ B))
    assert_allclose(T[0, 1:].real, np.cross(E, B), atol=1e-12)


def test_perfect_fluid_depends_on_signature():
    rest = MultiVector.basis(0)
    assert perfect_fluid_contraction(1.0, 0.25, rest).allclose([1.75, 0, 0, 0])
    natural = MetricPair(MINKOWSKI, MINKOWSKI)
    assert perfect_fluid_contraction(1.0, 0.25, rest, g=natural).allclose([0.75, 0, 0, 0])


def test_su2_gauge_is_unitary():
    rng = np.random.default_rng(0)
    S = su2_gauge(rng.normal(size=(3, 5)))
    s = S(Z)
    assert_allclose(s.conj().T @ s, np.eye(2), atol=1e-12)
    assert np.linalg.det(s) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        su2_gauge(np.zeros((3, 4)))


def test_gauge_covariance_of_field_tensor():
    rng = np.random.default_rng(1)
    P = MatrixPotentialSet(hermitian_potentials(rng, 0.3), 0.8)
    S = su2_gauge(rng.normal(scale=0.5, size=(3, 5)))
    report = gauge_covariance_check(P, S, Z, FD, tol=1e-4)
    assert report.get('gauge-covariance').passed
    assert report.get('curvature-form-covariance').tolerance is None


def test_constant_gauge_rotates_exactly():
    rng = np.random.default_rng(2)
    P = MatrixPotentialSet(hermitian_potentials(rng, 0.3), 1.0)
    table = np.zeros((3, 5))
    table[:, 0] = [0.4, -0.2, 1.0]
    S = su2_gauge(table)
    s = S(Z)
    primed = gauge_transform(P, S, FD)
    assert_allclose(primed(Z), np.linalg.inv(s) @ P(Z) @ s, atol=1e-12)
    expected = np.einsum('ij,mnjk,kl->mnil', np.linalg.inv(s), covariant_field_tensor(P, Z, FD), s)
    assert_allclose(covariant_field_tensor(primed, Z, FD), expected, atol=1e-10)


def test_curvature_of_scaled_potentials():
    rng = np.random.default_rng(3)
    potentials = hermitian_potentials(rng, 0.3)
    eps = 0.7
    P = MatrixPotentialSet(potentials, eps)
    R = matrix_curvature(lambda p: eps * potentials(p), Z, FD)
    F = yang_mills_field_tensor(P, Z, FD)
    assert_allclose(R, eps * np.einsum('mnab->nmab', F), atol=1e-10)


def test_matrix_potential_validation():
    with pytest.raises(ValueError):
        MatrixPotentialSet(lambda z: np.zeros((3, 2, 2)))(Z)
    with pytest.raises(SingularGauge):
        P = MatrixPotentialSet(lambda z: np.zeros((4, 2, 2)))
        gauge_covariance_check(P, lambda z: np.zeros((2, 2)), Z, FD)
