import dataclasses

import numpy as np
import pytest
import hypothesis.strategies as st
from hypothesis import given, settings
from hypothesis.extra.numpy import arrays
from numpy.testing import assert_allclose

from mixturecalc.algebra import (
    COMPLEX_PLANE,
    NATURAL,
    InvolutionKind,
    MirrorTensor,
    MixtureTensor,
    MultiVector,
    RotationMode,
    adjoint,
    associativity_residual,
    conjugate,
    exp_split,
    exp_via_matrix,
    identity_suite,
    involute,
    is_null,
    magnitude_sq,
    metric_from_mixture,
    mirror,
    mv_exp,
    mv_inverse,
    mv_mul,
    natural_properties_report,
    rotate,
    split_axis,
    wellformed_report,
)
from mixturecalc.errors import DegenerateVector, NonScalarMagnitude, NonScalarMetric


finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
components = arrays(np.float64, (2, 4), elements=finite)


def as_mv(parts):
    return MultiVector(parts[0] + 1j * parts[1])


def test_basis_products():
    e = [NATURAL.basis(a) for a in range(4)]
    for a in range(1, 4):
        assert mv_mul(e[a], e[a]).allclose(e[0])
    assert mv_mul(e[1], e[2]).allclose(1j * e[3])
    assert mv_mul(e[2], e[1]).allclose(-1j * e[3])
    assert mv_mul(mv_mul(e[1], e[2]), e[3]).allclose([1j, 0, 0, 0])


def test_complex_plane_i_squared():
    i = COMPLEX_PLANE.basis(1)
    assert mv_mul(i, i, COMPLEX_PLANE).allclose([-1, 0])


@given(components, components)
def test_product_matches_quaternion_formula(a, b):
    z, w = as_mv(a), as_mv(b)
    z0, zv = z.scalar_part, z.vector_part
    w0, wv = w.scalar_part, w.vector_part
    expected = MultiVector.from_parts(z0 * w0 + zv @ wv, z0 * wv + w0 * zv + 1j * np.cross(zv, wv))
    assert mv_mul(z, w).allclose(expected, tol=1e-10)


@given(components, components)
def test_conjugate_reverses_products(a, b):
    z, w = as_mv(a), as_mv(b)
    assert conjugate(mv_mul(z, w)).allclose(mv_mul(conjugate(w), conjugate(z)), tol=1e-10)


@given(components, components)
def test_adjoint_is_multiplicative(a, b):
    z, w = as_mv(a), as_mv(b)
    assert adjoint(mv_mul(z, w)).allclose(mv_mul(adjoint(z), adjoint(w)), tol=1e-10)


@given(components, components)
def test_magnitude_is_multiplicative(a, b):
    z, w = as_mv(a), as_mv(b)
    product = magnitude_sq(mv_mul(z, w), tol=1e-9)
    assert product == pytest.approx(magnitude_sq(z) * magnitude_sq(w), rel=1e-9, abs=1e-9)


@given(components)
def test_involutions_square_to_identity(a):
    z = as_mv(a)
    for kind in InvolutionKind:
        assert involute(involute(z, kind), kind).allclose(z)


def test_mirror_flips_vector_part():
    z = MultiVector([1 + 1j, 2, 3j, -4])
    assert mirror(z).allclose([1 + 1j, -2, -3j, 4])
    assert adjoint(z).allclose(np.conj([1 + 1j, -2, -3j, 4]))


def test_magnitude_matches_metric():
    metric = metric_from_mixture(NATURAL.eta, NATURAL.mirror)
    assert_allclose(metric.lower, np.diag([1, -1, -1, -1]), atol=1e-12)
    z = MultiVector([2, 1j, 0.5, -1])
    assert magnitude_sq(z) == pytest.approx(z.c @ metric.lower @ z.c)


def test_null_vectors():
    null = MultiVector([1, 1, 0, 0])
    assert is_null(null)
    assert not is_null(MultiVector([1, 0.5, 0, 0]))
    with pytest.raises(DegenerateVector):
        mv_inverse(null)
    with pytest.raises(ValueError):
        is_null(null, tol=-1.0)


def test_inverse():
    z = MultiVector([2, 0.5j, -1, 0.25])
    assert mv_mul(z, mv_inverse(z)).allclose([1, 0, 0, 0], tol=1e-12)
    assert mv_mul(mv_inverse(z), z).allclose([1, 0, 0, 0], tol=1e-12)


def test_non_scalar_magnitude_detected():
    lower = NATURAL.eta.lower.copy()
    lower[1, 1, 1] = 1.0
    skewed = dataclasses.replace(NATURAL, name='skewed', eta=NATURAL.eta.with_lower(lower))
    with pytest.raises(NonScalarMagnitude):
        magnitude_sq(MultiVector([1, 2, 0, 0]), skewed)


def test_metric_rejects_non_scalar_signature():
    lower = np.zeros((2, 2, 2), dtype=complex)
    lower[0, 0, 0] = lower[0, 1, 1] = lower[1, 0, 1] = lower[1, 1, 0] = 1.0
    lower[1, 0, 0] = 0.5
    eta = MixtureTensor(lower, lower)
    with pytest.raises(NonScalarMetric):
        metric_from_mixture(eta, MirrorTensor(np.eye(2)))


def test_natural_identity_suite_passes():
    report = identity_suite(NATURAL.eta, NATURAL.mirror, samples=50, seed=3)
    assert report.passed, [c.id for c in report.failures]
    assert {'pseudo-inverse', 'cyclic-lower', 'triple-4', 'signature-pseudo-inverse',
            'mirror-covariance'} <= {c.id for c in report.checks}


def test_complex_plane_identity_suite_passes():
    report = identity_suite(COMPLEX_PLANE.eta, COMPLEX_PLANE.mirror, samples=20,
                            dual=COMPLEX_PLANE.dual)
    assert report.passed, [c.id for c in report.failures]


def test_random_mirror_breaks_covariance():
    rng = np.random.default_rng(5)
    random_mirror = MirrorTensor(rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4)))
    report = identity_suite(NATURAL.eta, random_mirror, samples=10, seed=2)
    check = report.get('mirror-covariance')
    assert not check.passed
    assert check.residual is None or check.residual > 1e-3


def test_mirror_covariance_holds_in_any_basis():
    report = identity_suite(NATURAL.eta, NATURAL.mirror, samples=200, seed=11)
    assert report.get('mirror-covariance').residual < 1e-12


def test_perturbed_mixture_fails_identities():
    lower = NATURAL.eta.lower.copy()
    lower[1, 2, 3] += 0.1
    report = identity_suite(NATURAL.eta.with_lower(lower), NATURAL.mirror, samples=5)
    assert not report.passed
    assert report.get('cyclic-lower').residual == pytest.approx(0.1)


def test_wellformed_and_natural_reports():
    for algebra in (NATURAL, COMPLEX_PLANE):
        assert wellformed_report(algebra).passed
    assert associativity_residual(NATURAL.eta) < 1e-12
    report = natural_properties_report(samples=50, seed=1)
    assert report.passed, [c.id for c in report.failures]


@settings(max_examples=50)
@given(components)
def test_exponential_series_matches_matrix(a):
    phi = as_mv(a)
    reference = exp_via_matrix(phi)
    assert mv_exp(phi).allclose(reference, tol=1e-9 * max(1.0, reference.norm()))


def test_exponential_split():
    phi = MultiVector([0.3 + 0.2j, 0.5, -0.1j, 0.4 + 0.3j])
    evanescent, oscillatory = exp_split(phi)
    assert mv_mul(evanescent, oscillatory).allclose(exp_via_matrix(phi), tol=1e-12)
    a, sigma, k = split_axis(phi)
    assert mv_mul(MultiVector.from_parts(0, k), MultiVector.from_parts(0, k)).allclose([1, 0, 0, 0])

    scalar_only = exp_split(MultiVector([0.5 + 1j, 0, 0, 0]))
    assert mv_mul(*scalar_only).allclose([np.exp(0.5 + 1j), 0, 0, 0])

    with pytest.raises(DegenerateVector):
        exp_split(MultiVector([0, 1, 1j, 0]))


def test_sandwich_rotation():
    turned = rotate(MultiVector.basis(1), 3, np.pi / 2, RotationMode.SANDWICH)
    assert turned.allclose(MultiVector.basis(2), tol=1e-12)
    unit = MultiVector.basis(0)
    assert rotate(unit, 2, 0.7, RotationMode.SANDWICH).allclose(unit)


def test_one_sided_rotation_keeps_magnitude():
    z = MultiVector([1, 0.2j, -0.5, 0.3])
    turned = rotate(z, 2, 1.1)
    assert magnitude_sq(turned) == pytest.approx(magnitude_sq(z))
    with pytest.raises(ValueError):
        rotate(z, 0, 1.0)


def test_multivector_validation():
    with pytest.raises(ValueError):
        MultiVector([])
    with pytest.raises(ValueError):
        MultiVector([np.nan, 0, 0, 0])
    z = MultiVector([1, 2, 3, 4])
    with pytest.raises(ValueError):
        z.c[0] = 5
