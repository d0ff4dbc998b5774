import numpy as np
import pytest
from numpy.testing import assert_allclose

from mixturecalc.algebra import COMPLEX_PLANE, NATURAL
from mixturecalc.analytic import (
    AnalyticField,
    Contour,
    analyticity_residual,
    arc_contour,
    circle_contour,
    complex_field,
    connection_mixture_matrix,
    corrected_path_integral,
    descent_conditions,
    path_integral,
    polyline_contour,
    polynomial_contour,
    proper_derivative,
    residue_pair,
)
from mixturecalc.errors import QuadratureFailure
from mixturecalc.geometry import ConnectionField
from mixturecalc.suites import (
    CUBIC,
    PATH_END,
    PATH_START,
    SQUARED_RADIUS,
    bulge_contour,
    rectangle_contour,
    semicircle_contour,
)

E2 = np.array([0.0, 0.0, 1.0, 0.0])
POINT = np.array([0.3, 0.4])


@pytest.mark.parametrize("c", [0.0, 0.5, 1.0, 2.0])
def test_naive_rectangle_integral(c):
    result = path_integral(SQUARED_RADIUS, rectangle_contour(c))
    assert_allclose(result.value.c, 2.0 * (c * c + 1.0 / 3.0) * E2, atol=1e-9)


def test_naive_integral_depends_on_path():
    semicircle = path_integral(SQUARED_RADIUS, semicircle_contour()).value.c
    assert_allclose(semicircle, 2.0 * E2, atol=1e-9)
    rectangle = path_integral(SQUARED_RADIUS, rectangle_contour(1.0)).value.c
    assert np.abs(semicircle - rectangle).max() > 0.5


def test_reversing_path_negates_integral():
    contour = bulge_contour()
    forward = path_integral(SQUARED_RADIUS, contour).value.c
    backward = path_integral(SQUARED_RADIUS, contour.reversed()).value.c
    assert_allclose(backward, -forward, atol=1e-9)
    assert_allclose(contour.reversed().start, PATH_END, atol=1e-15)


@pytest.mark.parametrize("contour", [rectangle_contour(0.5), semicircle_contour(), bulge_contour()],
                         ids=['rectangle', 'semicircle', 'bulge'])
def test_corrected_integral_is_path_independent(contour):
    expected = 2.0 * (CUBIC(np.array(PATH_END)) - CUBIC(np.array(PATH_START)))
    result = corrected_path_integral(CUBIC, contour)
    assert_allclose(result.value.c, expected, atol=1e-9)
    naive, by_product = result.parts
    assert_allclose(naive.c + by_product.c, result.value.c, atol=1e-15)


def test_corrected_integral_vanishes_on_closed_loop():
    loop = circle_contour((0.0, 0.0, 0.0, 0.0), 1.0, plane=(1, 2))
    assert loop.closed
    assert_allclose(corrected_path_integral(CUBIC, loop).value.c, 0, atol=1e-9)


def test_corrected_integral_with_finite_differences():
    field = AnalyticField(CUBIC.f)
    result = corrected_path_integral(field, bulge_contour())
    expected = 2.0 * (CUBIC(np.array(PATH_END)) - CUBIC(np.array(PATH_START)))
    assert_allclose(result.value.c, expected, atol=1e-7)


@pytest.mark.parametrize("radius", [0.5, 1.0, 3.0])
def test_residues_cancel(radius):
    pair = residue_pair(circle_contour((0.0, 0.0), radius))
    assert pair.I_z == pytest.approx(2j * np.pi, abs=1e-8)
    assert pair.I_conj == pytest.approx(-2j * np.pi, abs=1e-8)
    assert abs(pair.total) < 1e-8


def test_clockwise_loop_flips_residues():
    pair = residue_pair(circle_contour((0.0, 0.0), 1.0, clockwise=True))
    assert pair.I_z == pytest.approx(-2j * np.pi, abs=1e-8)
    assert pair.I_conj == pytest.approx(2j * np.pi, abs=1e-8)


def test_residue_rejects_bad_contours():
    with pytest.raises(QuadratureFailure):
        residue_pair(circle_contour((1.0, 0.0), 1.0))
    with pytest.raises(ValueError):
        residue_pair(semicircle_contour())


def test_conjugated_contour_mirrors_the_plane():
    contour = polyline_contour([(0.0, 1.0), (2.0, 3.0)]).conjugated(COMPLEX_PLANE)
    assert_allclose(contour.start, [0.0, -1.0])
    assert_allclose(contour.end, [2.0, -3.0])


def test_contour_validation():
    with pytest.raises(ValueError):
        Contour(())
    with pytest.raises(ValueError):
        polyline_contour([(0.0, 0.0)])
    with pytest.raises(ValueError):
        arc_contour((0.0, 0.0), 0.0, 0.0, 1.0, plane=(0, 1))
    assert not bulge_contour().closed
    assert_allclose(polynomial_contour([[0.0, 1.0], [2.0, 0.0]]).end, [2.0, 1.0])


@pytest.mark.parametrize("func", [lambda w: w ** 3, np.exp, lambda w: 1.0 / (w - 2.0)],
                         ids=['cube', 'exp', 'pole'])
def test_cauchy_riemann_holds_for_holomorphic(func):
    residual = analyticity_residual(complex_field(func), None, COMPLEX_PLANE, POINT)
    assert np.abs(residual).max() < 1e-8


def test_cauchy_riemann_flags_conjugation():
    residual = analyticity_residual(complex_field(np.conj), None, COMPLEX_PLANE, POINT)
    assert residual[0] + 1j * residual[1] == pytest.approx(2.0, abs=1e-8)
    modulus = analyticity_residual(complex_field(lambda w: abs(w) ** 2), None, COMPLEX_PLANE, POINT)
    assert np.abs(modulus).max() > 0.1


def test_exact_jacobian_from_derivative():
    field = complex_field(lambda w: w * w, lambda w: 2 * w)
    assert np.abs(analyticity_residual(field, None, COMPLEX_PLANE, POINT)).max() < 1e-12
    assert_allclose(proper_derivative(field, None, COMPLEX_PLANE, POINT).c, 2 * POINT, atol=1e-12)


def test_proper_derivative_of_identity_is_unit():
    identity = AnalyticField(lambda z: z.astype(complex), lambda z: np.eye(4))
    derivative = proper_derivative(identity, None, NATURAL, np.array([0.2, -0.1, 0.4, 0.3]))
    assert derivative.allclose([1, 0, 0, 0], tol=1e-12)


def test_proper_derivative_connection_term():
    rng = np.random.default_rng(0)
    conn = rng.normal(size=(4, 4, 4)) + 1j * rng.normal(size=(4, 4, 4))
    value = np.array([1.0, 0.5j, -0.25, 2.0])
    constant = AnalyticField(lambda z: value, lambda z: np.zeros((4, 4)))
    derivative = proper_derivative(constant, ConnectionField(lambda z: conn), NATURAL, np.zeros(4))
    assert_allclose(derivative.c, connection_mixture_matrix(conn, NATURAL) @ value / 4, atol=1e-12)


def test_descent_split_of_constant_exponent():
    constant = np.array([1.0 + 2.0j, 0.5, 0.0, 0.0])
    split = descent_conditions(AnalyticField(lambda p: constant), semicircle_contour(), 0.5)
    assert_allclose(split.re_part.c, 0, atol=1e-10)
    assert_allclose(split.im_part.c, 0, atol=1e-10)


def test_descent_split_along_a_line():
    direction = np.array([0.0, 0.6, 0.8, 0.0])
    axis = np.array([0.0, 1.0, 0.0, 0.0])
    line = polyline_contour([np.zeros(4), direction])

    def exponent(z):
        s = z @ direction
        return np.array([1j * s, 1.0 + (2.0 + 3.0j) * s, 0.0, 0.0])

    split = descent_conditions(AnalyticField(exponent), line, 0.5)
    assert_allclose(split.re_part.c, 2.0 * axis, atol=1e-8)
    assert_allclose(split.im_part.c, [1.0, 3.0, 0.0, 0.0], atol=1e-8)
    assert_allclose(split.misalignment, 0, atol=1e-8)
