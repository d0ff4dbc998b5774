"""Named verification suites.

Each suite turns a validated ScenarioConfig into one SuiteReport. Random
draws come from ``cfg.rng(stream)`` so a given seed always reproduces the
same report.
"""

import dataclasses
from typing import Callable, Dict, List, Sequence

import numpy as np

from .algebra import (
    COMPLEX_PLANE,
    NATURAL,
    MetricPair,
    MultiVector,
    RotationMode,
    exp_split,
    exp_via_matrix,
    identity_suite,
    magnitude_sq,
    mv_exp,
    mv_mul,
    natural_properties_report,
    random_multivectors,
    rotate,
    wellformed_report,
)
from .analytic import (
    AnalyticField,
    Contour,
    ContourPiece,
    analyticity_residual,
    arc_contour,
    circle_contour,
    complex_field,
    corrected_path_integral,
    descent_conditions,
    path_integral,
    polyline_contour,
    polynomial_contour,
    proper_derivative,
    residue_pair,
)
from .config import ContourSpec, ScenarioConfig
from .dirac import (
    PlaneWave,
    dirac_operator,
    dirac_residual,
    dirac_set_from_pauli,
    em_coupled_residual,
    factorization_check,
    kernel_amplitude,
    klein_gordon_residual,
    phase_shift_residual,
    verify_dirac_conditions,
)
from .electromag import (
    PAULI,
    FourPotential,
    MatrixPotentialSet,
    em_derivative,
    faraday_relations,
    faraday_tensor,
    gauge_covariance_check,
    maxwell_residuals,
    perfect_fluid_contraction,
    poynting,
    simple_field_curvature,
    stress_energy,
    su2_gauge,
    tensor_contraction,
    yang_mills_field_tensor,
)
from .errors import UnknownSuite
from .geometry import (
    Box,
    ConnectionField,
    CurvatureTensors,
    FiniteDifferenceScheme,
    basis_divergence_matrices,
    christoffel_from_metric,
    commutation_coefficients,
    compatibility_residuals,
    connection_from_frame,
    curvature,
    exact_connection_from_frame,
    exponential_frame,
    frame_connection_field,
    frame_metric,
    frame_mixture,
    interior_lattice,
    lie_bracket_components,
    matrix_curvature,
    polynomial_frame,
    ricci_ansatz_check,
    second_order_residual,
)
from .report import SuiteReport, timed
from .table_io import dump_dirac, load_dirac
from .weakfield import (
    DEFAULT_FD,
    TestParticle,
    WeakFieldConfig,
    energy,
    field_sample,
    force_decomposition,
    integrate_trajectory,
    metric_connection_slice,
    weakfield_connection,
    zero_scalar,
    zero_vector,
)

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
E2 = np.array([0.0, 0.0, 1.0, 0.0])

# Endpoints shared by the path-dependence family, in the (e1, e2) plane.
PATH_START = (0.0, 0.0, -1.0, 0.0)
PATH_END = (0.0, 0.0, 1.0, 0.0)


def _relative(residual: float, scale: float) -> float:
    return residual / scale if scale > 0 else residual


def _convergence(report: SuiteReport, check_id: str, coarse: float, fine: float) -> None:
    """Record error(h)/error(h/2) for a second-order scheme, expected near 4."""
    if coarse < 1e-10:
        report.info(f'{check_id}-exact', 'truncation error below round-off; order not measurable',
                    coarse)
        return
    ratio = coarse / fine if fine > 0 else np.inf
    report.info(f'{check_id}-ratio', 'error(h) / error(h/2)', ratio)
    report.add(check_id, 'error(h) / error(h/2) = 4 within 20%', abs(ratio - 4.0), 0.8)


# ----------------------------------------------------------------------------
# algebra-identities
# ----------------------------------------------------------------------------

def _exponential_checks(rng: np.random.Generator, count: int) -> SuiteReport:
    report = SuiteReport('exponential')
    phis = 2.0 * random_multivectors(rng, count) - (1 + 1j)
    series_gap = split_gap = 0.0
    for c in phis:
        phi = MultiVector(c)
        reference = exp_via_matrix(phi)
        series_gap = max(series_gap, float(np.max(np.abs(mv_exp(phi).c - reference.c))))
        evanescent, oscillatory = exp_split(phi)
        split_gap = max(split_gap, float(np.max(np.abs(
            mv_mul(evanescent, oscillatory).c - reference.c))))
    report.add('series-vs-matrix', 'power series exp = expm of left multiplication', series_gap, 1e-10)
    report.add('split-product', 'evanescent * oscillatory = exp(phi)', split_gap, 1e-10)

    turned = rotate(MultiVector.basis(1), 3, np.pi / 2, RotationMode.SANDWICH)
    report.add('sandwich-quarter-turn', 'quarter turn of e1 about e3 gives e2',
               turned.c - MultiVector.basis(2).c, 1e-12)

    worst = 0.0
    for c, angle in zip(random_multivectors(rng, count), rng.uniform(-np.pi, np.pi, count)):
        z = MultiVector(c)
        turned = rotate(z, 1 + int(rng.integers(3)), float(angle))
        before = magnitude_sq(z)
        worst = max(worst, _relative(abs(magnitude_sq(turned) - before), abs(before)))
    report.add('rotation-magnitude', '|z exp(i e_k w)|^2 = |z|^2 (relative)', worst, 1e-10)
    return report


def algebra_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.algebra
    algebra = NATURAL if section.name == 'natural' else COMPLEX_PLANE
    report = identity_suite(algebra.eta, algebra.mirror, section.samples, section.tolerance,
                            seed=cfg.seed, dual=algebra.dual)
    report.extend(wellformed_report(algebra, section.tolerance), prefix='wellformed.')
    if algebra is NATURAL:
        report.extend(natural_properties_report(section.samples, cfg.seed, section.tolerance),
                      prefix='natural.')
        report.extend(_exponential_checks(cfg.rng(1), min(section.samples, 100)), prefix='exp.')
    return report


# ----------------------------------------------------------------------------
# geometry-compatibility
# ----------------------------------------------------------------------------

def _random_vector_field(rng: np.random.Generator) -> Callable[[np.ndarray], np.ndarray]:
    const = rng.normal(size=4)
    linear = rng.normal(size=(4, 4))
    quadratic = rng.normal(size=(4, 4))

    def evaluate(z):
        z = np.asarray(z, dtype=float)
        return (const + linear @ z + quadratic @ (z * z)).astype(complex)

    return evaluate


def geometry_suite(cfg: ScenarioConfig) -> SuiteReport:
    fd = cfg.finite_difference.scheme
    tol = cfg.finite_difference.tolerance()
    section = cfg.geometry
    width = section.half_width
    domain = Box((-width,) * 4, (width,) * 4)
    points = interior_lattice(domain, fd, section.points)
    rng = cfg.rng(2)
    report = SuiteReport('geometry-compatibility')

    frame = polynomial_frame(section.amplitude, seed=cfg.seed)
    other = polynomial_frame(section.amplitude, seed=cfg.seed + 1)
    metric = frame_metric(frame, MINKOWSKI)
    mixture = frame_mixture(frame, NATURAL.eta)
    gamma = frame_connection_field(frame, fd)
    mismatched_gamma = frame_connection_field(other, fd)

    worst = {'metric': 0.0, 'mixture': 0.0, 'mirror-split-scalar': 0.0, 'mirror-split-vector': 0.0}
    mismatch = 0.0
    for z in points:
        matched = compatibility_residuals(metric, mixture, gamma, z, fd, NATURAL.mirror, tol)
        for key in worst:
            worst[key] = max(worst[key], matched.get(key).residual)
        control = compatibility_residuals(metric, mixture, mismatched_gamma, z, fd,
                                          NATURAL.mirror, tol)
        mismatch = max(mismatch, control.get('metric').residual, control.get('mixture').residual)
    report.add('metric-compatibility', 'g_ab;m = 0 for a frame-induced metric', worst['metric'], tol)
    report.add('mixture-compatibility', 'eta^g_ab;m = 0 for a frame-induced mixture',
               worst['mixture'], tol)
    report.info('mirror-split-scalar', 'e0 channel of the mirrored mixture derivative',
                worst['mirror-split-scalar'])
    report.info('mirror-split-vector', 'vector channels of the mirrored mixture derivative',
                worst['mirror-split-vector'])
    matched_worst = max(worst['metric'], worst['mixture'])
    report.add('mismatch-sensitivity', 'matched residual / mismatched-frame residual <= 0.1',
               matched_worst / mismatch if mismatch > 0 else np.inf, 0.1)

    coarse = FiniteDifferenceScheme(fd.step(0), 2)
    fine = coarse.halved()
    err_coarse = err_fine = 0.0
    for z in points:
        exact = exact_connection_from_frame(frame, z)
        err_coarse = max(err_coarse, float(np.max(np.abs(connection_from_frame(frame, z, coarse) - exact))))
        err_fine = max(err_fine, float(np.max(np.abs(connection_from_frame(frame, z, fine) - exact))))
    report.add('connection-accuracy', 'FD (d_b F) F^-1 against the exact derivative', err_coarse, tol)
    _convergence(report, 'connection-convergence', err_coarse, err_fine)

    sample = points[:: max(1, len(points) // 9)]
    flat = antisym = 0.0
    for z in sample:
        tensors = curvature(gamma, z, fd)
        flat = max(flat, float(np.max(np.abs(tensors.R))))
        antisym = max(antisym, float(np.max(np.abs(tensors.R + np.einsum('abnm->abmn', tensors.R)))))
    report.add('pure-gauge-flatness', 'R = 0 for a connection built from a frame', flat, tol)
    report.add('riemann-antisymmetry', 'R^a_b(nm) = 0', antisym, 1e-15)

    h_vec = rng.uniform(-0.5, 0.5, 4)
    z0 = points[len(points) // 2]
    expected = np.einsum('ma,b->mab', np.eye(4), h_vec)
    report.add('exponential-frame', 'Gamma^m_ab = 1^m_a h_b for F = exp(h.z) 1',
               connection_from_frame(exponential_frame(h_vec), z0, fd) - expected, tol)
    w_mat, m_mat = basis_divergence_matrices(expected, NATURAL.eta)
    report.add('basis-divergence-duality', 'W_a^d = -M_d^a for Gamma^m_ab = 1^m_a h_b',
               w_mat + m_mat.T, 1e-12)

    bracket_gap = 0.0
    for z in sample:
        coeffs = commutation_coefficients(connection_from_frame(frame, z, fd))
        bracket_gap = max(bracket_gap, float(np.max(np.abs(
            coeffs.C - lie_bracket_components(frame, z, fd)))))
    report.add('commutation-lie-bracket', 'C^d_ba = 2 Gamma^d_[ab] matches the Lie bracket',
               bracket_gap, 1e-10)

    christoffel = christoffel_from_metric(metric, z0, fd)
    report.add('christoffel-symmetry', 'Gamma^s_am = Gamma^s_ma',
               christoffel - np.einsum('sam->sma', christoffel), 1e-15)

    f = _random_vector_field(rng)
    pure = second_order_residual(f, gamma, curvature(gamma, z0, fd), NATURAL.eta, z0, fd)
    report.add('second-order-pure-gauge', 'second-order bracket vanishes on a frame geometry',
               pure, tol)

    def simple_h(z):
        return 0.5 * np.array([0.0, -z[2], z[1], 0.0]) + 0.1 * z[0] * np.array([0.0, 0.0, 0.0, 1.0])

    curved = ConnectionField(lambda z: np.einsum('ma,b->mab', np.eye(4), simple_h(z)).astype(complex))
    tensors = curvature(curved, z0, fd)
    with_r = float(np.max(np.abs(second_order_residual(f, curved, tensors, NATURAL.eta, z0, fd))))
    zeroed = CurvatureTensors(0 * tensors.P, 0 * tensors.R, 0 * tensors.ricci, None)
    without_r = float(np.max(np.abs(second_order_residual(f, curved, zeroed, NATURAL.eta, z0, fd))))
    report.add('second-order-curved', 'second-order bracket vanishes with the matching R', with_r, tol)
    report.info('second-order-zero-curvature', 'same bracket with R zeroed', without_r)
    report.add('second-order-sensitivity', 'matched / zeroed-curvature residual <= 0.1',
               with_r / without_r if without_r > 0 else np.inf, 0.1)

    K = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    report.extend(ricci_ansatz_check(K, NATURAL.eta), prefix='ricci.')
    return report


# ----------------------------------------------------------------------------
# analytic-paths
# ----------------------------------------------------------------------------

def rectangle_contour(c: float) -> Contour:
    """(0, -1) -> (c, -1) -> (c, 1) -> (0, 1) in the (e1, e2) plane."""
    return polyline_contour([PATH_START, (0.0, c, -1.0, 0.0), (0.0, c, 1.0, 0.0), PATH_END])


def semicircle_contour() -> Contour:
    return arc_contour((0.0, 0.0, 0.0, 0.0), 1.0, -np.pi / 2, np.pi / 2, plane=(1, 2))


def bulge_contour() -> Contour:
    """x = 3 s (1 - s), y = 2 s - 1."""
    return polynomial_contour([PATH_START, (0.0, 3.0, 2.0, 0.0), (0.0, -3.0, 0.0, 0.0)])


def contour_from_spec(spec: ContourSpec) -> Contour:
    if spec.kind == 'polyline':
        return polyline_contour(spec.params['points'])
    if spec.kind == 'polynomial':
        return polynomial_contour(spec.params['coefficients'])
    p = spec.params
    return arc_contour(p['center'], p['radius'], p['theta0'], p['theta1'], plane=p['plane'])


SQUARED_RADIUS = AnalyticField(
    lambda z: np.array([z[1] ** 2 + z[2] ** 2, 0.0, 0.0, 0.0], dtype=complex))


def _cubic(z):
    return np.array([0.0, z[1] ** 3 / 3.0, z[2] ** 3 / 3.0, 0.0], dtype=complex)


def _cubic_jacobian(z):
    jac = np.zeros((4, 4), dtype=complex)
    jac[1, 1] = z[1] ** 2
    jac[2, 2] = z[2] ** 2
    return jac


CUBIC = AnalyticField(_cubic, _cubic_jacobian)

HOLOMORPHIC = {
    'z^2': lambda w: w * w,
    'z^3': lambda w: w ** 3,
    'exp': np.exp,
    'sin': np.sin,
    'inverse-shifted': lambda w: 1.0 / (w - 2.0),
}
NON_HOLOMORPHIC = {
    'conjugate': np.conj,
    'modulus-squared': lambda w: abs(w) ** 2,
    'real-part': lambda w: w.real,
}
PLANE_POINTS = ((0.3, 0.4), (-0.7, 0.2), (1.1, -0.5))


def _hamiltonian_contour() -> Contour:
    """Phase-space loop z = cos s e0, u = -sin s e0 as an eight-component path (z, u)."""
    def point(s):
        p = np.zeros(8)
        p[0], p[4] = np.cos(s), -np.sin(s)
        return p

    def velocity(s):
        v = np.zeros(8)
        v[0], v[4] = -np.sin(s), -np.cos(s)
        return v

    return Contour((ContourPiece(point, -np.pi / 2, np.pi / 2, velocity),))


def _hamiltonian_exponent(p: np.ndarray) -> np.ndarray:
    """1/2 (u - i z)^2."""
    w = MultiVector(p[4:] - 1j * p[:4])
    return 0.5 * mv_mul(w, w).c


def _descent_checks(tol: float) -> SuiteReport:
    report = SuiteReport('descent')
    split = descent_conditions(AnalyticField(_hamiltonian_exponent), _hamiltonian_contour(), 0.0)
    report.add('hamiltonian-oscillates', 'Re d phi/ds = 0 on a phase-space orbit',
               split.re_part.c, tol)
    report.info('hamiltonian-rate', 'Im d phi/ds on the orbit', split.im_part.c)

    direction = np.array([0.0, 0.6, 0.8, 0.0])
    start = np.array([0.0, 0.1, -0.2, 0.3])
    line = Contour((ContourPiece(lambda s: np.concatenate([start + s * direction, direction]),
                                 0.0, 1.0),))
    split = descent_conditions(AnalyticField(lambda p: p[4:].astype(complex)), line, 0.5)
    report.add('geodesic-stationary', 'd phi/ds = 0 for phi = u along a straight geodesic',
               np.concatenate([split.re_part.c, split.im_part.c]), tol)

    constant = np.array([1.0 + 2.0j, 0.5, 0.0, 0.0])
    split = descent_conditions(AnalyticField(lambda p: constant), semicircle_contour(), 0.5)
    report.add('constant-exponent', 'both parts vanish for a constant exponent',
               np.concatenate([split.re_part.c, split.im_part.c]), tol)
    return report


def analytic_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.analytic
    tol = section.tolerance
    report = SuiteReport('analytic-paths')

    for c in section.rectangles:
        result = path_integral(SQUARED_RADIUS, rectangle_contour(c))
        report.add(f'naive-rectangle-{c:g}', 'rectangle integral of dz |r|^2 = 2(c^2 + 1/3) e2',
                   result.value.c - 2.0 * (c * c + 1.0 / 3.0) * E2, tol)
    semicircle = path_integral(SQUARED_RADIUS, semicircle_contour())
    report.add('naive-semicircle', 'semicircle integral of dz |r|^2 = 2 e2', semicircle.value.c - 2.0 * E2,
               tol)
    naive = [path_integral(SQUARED_RADIUS, rectangle_contour(c)).value.c for c in section.sweep]
    naive += [semicircle.value.c, path_integral(SQUARED_RADIUS, bulge_contour()).value.c]
    naive = np.array(naive)
    spread = float(np.max(np.abs(naive - naive[0])))
    report.info('naive-spread', 'largest difference between naive integrals with shared endpoints', spread)
    report.add('naive-path-dependence', 'naive integrals depend on the path (0.1 / spread <= 1)',
               0.1 / spread if spread > 0 else np.inf, 1.0)

    expected = 2.0 * (CUBIC(np.array(PATH_END)) - CUBIC(np.array(PATH_START)))
    contours = {f'rectangle-{c:g}': rectangle_contour(c) for c in section.rectangles}
    contours['semicircle'] = semicircle_contour()
    contours['bulge'] = bulge_contour()
    corrected = []
    for name, contour in contours.items():
        result = corrected_path_integral(CUBIC, contour)
        corrected.append(result.value.c)
        report.add(f'corrected-{name}', 'corrected integral = 2 (f(end) - f(start))',
                   result.value.c - expected, tol)
    report.add('corrected-path-independence', 'corrected integrals agree across paths',
               np.array(corrected) - corrected[0], tol)
    for index, spec in enumerate(section.contours):
        contour = contour_from_spec(spec)
        result = corrected_path_integral(CUBIC, contour)
        report.add(f'corrected-configured-{index}', 'corrected integral = 2 (f(end) - f(start))',
                   result.value.c - 2.0 * (CUBIC(contour.end) - CUBIC(contour.start)), tol)

    loop = circle_contour((0.0, 0.0, 0.0, 0.0), 1.0, plane=(1, 2))
    report.add('corrected-closed-loop', 'corrected integral around a closed loop = 0',
               corrected_path_integral(CUBIC, loop).value.c, tol)

    two_pi_i = 2j * np.pi
    for radius in section.radii:
        pair = residue_pair(circle_contour((0.0, 0.0), radius))
        report.add(f'residue-z-r{radius:g}', 'loop integral of dz/z = 2 pi i', pair.I_z - two_pi_i, 1e-8)
        report.add(f'residue-conj-r{radius:g}', 'loop integral of dz*/z* = -2 pi i',
                   pair.I_conj + two_pi_i, 1e-8)
        report.add(f'residue-sum-r{radius:g}', 'the two residues cancel', pair.total, 1e-8)
    clockwise = residue_pair(circle_contour((0.0, 0.0), section.radii[0], clockwise=True))
    report.add('residue-clockwise', 'reversing the loop flips both residues',
               [clockwise.I_z + two_pi_i, clockwise.I_conj - two_pi_i], 1e-8)

    points = [np.array(p) for p in PLANE_POINTS]
    for name, func in HOLOMORPHIC.items():
        field = complex_field(func)
        worst = max(float(np.max(np.abs(analyticity_residual(field, None, COMPLEX_PLANE, p))))
                    for p in points)
        report.add(f'cauchy-riemann-{name}', '2 df/dz* = 0 for a holomorphic function', worst, 1e-8)
    for name, func in NON_HOLOMORPHIC.items():
        field = complex_field(func)
        smallest = min(float(np.max(np.abs(analyticity_residual(field, None, COMPLEX_PLANE, p))))
                       for p in points)
        report.add(f'cauchy-riemann-detects-{name}', 'non-holomorphic residual is non-zero '
                   '(1e-3 / residual <= 1)', 1e-3 / smallest if smallest > 0 else np.inf, 1.0)
    wirtinger = analyticity_residual(complex_field(np.conj), None, COMPLEX_PLANE, points[0])
    report.add('wirtinger-conjugate', '2 d(z*)/dz* = 2', wirtinger[0] + 1j * wirtinger[1] - 2.0, 1e-8)

    square = complex_field(lambda w: w * w)
    worst = 0.0
    for p in points:
        derivative = proper_derivative(square, None, COMPLEX_PLANE, p).c
        worst = max(worst, float(np.max(np.abs(derivative - 2.0 * p))))
    report.add('proper-derivative-square', 'd(z^2)/dz = 2z', worst, 1e-8)
    identity = AnalyticField(lambda z: z.astype(complex), lambda z: np.eye(4))
    report.add('proper-derivative-identity', 'dz/dz = e0 in the natural geometry',
               proper_derivative(identity, None, NATURAL, np.array([0.2, -0.1, 0.4, 0.3])).c
               - np.array([1.0, 0.0, 0.0, 0.0]), 1e-12)

    report.extend(_descent_checks(1e-8), prefix='descent.')
    return report


# ----------------------------------------------------------------------------
# dirac
# ----------------------------------------------------------------------------

def dirac_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.dirac
    M = section.mass
    d = dirac_set_from_pauli(M)
    report = SuiteReport('dirac')
    report.extend(verify_dirac_conditions(d), prefix='conditions.')

    loaded = load_dirac(dump_dirac(d))
    gap = max(float(np.max(np.abs(a - b))) for a, b in zip(d.matrices(), loaded.matrices()))
    report.add('table-round-trip', 'Dirac set survives the text table format',
               max(gap, abs(loaded.N - d.N)), 0.0)

    rng = cfg.rng(3)
    ks = rng.uniform(-section.k_range, section.k_range, (section.modes, 3))
    omegas = rng.uniform(-3.0, 3.0, section.modes)
    zero = np.zeros(4)
    symbol_worst = det_worst = 0.0
    for k, omega in zip(ks, omegas):
        checks = factorization_check(d, PlaneWave(zero, omega, k), M)
        symbol_worst = max(symbol_worst, checks.get('symbol-product').residual)
        scale = (omega * omega + k @ k + M * M) ** 2
        det_worst = max(det_worst, checks.get('determinant').residual / max(1.0, scale))
    report.add('symbol-product', 'S_adj S = (-w^2 + k^2 + M^2) 1', symbol_worst, 1e-12)
    report.add('determinant', 'det S_adj = (w^2 - k^2 - M^2)^2 (relative)', det_worst, 1e-12)

    shell_worst = kg_worst = dim_worst = 0.0
    for index, k in enumerate(ks):
        branch = 1 if index % 2 == 0 else -1
        wave = PlaneWave.on_shell(zero, k, M, branch)
        basis = kernel_amplitude(d, wave.omega, k, M)
        dim_worst = max(dim_worst, abs(basis.shape[1] - 2))
        for column in basis.T:
            shell_worst = max(shell_worst, float(np.max(np.abs(
                dirac_residual(d, wave.with_amplitude(column), M)))))
        kg_worst = max(kg_worst, abs(klein_gordon_residual(wave, M)) / max(1.0, wave.omega ** 2))
    report.add('on-shell-kernel', 'kernel amplitudes solve the Dirac equation', shell_worst, 1e-12)
    report.add('kernel-dimension', 'two independent spin states per on-shell mode', dim_worst, 0)
    report.add('klein-gordon', 'w^2 = k^2 + M^2 on the shell (relative)', kg_worst, 1e-12)

    try:
        kernel_amplitude(d, float(np.sqrt(ks[0] @ ks[0] + M * M)) + 0.5, ks[0], M)
        off_shell = 1.0
    except ValueError:
        off_shell = 0.0
    report.add('off-shell-empty', 'no kernel away from the mass shell', off_shell, 0)

    e, phi, A = section.charge, section.phi, np.asarray(section.A)
    coupled_worst = shift = 0.0
    for index, k in enumerate(ks[: min(10, len(ks))]):
        kinetic = k - e * A
        omega = (1 if index % 2 == 0 else -1) * np.sqrt(kinetic @ kinetic + M * M) + e * phi
        for column in kernel_amplitude(d, omega - e * phi, kinetic, M).T:
            wave = PlaneWave(column, omega, k)
            coupled_worst = max(coupled_worst, float(np.max(np.abs(
                em_coupled_residual(d, wave, M, e, phi, A)))))
            shift = max(shift, float(np.max(np.abs(dirac_residual(d, wave, M)))))
    report.add('em-coupled', 'kernel of the shifted mode solves the coupled equation',
               coupled_worst, 1e-12)
    report.info('em-coupling-shift', 'same waves in the free equation', shift)

    fd = FiniteDifferenceScheme(1e-3, 4)
    k = ks[0] / max(1.0, float(np.linalg.norm(ks[0])))
    omega = float(np.sqrt(k @ k + M * M))
    wave = PlaneWave(kernel_amplitude(d, omega, k, M)[:, 0], omega, k)
    points = rng.uniform(-1.0, 1.0, (3, 4))
    operator_worst = max(float(np.max(np.abs(dirac_operator(d, wave, M, z, fd)))) for z in points)
    report.add('operator-on-shell', 'finite-difference Dirac operator annihilates the mode',
               operator_worst, 1e-8)

    def phase(z):
        return 0.3 * np.sin(z[0]) + 0.2 * z[1] * z[2]

    phase_worst = max(float(np.max(np.abs(phase_shift_residual(wave, phase, z, fd)))) for z in points)
    report.add('phase-shift', 'd f~ = exp(i phi)(d + i d phi) f for f = f~ exp(-i phi)',
               phase_worst, 1e-8)
    return report


# ----------------------------------------------------------------------------
# maxwell
# ----------------------------------------------------------------------------

def _smooth_field(rng: np.random.Generator) -> Callable[[np.ndarray], np.ndarray]:
    amplitude = rng.normal(scale=0.5, size=(4, 4))
    frequency = rng.uniform(0.5, 1.5, (4, 4))
    offset = rng.uniform(0.0, 2.0 * np.pi, (4, 4))

    def evaluate(z):
        return np.sum(amplitude * np.sin(frequency * np.asarray(z, dtype=float) + offset), axis=1)

    return evaluate


def maxwell_worst(h: FourPotential, points: Sequence[np.ndarray],
                  fd: FiniteDifferenceScheme) -> Dict[str, float]:
    """Largest residual of each Maxwell group over the points."""
    worst = {'gauss-E': 0.0, 'ampere': 0.0, 'gauss-B': 0.0, 'faraday': 0.0}
    for z in points:
        res = maxwell_residuals(h, z, fd)
        for key, value in zip(worst, res):
            worst[key] = max(worst[key], float(np.max(np.abs(value))))
    return worst


def maxwell_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.electromag
    fd = cfg.finite_difference.scheme
    tol = cfg.finite_difference.tolerance()
    rng = cfg.rng(4)
    report = SuiteReport('maxwell')

    h = FourPotential(section.phi, section.A)
    points = list(rng.uniform(-1.0, 1.0, (section.points, 4)))
    relations = {
        'gauss-E': 'div E - d_t alpha = 0 (real scalar channel)',
        'ampere': 'curl B - d_t E + grad alpha = 0 (real vector channel)',
        'gauss-B': 'div B = 0 (imaginary scalar channel)',
        'faraday': 'curl E + d_t B = 0 (imaginary vector channel)',
    }
    worst = maxwell_worst(h, points, fd)
    for key, value in worst.items():
        report.add(key, relations[key], value, tol)
    report.info('field-alpha', 'scalar part of the potential derivative at the first point',
                em_derivative(h, points[0], fd).alpha)

    coarse = FiniteDifferenceScheme(fd.step(0), 2)
    _convergence(report, 'convergence',
                 max(maxwell_worst(h, points, coarse).values()),
                 max(maxwell_worst(h, points, coarse.halved()).values()))

    curvature_worst = trace_worst = 0.0
    for _ in range(section.curvature_fields):
        field = _smooth_field(rng)
        result = simple_field_curvature(field, rng.uniform(-1.0, 1.0, 4), fd)
        curvature_worst = max(curvature_worst, result.residual)
        trace_worst = max(trace_worst, result.trace_residual)
    report.add('simple-field-curvature', 'R = 1 (x) F for Gamma^m_ab = 1^m_a h_b', curvature_worst, tol)
    report.add('simple-field-trace', 'Gamma^b_ab = h_a', trace_worst, 1e-12)

    minkowski = MetricPair(MINKOWSKI, MINKOWSKI)
    route = oracle = eb_gap = round_trip = 0.0
    for E, B in zip(rng.normal(size=(section.samples, 3)), rng.normal(size=(section.samples, 3))):
        direct = poynting(E, B, tol=None).c
        scale = max(1.0, float(np.max(np.abs(direct))))
        F = faraday_tensor(E, B)
        via_tensor = tensor_contraction(stress_energy(F, minkowski)).c
        expected = np.concatenate([[E @ E + B @ B], 2.0 * np.cross(E, B)])
        route = max(route, float(np.max(np.abs(direct - via_tensor))) / scale)
        oracle = max(oracle, float(np.max(np.abs(direct - expected))) / scale)
        rebuilt = faraday_relations(F)
        eb_gap = max(eb_gap, float(np.max(np.abs(rebuilt.EB.c[1:] - (E + 1j * B)))),
                     abs(rebuilt.EB.c[0]))
        round_trip = max(round_trip, float(np.max(np.abs(rebuilt.F_round - F))))
    report.add('poynting-routes', '(E + iB)(E - iB) = T^ab eta_ab (relative)', route, 1e-10)
    report.add('poynting-oracle', '(E + iB)(E - iB) = |E|^2 + |B|^2 + 2 E x B (relative)', oracle, 1e-10)
    report.add('faraday-EB', '1/2 eta F recovers E + iB', eb_gap, 1e-12)
    report.add('faraday-round-trip', 'Re of the rebuilt tensor is F', round_trip, 1e-12)

    rho, pressure = 1.0, 0.25
    fluid = perfect_fluid_contraction(rho, pressure, MultiVector.basis(0))
    report.add('perfect-fluid-rest', 'fluid at rest contracts to (rho + 3p) e0 in (-+++)',
               fluid.c - np.array([rho + 3.0 * pressure, 0.0, 0.0, 0.0]), 1e-12)
    return report


# ----------------------------------------------------------------------------
# yangmills
# ----------------------------------------------------------------------------

def hermitian_potentials(rng: np.random.Generator, amplitude: float) -> Callable[[np.ndarray], np.ndarray]:
    """H_m(z) = sum_a sigma_a (c + c.z + d |z|^2) with seeded real coefficients."""
    coeff = rng.normal(scale=amplitude, size=(4, 3, 6))
    generators = np.stack(PAULI)

    def evaluate(z):
        z = np.asarray(z, dtype=float)
        theta = coeff[:, :, 0] + coeff[:, :, 1:5] @ z + coeff[:, :, 5] * (z @ z)
        return np.einsum('ma,aij->mij', theta, generators)

    return evaluate


def yangmills_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.yangmills
    fd = cfg.finite_difference.scheme
    tol = cfg.finite_difference.tolerance()
    rng = cfg.rng(5)
    report = SuiteReport('yangmills')

    potentials = hermitian_potentials(rng, section.amplitude)
    P = MatrixPotentialSet(potentials, section.epsilon)
    table = section.gauge if section.gauge is not None else rng.normal(scale=0.5, size=(3, 5))
    S = su2_gauge(table)
    points = rng.uniform(-1.0, 1.0, (section.points, 4))

    covariant = form = 0.0
    for z in points:
        checks = gauge_covariance_check(P, S, z, fd, tol)
        covariant = max(covariant, checks.get('gauge-covariance').residual)
        form = max(form, checks.get('curvature-form-covariance').residual)
    report.add('gauge-covariance', "F'_mn = S^-1 F_mn S for the covariant field tensor", covariant, tol)
    report.info('curvature-form-covariance', 'same comparison for the plain curvature form', form)

    constant = np.zeros((3, 5))
    constant[:, 0] = np.asarray(table)[:, 0]
    checks = gauge_covariance_check(P, su2_gauge(constant), points[0], fd, 1e-10)
    report.add('constant-gauge', 'a constant gauge rotates F exactly',
               checks.get('gauge-covariance').residual, 1e-10)

    eps = section.epsilon
    coupling = 0.0
    for z in points:
        R = matrix_curvature(lambda p: eps * potentials(p), z, fd)
        F = yang_mills_field_tensor(P, z, fd)
        scale = max(1.0, float(np.max(np.abs(R))))
        coupling = max(coupling, float(np.max(np.abs(R - eps * np.einsum('mnab->nmab', F)))) / scale)
    report.add('curvature-coupling', 'curvature of eps H is eps F (relative)', coupling, 1e-10)
    return report


# ----------------------------------------------------------------------------
# weakfield
# ----------------------------------------------------------------------------

def uniform_field_potential(B: float) -> Callable[[np.ndarray], np.ndarray]:
    """A = 1/2 B (-y, x, 0), a uniform field B along z."""
    def evaluate(z):
        return 0.5 * B * np.array([-z[2], z[1], 0.0])

    return evaluate


def cyclotron_setup(fields: WeakFieldConfig, B: float, speed: float):
    """Uniform-field config and a unit particle on its orbit of radius c |v| / B.

    Returns:
        (config, particle, radius, period)
    """
    cfg = WeakFieldConfig(A=uniform_field_potential(B), c=fields.c, mu_g=fields.mu_g,
                          mu_e=fields.mu_e, guard=fields.guard)
    radius = fields.c * speed / B
    particle = TestParticle(1.0, 1.0, np.array([0.0, radius, 0.0, 0.0]), np.array([0.0, -speed, 0.0]))
    return cfg, particle, radius, 2.0 * np.pi / B


def gravity_only(fields: WeakFieldConfig) -> WeakFieldConfig:
    return dataclasses.replace(fields, phi=zero_scalar, A=zero_vector)


def closed_form_fields(fields: WeakFieldConfig, z: np.ndarray):
    """G, E and B from the exact derivatives of config-built potentials."""
    z = np.asarray(z, dtype=float)
    G = fields.psi.gradient(z)[1:]
    jac = fields.A.jacobian(z)
    E = fields.phi.gradient(z)[1:] + jac[:, 0]
    B = np.array([jac[2, 2] - jac[1, 3], jac[0, 3] - jac[2, 1], jac[1, 1] - jac[0, 2]])
    return G, E, B


def _relative_gap(actual: np.ndarray, expected: np.ndarray) -> float:
    return _relative(float(np.linalg.norm(actual - expected)), float(np.linalg.norm(expected)))


def weakfield_suite(cfg: ScenarioConfig) -> SuiteReport:
    section = cfg.weakfield
    fields = section.fields
    particle = section.particle.particle()
    fd = DEFAULT_FD
    c = fields.c
    report = SuiteReport('weakfield')

    gravity = gravity_only(fields)
    neutral = TestParticle(particle.m, 0.0, particle.x, particle.v)
    G, _, _ = closed_form_fields(fields, particle.x)
    newton = force_decomposition(gravity, neutral, fd=fd).total
    report.add('newton-limit', 'a = -(c^2 mu_g / 2) grad psi, i.e. -grad psi for mu_g = 2/c^2',
               _relative_gap(newton, -0.5 * c ** 2 * fields.mu_g * G), 0.01)

    em_only = dataclasses.replace(fields, psi=zero_scalar)
    charged = particle if particle.e != 0 else TestParticle(particle.m, 1.0, particle.x, particle.v)
    _, E, B = closed_form_fields(fields, charged.x)
    lorentz = force_decomposition(em_only, charged, fd=fd).total
    coupling = charged.e * c ** 2 * fields.rho * fields.mu_e / charged.m
    report.add('lorentz-limit', 'a = (e/m)(E + V x B) when rho mu_e = 1/c^2',
               _relative_gap(lorentz, coupling * (E + np.cross(c * charged.v, B))), 0.01)

    slice_ = weakfield_connection(fields, particle.x, fd)
    readback = np.concatenate(field_sample(slice_, fields))
    direct = np.concatenate(closed_form_fields(fields, particle.x))
    report.add('field-readback', 'G, E and B read back from the connection',
               _relative_gap(readback, direct), 1e-9)
    report.add('metric-connection', 'first-order connection matches the Christoffel symbols',
               metric_connection_slice(fields, particle.x, fd) - slice_.gamma_col, 1e-6)
    report.info('hermitian-spatial-gap', 'hermitian assembly against the metric connection',
                slice_.hermitian - slice_.gamma_col)
    report.info('imaginary-transport', 'imaginary part of the transport equation at the start',
                force_decomposition(fields, particle, fd=fd).imaginary)

    rows = integrate_trajectory(gravity, neutral, section.dt, section.steps, fd)
    start = energy(gravity, neutral)
    drift = max(abs(energy(gravity, TestParticle(neutral.m, 0.0, row.x, row.v)) - start) for row in rows)
    report.add('newton-energy', 'orbital energy is conserved (relative)', _relative(drift, abs(start)), 1e-3)

    cyc_cfg, cyc_particle, radius, period = cyclotron_setup(
        fields, section.cyclotron.B, section.cyclotron.speed)
    rows = integrate_trajectory(cyc_cfg, cyc_particle, period / section.steps, section.steps, fd)
    radii = np.array([np.hypot(row.x[1], row.x[2]) for row in rows])
    speeds = np.array([np.linalg.norm(row.v) for row in rows])
    report.add('cyclotron-radius', 'orbit radius = m c |v| / (e B) (relative)',
               np.max(np.abs(radii - radius)) / radius, 0.01)
    report.add('cyclotron-closure', 'orbit closes after 2 pi m / (e B) (relative)',
               np.linalg.norm(rows[-1].x[1:] - rows[0].x[1:]) / radius, 0.01)
    report.add('cyclotron-speed', 'magnetic force does no work (relative speed drift)',
               np.max(np.abs(speeds - section.cyclotron.speed)) / section.cyclotron.speed, 1e-3)
    return report


SUITES: Dict[str, Callable[[ScenarioConfig], SuiteReport]] = {
    'algebra-identities': algebra_suite,
    'geometry-compatibility': geometry_suite,
    'analytic-paths': analytic_suite,
    'dirac': dirac_suite,
    'maxwell': maxwell_suite,
    'yangmills': yangmills_suite,
    'weakfield': weakfield_suite,
}


def suite_names() -> List[str]:
    return [*SUITES, 'all']


def run_suite(name: str, cfg: ScenarioConfig) -> SuiteReport:
    """Run one named suite, or every suite under 'all' with '<suite>.' prefixes.

    Raises:
        UnknownSuite: if the name is not registered
    """
    if name == 'all':
        report = SuiteReport('all')
        with timed(report):
            for suite_name, suite in SUITES.items():
                report.extend(suite(cfg), prefix=f'{suite_name}.')
        return report
    if name not in SUITES:
        raise UnknownSuite(f"Unknown suite '{name}' (available: {', '.join(suite_names())})")
    report = SuiteReport(name)
    with timed(report):
        report.extend(SUITES[name](cfg))
    return report
