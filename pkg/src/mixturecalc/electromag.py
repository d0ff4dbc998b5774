"""Electromagnetism and Yang-Mills fields expressed through the natural mixture.

The derivative of a four-potential h = phi e0 + A.e is

    f = sum_b e^b d_b h = alpha + E + iB,

with alpha = d_t phi + div A, E = grad phi + d_t A and B = curl A. The i on
the curl is produced by the mixture product itself; field components are
read off its real and imaginary parts. E here is minus the conventional
electric field, so f also reads alpha - E_phys + iB.
"""

import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np
import scipy.linalg

from .algebra import NATURAL, MetricPair, MirrorTensor, MixtureTensor, MultiVector, mv_mul
from .errors import AsymmetryError, MixtureWarning, RouteMismatch, SingularGauge
from .geometry import ConnectionField, FiniteDifferenceScheme, curvature
from .report import SuiteReport

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
LEVI_CIVITA = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    LEVI_CIVITA[_i, _j, _k] = 1.0
    LEVI_CIVITA[_j, _i, _k] = -1.0

MatrixField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FourPotential:
    """Scalar potential phi(z) and vector potential A(z)."""

    phi: Callable[[np.ndarray], float]
    A: Callable[[np.ndarray], np.ndarray]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return np.concatenate([[self.phi(z)], np.asarray(self.A(z), dtype=float).reshape(3)])


@dataclass(frozen=True)
class EMFieldSample:
    alpha: float
    E: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        values = np.concatenate([[self.alpha], self.E, self.B])
        if not np.all(np.isfinite(values)):
            raise ValueError(f"EM field sample is not finite: {values}")

    @property
    def E_physical(self) -> np.ndarray:
        """Conventional electric field -grad phi - d_t A."""
        return -np.asarray(self.E)

    def as_multivector(self) -> MultiVector:
        """alpha + E + iB, the mixture derivative of the potential."""
        return MultiVector.from_parts(self.alpha, np.asarray(self.E) + 1j * np.asarray(self.B))


class MaxwellResiduals(NamedTuple):
    gauss_E: float
    ampere: np.ndarray
    gauss_B: float
    faraday: np.ndarray

    def max(self) -> float:
        return float(max(abs(self.gauss_E), np.max(np.abs(self.ampere)),
                         abs(self.gauss_B), np.max(np.abs(self.faraday))))


class SimpleFieldCurvature(NamedTuple):
    P: np.ndarray
    R: np.ndarray
    F: np.ndarray
    residual: float
    trace_residual: float


class FaradayRelations(NamedTuple):
    EB: MultiVector
    F_round: np.ndarray
    G_dual: np.ndarray


@dataclass(frozen=True)
class MatrixPotentialSet:
    """Matrix potentials H_m(z), shape (4, k, k), and the coupling epsilon."""

    potentials: MatrixField
    epsilon: float = 1.0

    def __call__(self, z: np.ndarray) -> np.ndarray:
        values = np.asarray(self.potentials(np.asarray(z, dtype=float)), dtype=complex)
        if values.ndim != 3 or values.shape[0] != 4 or values.shape[1] != values.shape[2]:
            raise ValueError(f"Matrix potentials must have shape (4, k, k), got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Matrix potentials are not finite at {z}")
        return values


def _mixture_derivative(field: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                        fd: FiniteDifferenceScheme, adjoint: bool = False) -> np.ndarray:
    """sum_b e^b d_b field (or adjoint(e^b)) in the natural geometry."""
    jac = fd.gradient(field, z)
    if adjoint:
        jac = jac @ NATURAL.mirror.m
    return np.einsum('gba,ab->g', NATURAL.eta.lower, jac)


def em_derivative(h: FourPotential, z: np.ndarray, fd: FiniteDifferenceScheme) -> EMFieldSample:
    """alpha, E and B from the mixture derivative of the potential."""
    f = _mixture_derivative(h, z, fd)
    if abs(f[0].imag) > 1e-8 * max(1.0, float(np.max(np.abs(f)))):
        warnings.warn(f"Imaginary scalar part {f[0].imag:.3e} in a real potential's derivative",
                      MixtureWarning)
    return EMFieldSample(float(f[0].real), f[1:].real.copy(), f[1:].imag.copy())


def maxwell_residuals(h: FourPotential, z: np.ndarray, fd: FiniteDifferenceScheme) -> MaxwellResiduals:
    """Components of sum_b adjoint(e^b) d_b (alpha + E + iB).

    Scalar part: (d_t alpha - div E) - i div B. Vector part:
    (d_t E + curl B - grad alpha) + i(d_t B - curl E). The imaginary channels
    vanish identically; the real channels equal the wave operator applied to
    phi and A, so they vanish for potentials solving the wave equation.
    """
    def field(point):
        return _mixture_derivative(h, point, fd)

    r = _mixture_derivative(field, np.asarray(z, dtype=float), fd, adjoint=True)
    return MaxwellResiduals(
        gauss_E=float(r[0].real),
        ampere=r[1:].real.copy(),
        gauss_B=float(-r[0].imag),
        faraday=r[1:].imag.copy(),
    )


def simple_field_curvature(h: Callable[[np.ndarray], np.ndarray], z: np.ndarray,
                           fd: FiniteDifferenceScheme) -> SimpleFieldCurvature:
    """Curvature of Gamma^m_ab = 1^m_a h_b against 1 (x) F with F_nm = h_[m,n]."""
    z = np.asarray(z, dtype=float)
    eye = np.eye(4)

    def gamma(point):
        return np.einsum('ma,b->mab', eye, np.asarray(h(point), dtype=complex))

    tensors = curvature(ConnectionField(gamma), z, fd)
    dh = fd.gradient(h, z)  # [m][n] = d_n h_m
    F = 0.5 * (dh.T - dh)   # F[n][m] = 1/2 (d_n h_m - d_m h_n)
    expected = np.einsum('ab,nm->abnm', eye, F)
    trace = np.einsum('bab->a', gamma(z))
    residual = float(np.max(np.abs(tensors.R - expected)))
    trace_residual = float(np.max(np.abs(trace - np.asarray(h(z)))))
    return SimpleFieldCurvature(tensors.P, tensors.R, np.real_if_close(F), residual, trace_residual)


def yang_mills_field_tensor(P: MatrixPotentialSet, z: np.ndarray,
                            fd: FiniteDifferenceScheme) -> np.ndarray:
    """F_mn = H_[m,n] + eps H_[n H_m], shape [m][n][k][k].

    With G = eps H the matrix curvature satisfies R_nm = eps F_mn.
    """
    here = P(z)
    dH = fd.gradient(P, z)                       # [m][a][b][n] = d_n H_m
    dn_hm = np.einsum('mabn->mnab', dH)          # d_n H_m at [m][n]
    derivative = 0.5 * (dn_hm - np.einsum('mnab->nmab', dn_hm))
    commutator = 0.5 * (np.einsum('nas,msb->mnab', here, here)
                        - np.einsum('mas,nsb->mnab', here, here))
    return derivative + P.epsilon * commutator


def covariant_field_tensor(P: MatrixPotentialSet, z: np.ndarray,
                           fd: FiniteDifferenceScheme) -> np.ndarray:
    """1/2 (d_n H_m - d_m H_n) + i eps 1/2 [H_m, H_n], which transforms as S^-1 F S."""
    here = P(z)
    dH = fd.gradient(P, z)
    dn_hm = np.einsum('mabn->mnab', dH)
    derivative = 0.5 * (dn_hm - np.einsum('mnab->nmab', dn_hm))
    commutator = 0.5 * (np.einsum('mas,nsb->mnab', here, here)
                        - np.einsum('nas,msb->mnab', here, here))
    return derivative + 1j * P.epsilon * commutator


def gauge_transform(P: MatrixPotentialSet, S: MatrixField, fd: FiniteDifferenceScheme,
                    cond_limit: float = 1e8) -> MatrixPotentialSet:
    """H'_m = S^-1 H_m S + (i/eps) S^-1 d_m S.

    Raises:
        SingularGauge: if S fails the inversion tolerance where evaluated
    """
    def transformed(point):
        s = np.asarray(S(point), dtype=complex)
        if np.linalg.cond(s) > cond_limit:
            raise SingularGauge(f"Gauge matrix at {point} has condition number above {cond_limit:.0e}")
        s_inv = np.linalg.inv(s)
        ds = fd.gradient(S, point)                 # [a][b][m]
        rotated = np.einsum('ij,mjk,kl->mil', s_inv, P(point), s)
        shift = np.einsum('ij,jkm->mik', s_inv, ds)
        return rotated + (1j / P.epsilon) * shift

    return MatrixPotentialSet(transformed, P.epsilon)


def gauge_covariance_check(P: MatrixPotentialSet, S: MatrixField, z: np.ndarray,
                           fd: FiniteDifferenceScheme, tol: float = 1e-6) -> SuiteReport:
    """Compare the transformed field tensor with S^-1 F S.

    The covariant form is checked against `tol`; the same comparison for the
    plain curvature form is recorded as informational.
    """
    z = np.asarray(z, dtype=float)
    s = np.asarray(S(z), dtype=complex)
    if np.linalg.cond(s) > 1e8:
        raise SingularGauge(f"Gauge matrix at {z} is singular")
    s_inv = np.linalg.inv(s)
    primed = gauge_transform(P, S, fd)

    report = SuiteReport('gauge-covariance')
    for check_id, tensor in (('gauge-covariance', covariant_field_tensor),
                             ('curvature-form-covariance', yang_mills_field_tensor)):
        before = tensor(P, z, fd)
        after = tensor(primed, z, fd)
        expected = np.einsum('ij,mnjk,kl->mnil', s_inv, before, s)
        relation = "F'_mn = S^-1 F_mn S"
        if check_id == 'gauge-covariance':
            report.add(check_id, relation, after - expected, tol)
        else:
            report.info(check_id, relation + " (curvature form)", after - expected)
    return report


def su2_gauge(coefficients: Sequence[Sequence[float]]) -> MatrixField:
    """S(z) = expm(i theta(z).sigma / 2) with theta_a(z) = c_a0 + c_a . z (rows: a, columns: 1, z0..z3)."""
    coeffs = np.asarray(coefficients, dtype=float)
    if coeffs.shape != (3, 5):
        raise ValueError(f"su2_gauge needs a 3x5 coefficient table, got {coeffs.shape}")

    def evaluate(z):
        theta = coeffs[:, 0] + coeffs[:, 1:] @ np.asarray(z, dtype=float)
        generator = sum(t * s for t, s in zip(theta, PAULI))
        return scipy.linalg.expm(0.5j * generator)

    return evaluate


def faraday_tensor(E: Sequence[float], B: Sequence[float]) -> np.ndarray:
    """F_0i = E_i, F_i0 = -E_i, F_jk = -eps_jki B_i."""
    E = np.asarray(E, dtype=float)
    B = np.asarray(B, dtype=float)
    F = np.zeros((4, 4))
    F[0, 1:] = E
    F[1:, 0] = -E
    F[1:, 1:] = -np.einsum('jki,i->jk', LEVI_CIVITA, B)
    return F


def faraday_relations(F: np.ndarray, eta: Optional[MixtureTensor] = None,
                      g: Optional[MetricPair] = None, mirror: Optional[MirrorTensor] = None,
                      tol: float = 1e-12) -> FaradayRelations:
    """E + iB from F_da, then back to F and its dual.

    EB^g = 1/2 eta_b^{ag} g^bb F_ba, and X_ab = m_a eta_g^{ba} EB^g has
    real part F and imaginary part the dual tensor G.

    Raises:
        AsymmetryError: if F is not antisymmetric within tol
    """
    F = np.asarray(F, dtype=float)
    asym = float(np.max(np.abs(F + F.T)))
    if asym > tol * max(1.0, float(np.max(np.abs(F)))):
        raise AsymmetryError(f"Field tensor is not antisymmetric (|F + F^T| = {asym:.3e})")
    eta = eta or NATURAL.eta
    g_upper = np.diag([1.0, -1.0, -1.0, -1.0]) if g is None else np.asarray(g.upper)
    m = np.diag((mirror or NATURAL.mirror).m)
    eb = 0.5 * np.einsum('bag,bd,da->g', eta.upper, g_upper, F)
    X = np.einsum('a,gba,g->ab', m, eta.upper, eb)
    return FaradayRelations(MultiVector(eb), X.real.copy(), X.imag.copy())


def stress_energy(F: np.ndarray, g: MetricPair) -> np.ndarray:
    """T^ab = F^am F_m^b + 1/4 g^ab F_mn F^mn, positive energy density in (+---)."""
    g_up = np.asarray(g.upper)
    F = np.asarray(F, dtype=complex)
    F_up = g_up @ F @ g_up.T
    F_mixed = F @ g_up
    invariant = np.einsum('mn,mn->', F, F_up)
    return np.einsum('am,mb->ab', F_up, F_mixed) + 0.25 * g_up * invariant


def tensor_contraction(T: np.ndarray, eta: Optional[MixtureTensor] = None) -> MultiVector:
    """T^ab eta^g_ab e_g."""
    eta = eta or NATURAL.eta
    return MultiVector(np.einsum('ab,gab->g', np.asarray(T, dtype=complex), eta.lower))


def poynting(E: Sequence[float], B: Sequence[float], eta: Optional[MixtureTensor] = None,
             g: Optional[MetricPair] = None, tol: Optional[float] = 1e-10) -> MultiVector:
    """(E + iB)(E - iB) = |E|^2 + |B|^2 + 2 E x B.

    The stress-energy route T^ab eta^g_ab e_g is computed alongside and a
    disagreement beyond tol (relative to the largest component) raises
    RouteMismatch. tol=None skips the cross-check.
    """
    eta = eta or NATURAL.eta
    E = np.asarray(E, dtype=float)
    B = np.asarray(B, dtype=float)
    plus = MultiVector.from_parts(0.0, E + 1j * B)
    minus = MultiVector.from_parts(0.0, E - 1j * B)
    direct = mv_mul(plus, minus, eta)
    if tol is None:
        return direct
    g = g or MetricPair(np.diag([1.0, -1.0, -1.0, -1.0]), np.diag([1.0, -1.0, -1.0, -1.0]))
    via_tensor = tensor_contraction(stress_energy(faraday_tensor(E, B), g), eta)
    gap = float(np.max(np.abs(direct.c - via_tensor.c)))
    if gap > tol * max(1.0, float(np.max(np.abs(direct.c)))):
        raise RouteMismatch(f"Poynting routes disagree by {gap:.3e}")
    return direct


def perfect_fluid_contraction(rho: float, p: float, u: MultiVector,
                              eta: Optional[MixtureTensor] = None,
                              g: Optional[MetricPair] = None) -> MultiVector:
    """T^ab eta^g_ab e_g for T^ab = (rho + p) u^a u^b + p g^ab.

    The pressure term contributes p g^ab eta^g_ab: +2p e0 for g = diag(-1, 1, 1, 1)
    and -2p e0 for the natural (+---) metric.
    """
    eta = eta or NATURAL.eta
    g_up = np.diag([-1.0, 1.0, 1.0, 1.0]) if g is None else np.asarray(g.upper)
    T = (rho + p) * np.outer(u.c, u.c) + p * g_up
    return tensor_contraction(T, eta)
