"""Weak gravitational and electromagnetic perturbations of Minkowski space.

Signature (-+++), coordinates z = (ct, x, y, z). Gravity perturbs the metric
through mu_g psi and electromagnetism adds an imaginary part mu_e (phi, A).
A charged test particle carries the complex four-momentum
gamma((m + i e rho) c, m v); only the real part of its transport equation
moves it, the imaginary part is recorded.
"""

from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from .algebra import MetricPair
from .electromag import LEVI_CIVITA
from .errors import ConfigError, WeakFieldViolation
from .geometry import FiniteDifferenceScheme, christoffel_from_metric

ScalarField = Callable[[np.ndarray], float]
VectorField = Callable[[np.ndarray], np.ndarray]

DEFAULT_FD = FiniteDifferenceScheme(1e-4, 4)


def zero_scalar(z: np.ndarray) -> float:
    return 0.0


def zero_vector(z: np.ndarray) -> np.ndarray:
    return np.zeros(3)


@dataclass(frozen=True)
class WeakFieldConfig:
    """Potentials and coupling constants.

    Args:
        psi: Gravitational potential
        phi: Electromagnetic scalar potential
        A: Electromagnetic vector potential
        c: Speed of light
        mu_g: Gravitational coupling (2/c^2 if omitted)
        mu_e: Electromagnetic coupling
        rho: Mass/charge scale (1/(c^2 mu_e) if omitted)
        guard: Weak-field threshold on |mu_g psi| + |mu_e phi| + mu_e |A|
    """

    psi: ScalarField = zero_scalar
    phi: ScalarField = zero_scalar
    A: VectorField = zero_vector
    c: float = 1.0
    mu_g: Optional[float] = None
    mu_e: float = 1e-3
    rho: Optional[float] = None
    guard: float = 1e-3

    def __post_init__(self):
        if self.c <= 0:
            raise ConfigError(f"must be positive, got {self.c}", key='weakfield.c')
        if self.mu_e <= 0:
            raise ConfigError(f"must be positive, got {self.mu_e}", key='weakfield.mu_e')
        if self.mu_g is None:
            object.__setattr__(self, 'mu_g', 2.0 / self.c ** 2)
        if self.rho is None:
            object.__setattr__(self, 'rho', 1.0 / (self.c ** 2 * self.mu_e))
        target = 1.0 / self.c ** 2
        if abs(self.rho * self.mu_e - target) > 1e-9 * target:
            raise ConfigError(
                f"rho * mu_e = {self.rho * self.mu_e:.12g} must equal 1/c^2 = {target:.12g}",
                key='weakfield.rho',
            )

    def Phi(self, z: np.ndarray) -> complex:
        """Combined scalar perturbation mu_g psi + i mu_e phi."""
        return self.mu_g * self.psi(z) + 1j * self.mu_e * self.phi(z)

    def perturbation(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return (abs(self.mu_g * self.psi(z)) + abs(self.mu_e * self.phi(z))
                + self.mu_e * float(np.linalg.norm(self.A(z))))


@dataclass(frozen=True)
class TestParticle:
    """Mass m, charge e, position z = (ct, x) and velocity v in units of c."""

    m: float
    e: float
    x: np.ndarray
    v: np.ndarray

    __test__ = False

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"Particle mass must be positive, got {self.m}")
        x = np.array(self.x, dtype=float).reshape(4)
        v = np.array(self.v, dtype=float).reshape(3)
        speed = float(np.linalg.norm(v))
        if speed >= 1.0:
            raise ValueError(f"Particle speed |v| = {speed} must be below 1 (units of c)")
        object.__setattr__(self, 'x', x)
        object.__setattr__(self, 'v', v)


@dataclass(frozen=True)
class ConnectionSlice:
    """Gamma^w_g0 at a point with the real matrices it is assembled from.

    J carries the gravitational field, Fdual the electromagnetic one
    (Fdual[i][0] = E_i, Fdual[0][i] = -E_i, Fdual[i][j] = -1/2 eps_ijk B_k).
    gamma_col is the first-order metric connection; hermitian is
    1/2 mu_g J + 1/2 i mu_e Fdual, which matches it on the spatial rows.
    """

    J: np.ndarray
    Fdual: np.ndarray
    gamma_col: np.ndarray
    hermitian: np.ndarray
    G: np.ndarray
    E: np.ndarray
    B: np.ndarray


class ForceDecomposition(NamedTuple):
    grav: np.ndarray
    lorentz: np.ndarray
    residual: np.ndarray
    imaginary: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.grav + self.lorentz + self.residual


@dataclass
class TrajectoryRow:
    t: float
    x: np.ndarray
    v: np.ndarray
    grav: np.ndarray
    lorentz: np.ndarray
    residual: np.ndarray
    imaginary: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def as_list(self) -> List[float]:
        return [self.t, *self.x, *self.v, *self.grav, *self.lorentz, *self.residual, *self.imaginary]


TRAJECTORY_COLUMNS = (
    ['t', 'ct', 'x', 'y', 'z', 'vx', 'vy', 'vz']
    + [f'{name}_{axis}' for name in ('grav', 'lorentz', 'residual', 'imag') for axis in 'xyz']
)


def check_weak_field(cfg: WeakFieldConfig, z: np.ndarray) -> float:
    """Return the perturbation size at z.

    Raises:
        WeakFieldViolation: if it exceeds cfg.guard
    """
    size = cfg.perturbation(z)
    if size > cfg.guard:
        raise WeakFieldViolation(
            f"Perturbation {size:.3e} at {np.asarray(z).tolist()} exceeds weak-field guard {cfg.guard:.1e}"
        )
    return size


def perturbed_metric(cfg: WeakFieldConfig, z: np.ndarray) -> MetricPair:
    """Linear forms of g_ab and g^ab; g_00 g^00 = 1 only to first order."""
    z = np.asarray(z, dtype=float)
    check_weak_field(cfg, z)
    big_phi = cfg.Phi(z)
    shift = 0.5j * cfg.mu_e * np.asarray(cfg.A(z), dtype=float)

    lower = np.zeros((4, 4), dtype=complex)
    lower[0, 0] = -1.0 - big_phi
    lower[0, 1:] = shift
    lower[1:, 0] = shift
    lower[1:, 1:] = (1.0 + big_phi) * np.eye(3)

    upper = lower.copy()
    upper[0, 0] = -1.0 + big_phi
    return MetricPair(lower, upper)


def _metric_field(cfg: WeakFieldConfig) -> Callable[[np.ndarray], np.ndarray]:
    return lambda point: perturbed_metric(cfg, point).lower


def _field_derivatives(cfg: WeakFieldConfig, z: np.ndarray, fd: FiniteDifferenceScheme):
    d_psi = np.real(fd.gradient(lambda p: np.asarray(cfg.psi(p)), z))
    d_phi = np.real(fd.gradient(lambda p: np.asarray(cfg.phi(p)), z))
    d_A = np.real(fd.gradient(lambda p: np.asarray(cfg.A(p), dtype=float), z))  # [j][b]
    G = d_psi[1:]
    E = d_phi[1:] + d_A[:, 0]
    B = np.einsum('kij,ij->k', LEVI_CIVITA, d_A[:, 1:].T)
    d_big_phi = cfg.mu_g * d_psi + 1j * cfg.mu_e * d_phi
    return G, E, B, d_big_phi


def weakfield_connection(cfg: WeakFieldConfig, z: np.ndarray,
                         fd: FiniteDifferenceScheme = DEFAULT_FD) -> ConnectionSlice:
    """First-order Gamma^w_g0 with its gravitational and electromagnetic parts.

    Raises:
        WeakFieldViolation: if the guard fails at z
    """
    z = np.asarray(z, dtype=float)
    check_weak_field(cfg, z)
    G, E, B, d_big_phi = _field_derivatives(cfg, z, fd)

    col = np.zeros((4, 4), dtype=complex)
    col[0, 0] = 0.5 * d_big_phi[0]
    col[0, 1:] = 0.5 * d_big_phi[1:]
    col[1:, 0] = 0.5 * cfg.mu_g * G + 0.5j * cfg.mu_e * E
    col[1:, 1:] = (0.5 * d_big_phi[0] * np.eye(3)
                   - 0.25j * cfg.mu_e * np.einsum('ijk,k->ij', LEVI_CIVITA, B))

    J = np.zeros((4, 4))
    J[0, 1:] = G
    J[1:, 0] = G
    Fdual = np.zeros((4, 4))
    Fdual[1:, 0] = E
    Fdual[0, 1:] = -E
    Fdual[1:, 1:] = -0.5 * np.einsum('ijk,k->ij', LEVI_CIVITA, B)
    hermitian = 0.5 * cfg.mu_g * J + 0.5j * cfg.mu_e * Fdual
    return ConnectionSlice(J, Fdual, col, hermitian, G, E, B)


def metric_connection_slice(cfg: WeakFieldConfig, z: np.ndarray,
                            fd: FiniteDifferenceScheme = DEFAULT_FD) -> np.ndarray:
    """Gamma^w_g0 from the generic Christoffel formula on the perturbed metric."""
    return christoffel_from_metric(_metric_field(cfg), z, fd)[:, :, 0]


def field_sample(slice_: ConnectionSlice, cfg: WeakFieldConfig):
    """Read G, E and B back from the connection slice."""
    col = slice_.gamma_col
    G = 2.0 * col[1:, 0].real / cfg.mu_g
    E = 2.0 * col[1:, 0].imag / cfg.mu_e
    B = -2.0 * np.einsum('ijk,ij->k', LEVI_CIVITA, col[1:, 1:].imag) / cfg.mu_e
    return G, E, B


def force_decomposition(cfg: WeakFieldConfig, p: TestParticle, z: Optional[np.ndarray] = None,
                        fd: FiniteDifferenceScheme = DEFAULT_FD) -> ForceDecomposition:
    """Split dV/dt (V = c v) into gravity, Lorentz force and the remainder.

    grav = -(c^2 mu_g / 2) G and lorentz = (e c^2 rho mu_e / m)(E + V x B);
    the remainder holds the (e rho / m)^2 correction to gravity and the
    velocity coupling to Re Gamma^i_(j0). The imaginary part of the
    transport equation is returned alongside, it does not move the particle.
    """
    z = p.x if z is None else np.asarray(z, dtype=float)
    slice_ = weakfield_connection(cfg, z, fd)
    G, E, B = field_sample(slice_, cfg)
    c = cfg.c
    V = c * p.v
    ratio = p.e * cfg.rho / p.m

    grav = -0.5 * c ** 2 * cfg.mu_g * G
    lorentz = (p.e * c ** 2 * cfg.rho * cfg.mu_e / p.m) * (E + np.cross(V, B))

    col = slice_.gamma_col
    spatial = col[1:, 1:]   # Gamma^i_(j0) for a symmetric connection
    residual = 0.5 * c ** 2 * cfg.mu_g * ratio ** 2 * G - 2.0 * c * spatial.real @ V

    transport = (1 + 1j * ratio) * (c ** 2 * (1 + 1j * ratio) * col[1:, 0] + 2.0 * c * spatial @ V)
    return ForceDecomposition(grav, lorentz, residual, -transport.imag)


def _acceleration(cfg: WeakFieldConfig, p: TestParticle, fd: FiniteDifferenceScheme) -> np.ndarray:
    return force_decomposition(cfg, p, fd=fd).total


def geodesic_step(cfg: WeakFieldConfig, p: TestParticle, dt: float,
                  fd: FiniteDifferenceScheme = DEFAULT_FD) -> TestParticle:
    """Advance position and velocity by dt with the classical four-stage Runge-Kutta scheme.

    Raises:
        WeakFieldViolation: if any stage leaves the weak-field regime
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    c = cfg.c

    def derivs(x, V):
        probe = TestParticle(p.m, p.e, x, V / c)
        return np.concatenate([[c], V]), _acceleration(cfg, probe, fd)

    x0, V0 = p.x, c * p.v
    k1x, k1v = derivs(x0, V0)
    k2x, k2v = derivs(x0 + 0.5 * dt * k1x, V0 + 0.5 * dt * k1v)
    k3x, k3v = derivs(x0 + 0.5 * dt * k2x, V0 + 0.5 * dt * k2v)
    k4x, k4v = derivs(x0 + dt * k3x, V0 + dt * k3v)
    x1 = x0 + dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x)
    V1 = V0 + dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
    return TestParticle(p.m, p.e, x1, V1 / c)


def integrate_trajectory(cfg: WeakFieldConfig, particle: TestParticle, dt: float, steps: int,
                         fd: FiniteDifferenceScheme = DEFAULT_FD) -> List[TrajectoryRow]:
    """Rows for the initial state and each of `steps` RK4 steps."""
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    rows = []
    p = particle
    for step in range(steps + 1):
        forces = force_decomposition(cfg, p, fd=fd)
        rows.append(TrajectoryRow(step * dt, p.x.copy(), p.v.copy(), forces.grav, forces.lorentz,
                                  forces.residual, forces.imaginary))
        if step < steps:
            p = geodesic_step(cfg, p, dt, fd)
    return rows


def energy(cfg: WeakFieldConfig, particle: TestParticle) -> float:
    """Newtonian-limit energy per unit mass, 1/2 V^2 + (mu_g c^2 / 2) psi."""
    V = cfg.c * particle.v
    return float(0.5 * V @ V + 0.5 * cfg.mu_g * cfg.c ** 2 * cfg.psi(particle.x))


def cyclotron_radius(particle: TestParticle, cfg: WeakFieldConfig, B: float) -> float:
    """m |V| / (e B) for the printed Lorentz coupling with rho mu_e = 1/c^2."""
    return particle.m * cfg.c * float(np.linalg.norm(particle.v)) / (abs(particle.e) * B)
