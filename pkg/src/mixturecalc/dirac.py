"""Dirac-type mixture sets and their plane-wave symbols.

Plane waves are f = a exp(-i(w t - k.x)) in natural units (hbar = c = 1), so
d_0 acts as -i w and d_j as +i k_j. The adjoint index on derivatives flips
the spatial signs, which makes the Dirac operator's symbol

    S_adj = -i w eta0 - i k.eta + i M H

and the forward (un-adjointed) symbol S = -i w eta0 + i k.eta - i M H.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from .algebra import _readonly
from .geometry import FiniteDifferenceScheme
from .report import SuiteReport

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

SpinorField = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class DiracSet:
    """Matrices eta^{g b}_a for b = 0..3 plus the mass tensors H and Hhat.

    Args:
        eta0, eta1, eta2, eta3: 4x4 complex matrices
        H: Mass tensor
        Hhat: Its partner in the mixed relations (-H for the Pauli set)
        N: Mass scalar (M/i in natural units)
    """

    eta0: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    eta3: np.ndarray
    H: np.ndarray
    Hhat: np.ndarray
    N: complex = 0j

    def __post_init__(self):
        for name in ('eta0', 'eta1', 'eta2', 'eta3', 'H', 'Hhat'):
            arr = _readonly(getattr(self, name), shape=(4, 4))
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"DiracSet.{name} must be finite")
            object.__setattr__(self, name, arr)
        object.__setattr__(self, 'N', complex(self.N))

    def matrices(self) -> Tuple[np.ndarray, ...]:
        return (self.eta0, self.eta1, self.eta2, self.eta3, self.H, self.Hhat)

    @property
    def spatial(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.eta1, self.eta2, self.eta3)

    @property
    def mass(self) -> float:
        """M recovered from N = M/i."""
        return float((1j * self.N).real)

    def replace(self, **changes) -> 'DiracSet':
        fields = dict(zip(('eta0', 'eta1', 'eta2', 'eta3', 'H', 'Hhat'), self.matrices()))
        fields['N'] = self.N
        fields.update(changes)
        return DiracSet(**fields)


@dataclass(frozen=True, eq=False)
class PlaneWave:
    """Mode a exp(-i(w t - k.x)).

    A zero amplitude is accepted so that linearity can be checked on the
    trivial solution.
    """

    amplitude: np.ndarray
    omega: float
    k: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'amplitude', _readonly(self.amplitude, shape=(4,)))
        object.__setattr__(self, 'k', _readonly(self.k, dtype=float, shape=(3,)))
        object.__setattr__(self, 'omega', float(self.omega))

    @classmethod
    def on_shell(cls, amplitude: Sequence[complex], k: Sequence[float], M: float,
                 branch: int = 1) -> 'PlaneWave':
        k = np.asarray(k, dtype=float)
        return cls(amplitude, branch * np.sqrt(k @ k + M * M), k)

    def with_amplitude(self, amplitude: Sequence[complex]) -> 'PlaneWave':
        return PlaneWave(amplitude, self.omega, self.k)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        phase = -1j * (self.omega * z[0] - self.k @ z[1:])
        return self.amplitude * np.exp(phase)


def dirac_set_from_pauli(mass: float = 1.0) -> DiracSet:
    """Tensor products of Pauli matrices, left factor indexing the 2x2 blocks."""
    s0, s1, s2, s3 = SIGMA
    H = np.kron(s1, s3)
    return DiracSet(
        eta0=np.eye(4, dtype=complex),
        eta1=np.kron(s1, s2),
        eta2=np.kron(s2, s0),
        eta3=np.kron(s1, s1),
        H=H,
        Hhat=-H,
        N=mass / 1j,
    )


def verify_dirac_conditions(d: DiracSet, tol: float = 1e-12) -> SuiteReport:
    """Check the fifteen pair relations plus the mixed H/Hhat relations.

    Returns:
        SuiteReport 'dirac-conditions' with one check per relation
    """
    report = SuiteReport('dirac-conditions')
    identity = np.eye(4)
    named = {'eta0': d.eta0, 'eta1': d.eta1, 'eta2': d.eta2, 'eta3': d.eta3, 'H': d.H}

    for name, mat in named.items():
        report.add(f'square-{name}', f'{name} {name} = 1', mat @ mat - identity, tol)

    for name in ('eta1', 'eta2', 'eta3', 'H'):
        mat = named[name]
        report.add(f'commute-eta0-{name}', f'[eta0, {name}] = 0', d.eta0 @ mat - mat @ d.eta0, tol)

    for left, right in combinations(('eta1', 'eta2', 'eta3', 'H'), 2):
        a, b = named[left], named[right]
        report.add(f'anticommute-{left}-{right}', f'{{{left}, {right}}} = 0', a @ b + b @ a, tol)

    report.add('hat-eta0', 'Hhat eta0 + eta0 H = 0', d.Hhat @ d.eta0 + d.eta0 @ d.H, tol)
    for i, mat in enumerate(d.spatial, start=1):
        report.add(f'hat-eta{i}', f'Hhat eta{i} - eta{i} H = 0', d.Hhat @ mat - mat @ d.H, tol)
    report.add('H-Hhat', 'H Hhat = -1', d.H @ d.Hhat + identity, tol)
    return report


def dirac_symbol(d: DiracSet, omega: float, k: Sequence[float], M: float) -> np.ndarray:
    """Forward symbol -i w eta0 + i k.eta - i M H."""
    k = np.asarray(k, dtype=float)
    spatial = np.einsum('j,jab->ab', k, np.stack(d.spatial))
    return -1j * omega * d.eta0 + 1j * spatial - 1j * M * d.H


def adjoint_dirac_symbol(d: DiracSet, omega: float, k: Sequence[float], M: float) -> np.ndarray:
    """Symbol of eta^{b-dagger} d_{b-dagger} - (M/i) H on the plane wave."""
    k = np.asarray(k, dtype=float)
    spatial = np.einsum('j,jab->ab', k, np.stack(d.spatial))
    return -1j * omega * d.eta0 - 1j * spatial + 1j * M * d.H


def dirac_residual(d: DiracSet, w: PlaneWave, M: Optional[float] = None) -> np.ndarray:
    """Dirac operator applied to the plane wave, divided by its phase factor."""
    M = d.mass if M is None else M
    return adjoint_dirac_symbol(d, w.omega, w.k, M) @ w.amplitude


def klein_gordon_residual(w: PlaneWave, M: float) -> complex:
    """Symbol of d_0^2 - d_i^2 + M^2: -w^2 + k^2 + M^2."""
    return complex(-w.omega ** 2 + w.k @ w.k + M * M)


def factorization_check(d: DiracSet, w: PlaneWave, M: Optional[float] = None,
                        tol: float = 1e-10) -> SuiteReport:
    """Adjoint symbol times forward symbol against the Klein-Gordon symbol times identity."""
    M = d.mass if M is None else M
    s_adj = adjoint_dirac_symbol(d, w.omega, w.k, M)
    s_fwd = dirac_symbol(d, w.omega, w.k, M)
    kg = klein_gordon_residual(w, M)
    report = SuiteReport('dirac-factorization')
    report.add('symbol-product', 'S_adj S = (-w^2 + k^2 + M^2) 1', s_adj @ s_fwd - kg * np.eye(4), tol)
    report.add('determinant', 'det S_adj = (w^2 - k^2 - M^2)^2', np.linalg.det(s_adj) - kg ** 2,
               tol * max(1.0, abs(kg) ** 2))
    report.info('klein-gordon', '-w^2 + k^2 + M^2', kg)
    return report


def kernel_amplitude(d: DiracSet, omega: float, k: Sequence[float], M: float,
                     rcond: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (columns) of the adjoint symbol's kernel.

    Raises:
        ValueError: if the mode is off-shell and the kernel is empty
    """
    basis = null_space(adjoint_dirac_symbol(d, omega, k, M), rcond=rcond)
    if basis.shape[1] == 0:
        raise ValueError(f"No Dirac kernel at w={omega}, k={list(k)}, M={M}; mode is off-shell")
    return basis


def em_coupled_residual(d: DiracSet, w: PlaneWave, M: float, e: float, phi: float,
                        A: Sequence[float]) -> np.ndarray:
    """Residual with the minimally shifted mode w - e phi, k - e A for constant potentials."""
    A = np.asarray(A, dtype=float)
    return adjoint_dirac_symbol(d, w.omega - e * phi, w.k - e * A, M) @ w.amplitude


def dirac_operator(d: DiracSet, f: SpinorField, M: float, z: np.ndarray,
                   fd: FiniteDifferenceScheme) -> np.ndarray:
    """eta0 d_0 f - eta^j d_j f + i M H f by finite differences."""
    df = fd.gradient(f, z)
    out = d.eta0 @ df[:, 0]
    for j, mat in enumerate(d.spatial, start=1):
        out = out - mat @ df[:, j]
    return out + 1j * M * d.H @ np.asarray(f(z), dtype=complex)


def phase_shift_residual(f_tilde: SpinorField, phase: Callable[[np.ndarray], float],
                         z: np.ndarray, fd: FiniteDifferenceScheme) -> np.ndarray:
    """d f~ - exp(i phi)(d + i d phi) f with f = f~ exp(-i phi), shape [component][b]."""
    z = np.asarray(z, dtype=float)

    def shifted(point):
        return np.asarray(f_tilde(point), dtype=complex) * np.exp(-1j * phase(point))

    d_tilde = fd.gradient(f_tilde, z)
    d_shifted = fd.gradient(shifted, z)
    d_phase = fd.gradient(lambda point: np.asarray(phase(point)), z)
    rhs = np.exp(1j * phase(z)) * (d_shifted + 1j * np.outer(shifted(z), d_phase))
    return d_tilde - rhs
