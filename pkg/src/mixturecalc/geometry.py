"""Covariant calculus over a four-dimensional coordinate domain.

Fields are evaluation callbacks (point -> array) rather than stored grids;
finite-difference stencils sample them on demand. Connection arrays are
stored Gamma[g][a][b] for Gamma^g_ab, with b the derivative direction, so
that e_{a,b} = Gamma^g_ab e_g.
"""

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import MetricPair, MirrorTensor, MixtureTensor
from .errors import SingularFrame, SingularMetric
from .report import SuiteReport

Field = Callable[[np.ndarray], np.ndarray]

COND_LIMIT = 1e8

_CENTRAL = {
    2: ((-1, -0.5), (1, 0.5)),
    4: ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12)),
}
_FORWARD = {
    2: ((0, -1.5), (1, 2.0), (2, -0.5)),
    4: ((0, -25 / 12), (1, 4.0), (2, -3.0), (3, 4 / 3), (4, -0.25)),
}


@dataclass(frozen=True)
class Box:
    """Axis-aligned coordinate box."""

    lower: Tuple[float, ...]
    upper: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("Box bounds must have the same dimension")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError(f"Empty box {self.lower} .. {self.upper}")

    def contains(self, z: np.ndarray) -> bool:
        return all(lo <= x <= hi for lo, x, hi in zip(self.lower, z, self.upper))


@dataclass(frozen=True)
class FiniteDifferenceScheme:
    """Central differences of order 2 or 4 with one-sided fallback at box edges.

    Args:
        h: Step, scalar or one value per axis
        order: 2 or 4
    """

    h: Union[float, Tuple[float, ...]] = 1e-3
    order: int = 2

    def __post_init__(self):
        if self.order not in _CENTRAL:
            raise ValueError(f"FD order must be 2 or 4, got {self.order}")
        steps = np.atleast_1d(np.asarray(self.h, dtype=float))
        if np.any(steps <= 0):
            raise ValueError(f"FD step must be positive, got {self.h}")

    @property
    def radius(self) -> int:
        return self.order // 2

    def step(self, axis: int) -> float:
        if np.isscalar(self.h):
            return float(self.h)
        return float(self.h[axis])

    def halved(self) -> 'FiniteDifferenceScheme':
        if np.isscalar(self.h):
            return FiniteDifferenceScheme(self.h / 2, self.order)
        return FiniteDifferenceScheme(tuple(x / 2 for x in self.h), self.order)

    def partial(self, f: Field, z: np.ndarray, axis: int, domain: Optional[Box] = None) -> np.ndarray:
        """Derivative of an array-valued field along one coordinate axis."""
        z = np.asarray(z, dtype=float)
        h = self.step(axis)
        stencil = _CENTRAL[self.order]
        sign = 1.0
        if domain is not None:
            reach = self.radius * h
            if z[axis] + reach > domain.upper[axis]:
                stencil, sign = _FORWARD[self.order], -1.0
            elif z[axis] - reach < domain.lower[axis]:
                stencil = _FORWARD[self.order]
        total = None
        for offset, weight in stencil:
            point = z.copy()
            point[axis] += sign * offset * h
            value = weight * np.asarray(f(point), dtype=complex)
            total = value if total is None else total + value
        return sign * total / h

    def gradient(self, f: Field, z: np.ndarray, domain: Optional[Box] = None) -> np.ndarray:
        """All partials, derivative index last."""
        z = np.asarray(z, dtype=float)
        parts = [self.partial(f, z, axis, domain) for axis in range(z.size)]
        return np.stack(parts, axis=-1)


@dataclass(frozen=True)
class FrameField:
    """Frame matrix F[a][a'] = Lambda^{a'}_a, the constant-basis components of e_a.

    Args:
        eval: point -> invertible n x n matrix
        domain: Box on which the frame may be queried
        derivative: Optional exact derivative (point, axis) -> matrix
        cond_limit: Condition-number ceiling for inversion
    """

    eval: Field
    domain: Optional[Box] = None
    derivative: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    cond_limit: float = COND_LIMIT

    def __call__(self, z: np.ndarray) -> np.ndarray:
        frame = np.asarray(self.eval(np.asarray(z, dtype=float)), dtype=complex)
        if np.linalg.cond(frame) > self.cond_limit:
            raise SingularFrame(f"Frame at {z} has condition number above {self.cond_limit:.0e}")
        return frame

    def inverse(self, z: np.ndarray) -> np.ndarray:
        return np.linalg.inv(self(z))


@dataclass(frozen=True)
class ConnectionField:
    """Gamma^g_ab(z) as a callback, stored [g][a][b]."""

    eval: Field

    def __call__(self, z: np.ndarray) -> np.ndarray:
        gamma = np.asarray(self.eval(np.asarray(z, dtype=float)), dtype=complex)
        if not np.all(np.isfinite(gamma)):
            raise ValueError(f"Connection is not finite at {z}")
        return gamma


@dataclass(frozen=True)
class CurvatureTensors:
    """P^a_bnm, R^a_bnm = P^a_b[nm], Ricci R_gm = R^a_gam, and the scalar (if a metric was given)."""

    P: np.ndarray
    R: np.ndarray
    ricci: np.ndarray
    scalar: Optional[complex]


@dataclass(frozen=True)
class CommutationCoefficients:
    """C^d_ba = Gamma^d_ab - Gamma^d_ba with the symmetric/antisymmetric split of Gamma."""

    C: np.ndarray
    symmetric: np.ndarray
    antisymmetric: np.ndarray
    lowered: Optional[np.ndarray] = None


class Variance(enum.Enum):
    VECTOR = "vector"
    DUAL = "dual"


def polynomial_frame(amplitude: float = 0.1, seed: int = 0, n: int = 4,
                     domain: Optional[Box] = None) -> FrameField:
    """Seeded cubic frame F = 1 + a sum_b (z_b K_b + z_b^3 Q_b) with an exact derivative."""
    rng = np.random.default_rng(seed)
    linear = rng.normal(size=(n, n, n))
    cubic = rng.normal(size=(n, n, n))

    def evaluate(z):
        z = np.asarray(z, dtype=float)
        return np.eye(n) + amplitude * (np.einsum('b,bij->ij', z, linear)
                                        + np.einsum('b,bij->ij', z ** 3, cubic))

    def derivative(z, axis):
        z = np.asarray(z, dtype=float)
        return amplitude * (linear[axis] + 3.0 * z[axis] ** 2 * cubic[axis])

    return FrameField(evaluate, domain, derivative)


def exponential_frame(h: Sequence[float], n: int = 4, domain: Optional[Box] = None) -> FrameField:
    """F = exp(h . z) 1, for which Gamma^m_ab = 1^m_a h_b."""
    h = np.asarray(h, dtype=float)

    def evaluate(z):
        return np.exp(h @ np.asarray(z, dtype=float)) * np.eye(n)

    def derivative(z, axis):
        return h[axis] * evaluate(z)

    return FrameField(evaluate, domain, derivative)


def connection_from_frame(frame: FrameField, z: np.ndarray, fd: FiniteDifferenceScheme) -> np.ndarray:
    """Gamma^g_ab solving e_{a,b} = Gamma^g_ab e_g, i.e. (d_b F) F^-1.

    Raises:
        SingularFrame: if F(z) fails the inversion tolerance
    """
    inv = frame.inverse(z)
    d_frame = fd.gradient(frame, z, frame.domain)
    return np.einsum('apb,pg->gab', d_frame, inv)


def exact_connection_from_frame(frame: FrameField, z: np.ndarray) -> np.ndarray:
    """Same as connection_from_frame using the frame's exact derivative."""
    if frame.derivative is None:
        raise ValueError("Frame has no exact derivative")
    inv = frame.inverse(z)
    d_frame = np.stack([frame.derivative(z, axis) for axis in range(len(z))], axis=-1)
    return np.einsum('apb,pg->gab', d_frame, inv)


def frame_connection_field(frame: FrameField, fd: FiniteDifferenceScheme) -> ConnectionField:
    return ConnectionField(lambda z: connection_from_frame(frame, z, fd))


def basis_divergence_matrices(gamma: np.ndarray, eta: MixtureTensor) -> Tuple[np.ndarray, np.ndarray]:
    """W_a^d = Gamma^g_ab eta_g^db and M_d^a = -Gamma^a_gb eta_d^bg."""
    upper = eta.upper
    w = np.einsum('gab,gdb->ad', gamma, upper)
    m = -np.einsum('agb,dbg->da', gamma, upper)
    return w, m


def frame_metric(frame: FrameField, g0: np.ndarray) -> Field:
    """g_ab = F_a^a' F_b^b' g0_a'b' for the frame-induced metric."""
    g0 = np.asarray(g0, dtype=complex)

    def evaluate(z):
        f = frame(z)
        return f @ g0 @ f.T

    return evaluate


def frame_mixture(frame: FrameField, eta0: MixtureTensor) -> Field:
    """eta^g_ab carried by the frame: e_a e_b expressed back in the e_g basis."""
    lower0 = eta0.lower

    def evaluate(z):
        f = frame(z)
        return np.einsum('ai,bj,kij,kg->gab', f, f, lower0, np.linalg.inv(f))

    return evaluate


def christoffel_from_metric(g: Field, z: np.ndarray, fd: FiniteDifferenceScheme,
                            cond_limit: float = COND_LIMIT) -> np.ndarray:
    """Gamma^s_(am) = 1/2 g^bs (g_ab,m + g_bm,a - g_ma,b), symmetric in (a, m).

    Raises:
        SingularMetric: if g(z) fails the inversion tolerance
    """
    g_here = np.asarray(g(np.asarray(z, dtype=float)), dtype=complex)
    if np.linalg.cond(g_here) > cond_limit:
        raise SingularMetric(f"Metric at {z} has condition number above {cond_limit:.0e}")
    g_inv = np.linalg.inv(g_here)
    dg = fd.gradient(g, z)
    combo = dg + np.einsum('bma->abm', dg) - np.einsum('mab->abm', dg)
    gamma = 0.5 * np.einsum('bs,abm->sam', g_inv, combo)
    return 0.5 * (gamma + np.einsum('sam->sma', gamma))


def curvature(gamma: Field, z: np.ndarray, fd: FiniteDifferenceScheme,
              g_upper: Optional[np.ndarray] = None) -> CurvatureTensors:
    """P^a_bnm = Gamma^a_sn Gamma^s_bm + Gamma^a_bm,n and its antisymmetrization R."""
    here = np.asarray(gamma(z), dtype=complex)
    d_gamma = fd.gradient(gamma, z)
    p = np.einsum('asn,sbm->abnm', here, here) + np.einsum('abmn->abnm', d_gamma)
    r = 0.5 * (p - np.einsum('abnm->abmn', p))
    ricci = np.einsum('agam->gm', r)
    scalar = None if g_upper is None else complex(np.einsum('gm,gm->', g_upper, ricci))
    return CurvatureTensors(p, r, ricci, scalar)


def matrix_curvature(potentials: Field, z: np.ndarray, fd: FiniteDifferenceScheme) -> np.ndarray:
    """R_nm = 1/2 (d_n G_m - d_m G_n + [G_n, G_m]) for matrix connections G_m(z), shape [n][m][k][k]."""
    g_here = np.asarray(potentials(z), dtype=complex)
    d_g = fd.gradient(potentials, z)
    dn_gm = np.einsum('mabn->nmab', d_g)
    commutator = (np.einsum('nas,msb->nmab', g_here, g_here)
                  - np.einsum('mas,nsb->nmab', g_here, g_here))
    return 0.5 * (dn_gm - np.einsum('nmab->mnab', dn_gm) + commutator)


def ricci_ansatz_check(K: np.ndarray, eta: MixtureTensor, tol: float = 1e-12) -> SuiteReport:
    """Build R^a_gnm = K_gb eta_l^ab eta^l_mn and check its trace is n K."""
    K = np.asarray(K, dtype=complex)
    lower, upper = eta.lower, eta.upper
    riemann = np.einsum('gb,lab,lmn->agnm', K, upper, lower)
    trace = np.einsum('agam->gm', riemann)
    report = SuiteReport('ricci-ansatz')
    report.add('ricci-trace', 'R_gm = n K_gm', trace - eta.n * K, tol)
    sym_lower = 0.5 * (lower + np.einsum('lmn->lnm', lower))
    report.info('ricci-symmetric-part', 'K_gb eta_l^ab eta^l_(mn)',
                np.einsum('gb,lab,lmn->agmn', K, upper, sym_lower))
    return report


def covariant_derivative(f: Field, gamma: Field, z: np.ndarray, variance: Variance,
                         fd: FiniteDifferenceScheme) -> np.ndarray:
    """f^a_;b = f^a_,b + f^g Gamma^a_gb, or f_a;b = f_a,b - f_g Gamma^g_ab. Result [a][b]."""
    here = np.asarray(f(z), dtype=complex)
    conn = np.asarray(gamma(z), dtype=complex)
    df = fd.gradient(f, z)
    if variance is Variance.VECTOR:
        return df + np.einsum('g,agb->ab', here, conn)
    if variance is Variance.DUAL:
        return df - np.einsum('g,gab->ab', here, conn)
    raise ValueError(f"Unknown variance '{variance}'")


def compatibility_residuals(g: Field, eta: Field, gamma: Field, z: np.ndarray,
                            fd: FiniteDifferenceScheme, mirror: Optional[MirrorTensor] = None,
                            tol: float = 1e-6) -> SuiteReport:
    """Covariant derivatives of the metric and the mixture, plus the mirrored split.

    Args:
        g: Metric field g_ab(z)
        eta: Mixture field eta^g_ab(z)
        gamma: Connection field
        z: Evaluation point
        fd: Finite-difference scheme
        mirror: Mirror tensor for the split residuals (natural mirror if omitted)
        tol: Pass tolerance for the metric and mixture residuals

    Returns:
        SuiteReport with 'metric', 'mixture' and informational split checks
    """
    z = np.asarray(z, dtype=float)
    conn = np.asarray(gamma(z), dtype=complex)
    g_here = np.asarray(g(z), dtype=complex)
    eta_here = np.asarray(eta(z), dtype=complex)
    dg = fd.gradient(g, z)
    d_eta = fd.gradient(eta, z)

    metric_res = (dg - np.einsum('lam,lb->abm', conn, g_here)
                  - np.einsum('lbm,al->abm', conn, g_here))
    mixture_res = (d_eta + np.einsum('lab,glm->gabm', eta_here, conn)
                   - np.einsum('glb,lam->gabm', eta_here, conn)
                   - np.einsum('gal,lbm->gabm', eta_here, conn))

    report = SuiteReport('compatibility')
    report.add('metric', 'g_ab;m = 0', metric_res, tol)
    report.add('mixture', 'eta^g_ab;m = 0', mixture_res, tol)

    mm = (np.diag([1.0, -1.0, -1.0, -1.0]) if mirror is None else mirror.m).astype(complex)

    def mirrored(point):
        prod = np.einsum('gan,bn->gab', np.asarray(eta(point), dtype=complex), mm)
        return 0.5 * (prod + np.einsum('gab->gba', prod))

    d_mirrored = fd.gradient(mirrored, z)
    scalar_split = d_mirrored[0] + np.einsum('ab,m->abm', g_here, conn[0, 0]) - dg
    vector_split = d_mirrored[1:] + np.einsum('ab,im->iabm', g_here, conn[1:, 0])
    report.info('mirror-split-scalar', 'g_ab,m = eta^0_(a mirror(b)),m + g_ab Gamma^0_0m', scalar_split)
    report.info('mirror-split-vector', '0 = eta^i_(a mirror(b)),m + g_ab Gamma^i_0m', vector_split)
    return report


def commutation_coefficients(gamma: np.ndarray, g: Optional[MetricPair] = None) -> CommutationCoefficients:
    """C^d_ba = 2 Gamma^d_[ab] and the split of Gamma into symmetric and antisymmetric parts."""
    gamma = np.asarray(gamma, dtype=complex)
    swapped = np.einsum('dab->dba', gamma)
    c = swapped - gamma
    symmetric = 0.5 * (gamma + swapped)
    antisymmetric = 0.5 * (gamma - swapped)
    lowered = None if g is None else np.einsum('ed,dba->eba', g.lower, c)
    return CommutationCoefficients(c, symmetric, antisymmetric, lowered)


def lie_bracket_components(frame: FrameField, z: np.ndarray, fd: FiniteDifferenceScheme) -> np.ndarray:
    """Components of d_b e_a - d_a e_b in the e_d basis, stored [d][b][a]."""
    inv = frame.inverse(z)
    d_frame = fd.gradient(frame, z, frame.domain)
    return (np.einsum('apb,pd->dba', d_frame, inv)
            - np.einsum('bpa,pd->dba', d_frame, inv))


def second_order_bracket(f: Field, gamma: Field, R: CurvatureTensors, z: np.ndarray,
                         fd: FiniteDifferenceScheme) -> np.ndarray:
    """f^a_;[mn] + f^a_;g Gamma^g_[mn] - f^g R^a_gnm, stored [a][m][n]."""
    z = np.asarray(z, dtype=float)

    def first(point):
        return covariant_derivative(f, gamma, point, Variance.VECTOR, fd)

    conn = np.asarray(gamma(z), dtype=complex)
    here = np.asarray(f(z), dtype=complex)
    t = first(z)
    dt = fd.gradient(first, z)
    second = dt + np.einsum('gm,agn->amn', t, conn) - np.einsum('ag,gmn->amn', t, conn)
    anti = 0.5 * (second - np.einsum('amn->anm', second))
    conn_anti = 0.5 * (conn - np.einsum('gmn->gnm', conn))
    return anti + np.einsum('ag,gmn->amn', t, conn_anti) - np.einsum('g,agnm->amn', here, R.R)


def second_order_residual(f: Field, gamma: Field, R: CurvatureTensors, eta: MixtureTensor,
                          z: np.ndarray, fd: FiniteDifferenceScheme,
                          mirror: Optional[MirrorTensor] = None) -> np.ndarray:
    """Second-order bracket contracted on (m, n) with eta_d^{mirror(n) mirror(m)}, shape [a][d].

    Contracting the result further with eta^d_aw gives the vector form.
    """
    bracket = second_order_bracket(f, gamma, R, z, fd)
    mm = (np.diag([1.0, -1.0, -1.0, -1.0]) if mirror is None else mirror.m).astype(complex)
    mirrored_upper = np.einsum('np,mq,dpq->dnm', mm, mm, eta.upper)
    return np.einsum('amn,dnm->ad', bracket, mirrored_upper)


def interior_lattice(domain: Box, fd: FiniteDifferenceScheme, points: int = 3) -> List[np.ndarray]:
    """points^dim lattice kept one stencil radius away from the box faces."""
    axes = []
    for axis, (lo, hi) in enumerate(zip(domain.lower, domain.upper)):
        margin = fd.radius * fd.step(axis) * 1.5
        axes.append(np.linspace(lo + margin, hi - margin, points))
    return [np.array(p) for p in itertools.product(*axes)]
