"""Mixture algebra on the complex quaternions C^{1+3}.

A mixture tensor eta^g_ab fixes the product of basis elements,
e_a e_b = eta^g_ab e_g, so that the product of two vectors is again a vector.
Storage order is always [output][first][second], for both the lower table
eta^g_ab and the upper (dual-basis) table eta_g^ab.

The natural geometry has e_a^2 = e0 and e_i e_j = i e_k for cyclic (i, j, k).
A two-dimensional sub-algebra spanned by 1 and i (the complex plane) is also
provided; it is the Cauchy-Riemann sanity case used by the analytic module.
"""

import enum
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from .errors import DegenerateVector, NonConvergence, NonScalarMagnitude, NonScalarMetric
from .report import SuiteReport

EXACT_TOL = 1e-12
CYCLIC = ((1, 2, 3), (2, 3, 1), (3, 1, 2))


def _readonly(values, dtype=complex, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"Expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MultiVector:
    """Element z = z^a e_a with complex components.

    Four components over e0..e3 in the natural geometry; the complex-plane
    sub-algebra uses two. Instances are immutable.
    """

    c: np.ndarray

    def __post_init__(self):
        arr = np.array(self.c, dtype=complex).reshape(-1)
        if arr.size == 0:
            raise ValueError("MultiVector needs at least one component")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"MultiVector components must be finite, got {arr}")
        arr.setflags(write=False)
        object.__setattr__(self, 'c', arr)

    @classmethod
    def basis(cls, index: int, n: int = 4) -> 'MultiVector':
        c = np.zeros(n, dtype=complex)
        c[index] = 1.0
        return cls(c)

    @classmethod
    def zero(cls, n: int = 4) -> 'MultiVector':
        return cls(np.zeros(n, dtype=complex))

    @classmethod
    def scalar(cls, value: complex, n: int = 4) -> 'MultiVector':
        c = np.zeros(n, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def from_parts(cls, scalar: complex, vector: Sequence[complex]) -> 'MultiVector':
        return cls(np.concatenate([[scalar], np.asarray(vector, dtype=complex)]))

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def scalar_part(self) -> complex:
        return complex(self.c[0])

    @property
    def vector_part(self) -> np.ndarray:
        return self.c[1:].copy()

    def norm(self) -> float:
        return float(np.linalg.norm(self.c))

    def allclose(self, other: Union['MultiVector', Sequence[complex]], tol: float = EXACT_TOL) -> bool:
        other_c = other.c if isinstance(other, MultiVector) else np.asarray(other, dtype=complex)
        return bool(np.max(np.abs(self.c - other_c)) <= tol)

    def __add__(self, other: 'MultiVector') -> 'MultiVector':
        if not isinstance(other, MultiVector):
            return NotImplemented
        return MultiVector(self.c + other.c)

    def __sub__(self, other: 'MultiVector') -> 'MultiVector':
        if not isinstance(other, MultiVector):
            return NotImplemented
        return MultiVector(self.c - other.c)

    def __neg__(self) -> 'MultiVector':
        return MultiVector(-self.c)

    def __mul__(self, scalar) -> 'MultiVector':
        # Products of two multivectors need a mixture tensor: use mv_mul.
        if isinstance(scalar, MultiVector) or not np.isscalar(scalar):
            return NotImplemented
        return MultiVector(self.c * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> 'MultiVector':
        if not np.isscalar(scalar):
            return NotImplemented
        return MultiVector(self.c / scalar)

    def __repr__(self) -> str:
        terms = ", ".join(f"{v:.6g}" for v in self.c)
        return f"MultiVector([{terms}])"


@dataclass(frozen=True, eq=False)
class MixtureTensor:
    """Lower table eta^g_ab and upper table eta_g^ab, both stored [g][a][b]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.array(self.lower, dtype=complex)
        n = lower.shape[0]
        object.__setattr__(self, 'lower', _readonly(lower, shape=(n, n, n)))
        object.__setattr__(self, 'upper', _readonly(self.upper, shape=(n, n, n)))

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    def with_lower(self, lower: np.ndarray) -> 'MixtureTensor':
        return MixtureTensor(lower, self.upper)


@dataclass(frozen=True, eq=False)
class MirrorTensor:
    """Mirror M_a^b acting on components as z^b -> z^a M_a^b."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=complex)
        object.__setattr__(self, 'm', _readonly(m, shape=(m.shape[0], m.shape[0])))


@dataclass(frozen=True, eq=False)
class MetricPair:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'lower', _readonly(self.lower))
        object.__setattr__(self, 'upper', _readonly(self.upper))


class InvolutionKind(enum.Enum):
    MIRROR = "mirror"
    CONJUGATE = "conjugate"
    ADJOINT = "adjoint"


class RotationMode(enum.Enum):
    ONE_SIDED = "one-sided"
    SANDWICH = "sandwich"


@dataclass(frozen=True, eq=False)
class Algebra:
    """A mixture tensor with the index actions it needs.

    Args:
        name: Label used in reports
        eta: Lower and upper product tables
        mirror: Mirror tensor M
        conjugation: Action of the conjugate on basis elements (identity when
            every basis element is real)
        dual: Matrix D with e^a = D[a, m] e_m
    """

    name: str
    eta: MixtureTensor
    mirror: MirrorTensor
    conjugation: np.ndarray
    dual: np.ndarray

    def __post_init__(self):
        n = self.eta.n
        object.__setattr__(self, 'conjugation', _readonly(self.conjugation, shape=(n, n)))
        object.__setattr__(self, 'dual', _readonly(self.dual, shape=(n, n)))

    @property
    def n(self) -> int:
        return self.eta.n

    def basis(self, index: int) -> MultiVector:
        return MultiVector.basis(index, self.n)


def upper_from_dual(lower: np.ndarray, dual: np.ndarray) -> np.ndarray:
    """Upper table from the lower table and the dual basis e^a = D[a, m] e_m."""
    lower = np.asarray(lower, dtype=complex)
    dual = np.asarray(dual, dtype=complex)
    products = np.einsum('am,bn,lmn->lab', dual, dual, lower)
    return np.einsum('lab,lg->gab', products, np.linalg.inv(dual))


def natural_mixture() -> MixtureTensor:
    """The C^{1+3} mixture: eta^0_aa = eta^a_0a = eta^a_a0 = 1, eta^k_ij = -eta^k_ji = i."""
    lower = np.zeros((4, 4, 4), dtype=complex)
    for a in range(4):
        lower[0, a, a] = 1.0
        lower[a, 0, a] = 1.0
        lower[a, a, 0] = 1.0
    for i, j, k in CYCLIC:
        lower[k, i, j] = 1j
        lower[k, j, i] = -1j
    return MixtureTensor(lower, upper_from_dual(lower, np.eye(4)))


def natural_mirror() -> MirrorTensor:
    return MirrorTensor(np.diag([1.0, -1.0, -1.0, -1.0]))


def natural_algebra() -> Algebra:
    return Algebra('natural', natural_mixture(), natural_mirror(), np.eye(4), np.eye(4))


def complex_plane_algebra() -> Algebra:
    """Sub-algebra with bases 1 and i; e^1 = -i so that e_b e^b = 2."""
    lower = np.zeros((2, 2, 2), dtype=complex)
    lower[0, 0, 0] = 1.0
    lower[1, 0, 1] = 1.0
    lower[1, 1, 0] = 1.0
    lower[0, 1, 1] = -1.0
    dual = np.diag([1.0, -1.0])
    eta = MixtureTensor(lower, upper_from_dual(lower, dual))
    return Algebra('complex-plane', eta, MirrorTensor(np.eye(2)), np.diag([1.0, -1.0]), dual)


NATURAL = natural_algebra()
COMPLEX_PLANE = complex_plane_algebra()


def _mixture(eta: Union[MixtureTensor, Algebra, None]) -> MixtureTensor:
    if eta is None:
        return NATURAL.eta
    return eta.eta if isinstance(eta, Algebra) else eta


def _algebra(algebra: Optional[Algebra], n: int) -> Algebra:
    if algebra is not None:
        return algebra
    if n == 2:
        return COMPLEX_PLANE
    return NATURAL


def mv_mul(a: MultiVector, b: MultiVector, eta: Union[MixtureTensor, Algebra, None] = None) -> MultiVector:
    """Mixture product u^g = a^a b^b eta^g_ab."""
    lower = _mixture(eta).lower
    return MultiVector(np.einsum('gab,a,b->g', lower, a.c, b.c))


def left_matrix(a: MultiVector, eta: Union[MixtureTensor, Algebra, None] = None) -> np.ndarray:
    """Matrix L with (a b)^g = L[g, b] b^b."""
    return np.einsum('gab,a->gb', _mixture(eta).lower, a.c)


def involute(a: MultiVector, kind: InvolutionKind, algebra: Optional[Algebra] = None) -> MultiVector:
    """Mirror, conjugate or adjoint of a multivector."""
    alg = _algebra(algebra, a.n)
    if kind is InvolutionKind.MIRROR:
        return MultiVector(a.c @ alg.mirror.m)
    if kind is InvolutionKind.CONJUGATE:
        return MultiVector(np.conj(a.c) @ alg.conjugation)
    if kind is InvolutionKind.ADJOINT:
        return MultiVector(np.conj(a.c) @ alg.conjugation @ alg.mirror.m)
    raise ValueError(f"Unknown involution '{kind}'")


def mirror(a: MultiVector, algebra: Optional[Algebra] = None) -> MultiVector:
    return involute(a, InvolutionKind.MIRROR, algebra)


def conjugate(a: MultiVector, algebra: Optional[Algebra] = None) -> MultiVector:
    return involute(a, InvolutionKind.CONJUGATE, algebra)


def adjoint(a: MultiVector, algebra: Optional[Algebra] = None) -> MultiVector:
    return involute(a, InvolutionKind.ADJOINT, algebra)


def magnitude_sq(a: MultiVector, algebra: Optional[Algebra] = None, tol: float = EXACT_TOL) -> complex:
    """e0 coefficient of a * mirror(a).

    Raises:
        NonScalarMagnitude: if the product has a vector part beyond tolerance
    """
    alg = _algebra(algebra, a.n)
    product = mv_mul(a, mirror(a, alg), alg)
    remainder = np.max(np.abs(product.c[1:])) if product.n > 1 else 0.0
    if remainder > tol * max(1.0, np.max(np.abs(product.c))):
        raise NonScalarMagnitude(
            f"a*mirror(a) has vector remainder {remainder:.3e} (mixture '{alg.name}')"
        )
    return complex(product.c[0])


def is_null(a: MultiVector, tol: float = EXACT_TOL, algebra: Optional[Algebra] = None) -> bool:
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    return abs(magnitude_sq(a, algebra)) <= tol


def mv_inverse(a: MultiVector, algebra: Optional[Algebra] = None) -> MultiVector:
    """mirror(a) / |a|^2."""
    alg = _algebra(algebra, a.n)
    mag = magnitude_sq(a, alg)
    if abs(mag) <= EXACT_TOL * max(1.0, a.norm() ** 2):
        raise DegenerateVector(f"Cannot invert null element {a}")
    return mirror(a, alg) / mag


def metric_from_mixture(eta: MixtureTensor, m: MirrorTensor, tol: float = EXACT_TOL) -> MetricPair:
    """Read g_ab and g^ab off the e0 channel of the symmetrized mirrored products.

    Raises:
        NonScalarMetric: if any other channel is nonzero
    """
    mm = m.m
    lower_prod = np.einsum('gan,bn->gab', eta.lower, mm)
    lower_sym = 0.5 * (lower_prod + np.einsum('gab->gba', lower_prod))
    upper_prod = np.einsum('an,gnb->gab', mm, eta.upper)
    upper_sym = 0.5 * (upper_prod + np.einsum('gab->gba', upper_prod))
    for label, table in (('lower', lower_sym), ('upper', upper_sym)):
        leak = np.max(np.abs(table[1:])) if table.shape[0] > 1 else 0.0
        if leak > tol:
            raise NonScalarMetric(
                f"Symmetrized mirrored {label} product leaks {leak:.3e} into non-e0 channels"
            )
    return MetricPair(lower_sym[0], upper_sym[0])


def associativity_residual(eta: MixtureTensor) -> float:
    """max |eta^l_bg eta^w_al - eta^l_ab eta^w_lg| over all index tuples."""
    lower = eta.lower
    left = np.einsum('lbg,wal->wabg', lower, lower)
    right = np.einsum('lab,wlg->wabg', lower, lower)
    return float(np.max(np.abs(left - right)))


def dual_product_residual(algebra: Algebra) -> float:
    """Disagreement between the two table expressions for e_b e^a.

    e_b e^a computed directly from the lower table and the dual matrix is
    compared with eta^a_gb e^g and with eta_b^ag e^g.
    """
    lower, upper = algebra.eta.lower, algebra.eta.upper
    dual = np.asarray(algebra.dual)
    direct = np.einsum('am,lbm,lg->bag', dual, lower, np.linalg.inv(dual))
    from_lower = np.einsum('agb->bag', lower)
    from_upper = upper
    return float(max(np.max(np.abs(direct - from_lower)), np.max(np.abs(direct - from_upper))))


def random_multivectors(rng: np.random.Generator, count: int, n: int = 4) -> np.ndarray:
    """Components uniform in the complex unit square, shape (count, n)."""
    return rng.uniform(0.0, 1.0, (count, n)) + 1j * rng.uniform(0.0, 1.0, (count, n))


def _random_transforms(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    mats = rng.normal(size=(count, n, n)) + 1j * rng.normal(size=(count, n, n))
    return mats + 2.0 * n * np.eye(n)


def identity_suite(eta: MixtureTensor, m: MirrorTensor, samples: int, tol: float = EXACT_TOL,
                   seed: int = 0, dual: Optional[np.ndarray] = None) -> SuiteReport:
    """Verify the contraction identities a well-formed mixture satisfies.

    Failures are report entries, not exceptions.

    Args:
        eta: Mixture tensor under test
        m: Mirror tensor
        samples: Number of random transformations for the mirror covariance check
        tol: Pass tolerance for every check
        seed: Seed for the random transformations
        dual: Dual-basis matrix (identity when omitted)

    Returns:
        SuiteReport with the maximum residual per identity
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    lower, upper = eta.lower, eta.upper
    n = eta.n
    ident = np.eye(n)
    mm = m.m
    dual = np.eye(n) if dual is None else np.asarray(dual, dtype=complex)
    report = SuiteReport('algebra-identities')

    contractions = (
        np.einsum('abg,dgb->ad', lower, upper),
        np.einsum('gdb,gba->da', lower, upper),
        np.einsum('gab,gbd->ad', upper, lower),
    )
    report.add('pseudo-inverse', 'eta^a_bg eta_d^gb = n 1^a_d (three forms)',
               max(np.max(np.abs(c - n * ident)) for c in contractions), tol)

    report.add('cyclic-lower', 'eta^g_ab = eta^a_bg',
               lower - np.einsum('abg->gab', lower), tol)
    report.add('cyclic-upper', 'eta_g^ab = eta_a^bg',
               upper - np.einsum('abg->gab', upper), tol)

    report.add('conjugate-lower', 'eta^g_ab = (eta^g_ba)*',
               lower - np.conj(np.einsum('gba->gab', lower)), tol)
    # Upper relation stated in the rotation normalization (i * eta_g^ab).
    rotated = 1j * upper
    report.add('conjugate-upper', 'i eta_g^ab = -(i eta_g^ba)*',
               rotated + np.conj(np.einsum('gba->gab', rotated)), tol)

    pinv_a = np.einsum('gab,dba->gd', lower, upper) / n
    pinv_b = np.einsum('gab,gda->db', lower, upper) / n
    report.add('pseudo-inverse-normalized', '(1/n) eta^g_ab eta_d^ba = 1 and (1/n) eta^g_ab eta_g^da = 1',
               max(np.max(np.abs(pinv_a - ident)), np.max(np.abs(pinv_b - ident))), tol)

    exchanges = (
        (np.einsum('bgl,dal->bgda', lower, upper), np.einsum('lab,lgd->bgda', upper, lower)),
        (np.einsum('bgl,dla->bgda', lower, upper), np.einsum('gal,bld->bgda', upper, lower)),
        (np.einsum('blg,dla->bgda', lower, upper), np.einsum('lba,ldg->bgda', upper, lower)),
        (np.einsum('blg,dal->bgda', lower, upper), np.einsum('gla,bdl->bgda', upper, lower)),
    )
    for idx, (left, right) in enumerate(exchanges, start=1):
        report.add(f'index-exchange-{idx}', 'index-exchange identity', left - right, tol)

    triples = (
        (np.einsum('amn,mbw,gnw->abg', lower, lower, upper) / n, lower),
        (np.einsum('amn,mbw,gnw->abg', upper, upper, lower) / n, upper),
        (np.einsum('anm,mwb,gwn->agb', lower, lower, upper) / n, lower),
        (np.einsum('anm,mwb,gwn->agb', upper, upper, lower) / n, upper),
    )
    for idx, (left, right) in enumerate(triples, start=1):
        report.add(f'triple-{idx}', 'triple-contraction identity', left - right, tol)

    s_vec = np.zeros(n, dtype=complex)
    for a in range(n):
        s_vec += np.einsum('gab,a,b->g', lower, ident[a], dual[a] @ mm)
    s = s_vec[0]
    s_leak = float(np.max(np.abs(s_vec[1:]))) if n > 1 else 0.0
    if abs(s) > tol:
        sig = np.einsum('abg,gh,dhb->ad', lower, mm, upper) / s
        report.add('signature-pseudo-inverse', '(1/s) eta^a_bg eta_d^{mirror(g) b} = 1, s = e_a e^mirror(a)',
                   max(float(np.max(np.abs(sig - ident))), s_leak), tol)
    else:
        report.add('signature-pseudo-inverse', 's = e_a e^mirror(a) must be a nonzero scalar',
                   None, tol)

    # Covariance: the signature contraction stays s 1 after e'_a = L_a^m e_m,
    # with the mirror carried as M' = L M L^-1.
    signature = np.einsum('abg,hg,dhb->ad', lower, mm, upper)
    s_trace = np.trace(signature) / n
    rng = np.random.default_rng(seed)
    worst = 0.0
    for lam in _random_transforms(rng, samples, n):
        lam_inv = np.linalg.inv(lam)
        lower_p = np.einsum('bm,gn,kmn,ka->abg', lam, lam, lower, lam_inv)
        upper_p = np.einsum('mb,ng,kmn,ak->abg', lam_inv, lam_inv, upper, lam)
        m_p = lam @ mm @ lam_inv
        sig_p = np.einsum('abg,hg,dhb->ad', lower_p, m_p, upper_p)
        worst = max(worst, float(np.max(np.abs(sig_p - s_trace * ident))))
    if abs(s_trace) > tol:
        report.add('mirror-covariance', "(1/s) eta'^a_bg M'^g_h eta'_d^hb = 1 with M' = L M L^-1",
                   worst / abs(s_trace), tol)
    else:
        report.add('mirror-covariance', 's = e_a e^mirror(a) must be a nonzero scalar', None, tol)
    return report


def wellformed_report(algebra: Algebra, tol: float = EXACT_TOL) -> SuiteReport:
    """Structural checks on an algebra: associativity, dual products, involutions."""
    report = SuiteReport(f'wellformed-{algebra.name}')
    report.add('associativity', '(e_a e_b) e_g = e_a (e_b e_g)', associativity_residual(algebra.eta), tol)
    report.add('dual-products', 'two table forms of e_b e^a agree', dual_product_residual(algebra), tol)
    mm = algebra.mirror.m
    report.add('mirror-involution', 'M M = 1', mm @ mm - np.eye(algebra.n), tol)
    cc = algebra.conjugation
    report.add('conjugate-involution', 'C C = 1', cc @ cc - np.eye(algebra.n), tol)
    return report


def natural_properties_report(samples: int, seed: int = 0, tol: float = EXACT_TOL) -> SuiteReport:
    """Product properties of the natural geometry over random pairs."""
    alg = NATURAL
    rng = np.random.default_rng(seed)
    zs = random_multivectors(rng, samples)
    ws = random_multivectors(rng, samples)
    metric = metric_from_mixture(alg.eta, alg.mirror)
    report = SuiteReport('natural-properties')

    table = np.zeros((4, 4, 4), dtype=complex)
    for a in range(4):
        for b in range(4):
            table[a, b] = mv_mul(alg.basis(a), alg.basis(b)).c
    report.add('basis-table', 'basis products against the quaternion rules',
               table - _hand_basis_table(), tol)

    triple = mv_mul(mv_mul(alg.basis(1), alg.basis(2)), alg.basis(3))
    report.add('triple-product', 'e1 e2 e3 = i e0', triple.c - np.array([1j, 0, 0, 0]), tol)
    report.add('associativity', 'natural mixture is associative', associativity_residual(alg.eta), tol)

    conj_worst = adj_worst = mag_worst = metric_worst = 0.0
    for zc, wc in zip(zs, ws):
        z, w = MultiVector(zc), MultiVector(wc)
        zw = mv_mul(z, w)
        conj_worst = max(conj_worst, np.max(np.abs(
            conjugate(zw).c - mv_mul(conjugate(w), conjugate(z)).c)))
        adj_worst = max(adj_worst, np.max(np.abs(
            adjoint(zw).c - mv_mul(adjoint(z), adjoint(w)).c)))
        prod_mag = magnitude_sq(zw, tol=1e-9)
        expected = magnitude_sq(z) * magnitude_sq(w)
        mag_worst = max(mag_worst, abs(prod_mag - expected) / max(1.0, abs(expected)))
        metric_worst = max(metric_worst, abs(magnitude_sq(z) - zc @ metric.lower @ zc))
    report.add('conjugate-reverses', '(zw)* = w* z*', conj_worst, tol)
    report.add('adjoint-multiplicative', '(zw)^dagger = z^dagger w^dagger', adj_worst, tol)
    report.add('magnitude-multiplicative', '|zw|^2 = |z|^2 |w|^2 (relative)', mag_worst, 1e-10)
    report.add('magnitude-metric', '|z|^2 = z^a z^b g_ab', metric_worst, tol)

    null = MultiVector([1, 1, 0, 0])
    confinement = max(abs(magnitude_sq(mv_mul(null, MultiVector(zc)), tol=1e-9)) for zc in zs)
    report.add('null-confinement', '(1 + e1) z stays null', confinement, 1e-10)
    return report


def _hand_basis_table() -> np.ndarray:
    """Basis products e_a e_b written out from e_a^2 = e0, e_i e_j = i e_k."""
    table = np.zeros((4, 4, 4), dtype=complex)
    table[0, 0, 0] = 1
    for i in range(1, 4):
        table[0, i, i] = 1
        table[i, 0, i] = 1
        table[i, i, 0] = 1
    table[1, 2, 3] = 1j
    table[2, 1, 3] = -1j
    table[2, 3, 1] = 1j
    table[3, 2, 1] = -1j
    table[3, 1, 2] = 1j
    table[1, 3, 2] = -1j
    return table


def mv_exp(phi: MultiVector, terms: int = 64, tol: float = 1e-15,
           algebra: Optional[Algebra] = None) -> MultiVector:
    """Power series sum phi^k / k! under the mixture product.

    The argument is halved until its norm is below 0.5, the series summed, and
    the result squared back up.

    Raises:
        NonConvergence: if the last series term is above tol relative to the sum
    """
    if terms < 1:
        raise ValueError(f"terms must be >= 1, got {terms}")
    alg = _algebra(algebra, phi.n)
    norm = phi.norm()
    squarings = 0 if norm <= 0.5 else int(np.ceil(np.log2(norm / 0.5)))
    scaled = phi / (2.0 ** squarings)

    total = MultiVector.scalar(1.0, phi.n)
    term = total
    for k in range(1, terms):
        term = mv_mul(term, scaled, alg) / k
        total = total + term
    if term.norm() > tol * max(1.0, total.norm()):
        raise NonConvergence(
            f"Exponential series tail {term.norm():.3e} after {terms} terms exceeds {tol:.1e}"
        )
    for _ in range(squarings):
        total = mv_mul(total, total, alg)
    return total


def exp_via_matrix(phi: MultiVector, algebra: Optional[Algebra] = None) -> MultiVector:
    """exp(phi) from the matrix exponential of left multiplication."""
    alg = _algebra(algebra, phi.n)
    unit = np.zeros(phi.n, dtype=complex)
    unit[0] = 1.0
    return MultiVector(scipy.linalg.expm(left_matrix(phi, alg)) @ unit)


def split_axis(phi: MultiVector) -> Tuple[complex, complex, Optional[np.ndarray]]:
    """Return (scalar a, sigma, k) with phi = a + sigma k and k^2 = e0.

    k is None when the vector part vanishes.

    Raises:
        DegenerateVector: if the vector part is a nonzero null vector
    """
    if phi.n != 4:
        raise ValueError("exp_split needs the four-component natural geometry")
    vec = phi.c[1:]
    scale = float(np.max(np.abs(vec)))
    if scale == 0.0:
        return phi.scalar_part, 0j, None
    sigma = np.sqrt(complex(np.sum(vec * vec)))
    if abs(sigma) <= EXACT_TOL * scale:
        raise DegenerateVector(
            f"Vector part {vec} is null; the exponential split has no unit axis"
        )
    return phi.scalar_part, complex(sigma), vec / sigma


def exp_split(phi: MultiVector) -> Tuple[MultiVector, MultiVector]:
    """Split exp(phi) into an evanescent and an oscillatory factor.

    With phi = (alpha + i beta) + (gamma + i delta) k and k^2 = e0 (principal
    square root), returns (e^{alpha + gamma k}, e^{i(beta + delta k)}).
    """
    a, sigma, k = split_axis(phi)
    if k is None:
        evanescent = MultiVector.scalar(np.exp(a.real))
        oscillatory = MultiVector.scalar(np.exp(1j * a.imag))
        return evanescent, oscillatory
    gamma, delta = sigma.real, sigma.imag
    evanescent = MultiVector.from_parts(np.cosh(gamma), k * np.sinh(gamma)) * np.exp(a.real)
    oscillatory = MultiVector.from_parts(np.cos(delta), 1j * k * np.sin(delta)) * np.exp(1j * a.imag)
    return evanescent, oscillatory


def _axis_exponential(axis: int, angle: float) -> MultiVector:
    """exp(i e_axis angle) = cos(angle) + i e_axis sin(angle)."""
    if axis not in (1, 2, 3):
        raise ValueError(f"Rotation axis must be 1, 2 or 3, got {axis}")
    c = np.zeros(4, dtype=complex)
    c[0] = np.cos(angle)
    c[axis] = 1j * np.sin(angle)
    return MultiVector(c)


def rotate(z: MultiVector, axis: int, omega: float,
           mode: RotationMode = RotationMode.ONE_SIDED) -> MultiVector:
    """Rotate z about e_axis.

    ONE_SIDED returns z exp(i e_axis omega); SANDWICH returns
    exp(-i e_axis omega/2) z exp(i e_axis omega/2), which leaves e0 fixed.
    """
    if mode is RotationMode.ONE_SIDED:
        return mv_mul(z, _axis_exponential(axis, omega))
    if mode is RotationMode.SANDWICH:
        left = _axis_exponential(axis, -0.5 * omega)
        right = _axis_exponential(axis, 0.5 * omega)
        return mv_mul(mv_mul(left, z), right)
    raise ValueError(f"Unknown rotation mode '{mode}'")
