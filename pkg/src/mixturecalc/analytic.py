"""Analyticity, proper derivatives and contour integrals over a mixture algebra.

Coordinates are real vectors z^b; a field returns the n complex components
of its value. Derivatives are taken along the dual basis e^b, which is the
identity in the natural geometry and (1, -i) in the complex plane.
"""

import warnings
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import quad_vec

from .algebra import (
    COMPLEX_PLANE,
    NATURAL,
    Algebra,
    MirrorTensor,
    MixtureTensor,
    MultiVector,
    natural_mirror,
    split_axis,
)
from .errors import MixtureWarning, QuadratureFailure
from .geometry import FiniteDifferenceScheme, Variance, covariant_derivative

DEFAULT_FD = FiniteDifferenceScheme(1e-4, 4)
PointMap = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class AnalyticField:
    """Field z -> components, with an optional exact Jacobian [component][direction]."""

    f: Callable[[np.ndarray], np.ndarray]
    jacobian: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(self.f(np.asarray(z, dtype=float)), dtype=complex)

    def gradient(self, z: np.ndarray, fd: FiniteDifferenceScheme = DEFAULT_FD) -> np.ndarray:
        if self.jacobian is not None:
            return np.asarray(self.jacobian(np.asarray(z, dtype=float)), dtype=complex)
        return fd.gradient(self, z)


def complex_field(func: Callable[[complex], complex],
                  derivative: Optional[Callable[[complex], complex]] = None) -> AnalyticField:
    """Wrap a function of x + iy as a field on the complex plane.

    If `derivative` is given the field is holomorphic by assumption and the
    Jacobian follows from it (d/dx = f', d/dy = i f').
    """
    def evaluate(p):
        w = complex(func(complex(p[0], p[1])))
        return np.array([w.real, w.imag])

    def holomorphic_jacobian(p):
        d = complex(derivative(complex(p[0], p[1])))
        dy = 1j * d
        return np.array([[d.real, dy.real], [d.imag, dy.imag]])

    return AnalyticField(evaluate, None if derivative is None else holomorphic_jacobian)


@dataclass(frozen=True)
class ContourPiece:
    """Smooth segment s in [s0, s1] -> point, with optional exact velocity."""

    point: PointMap
    s0: float
    s1: float
    velocity: Optional[PointMap] = None

    def tangent(self, s: float) -> np.ndarray:
        if self.velocity is not None:
            return np.asarray(self.velocity(s), dtype=float)
        h = 1e-6 * max(1.0, abs(self.s1 - self.s0))
        return (np.asarray(self.point(s + h)) - np.asarray(self.point(s - h))) / (2 * h)

    def reversed(self) -> 'ContourPiece':
        a, b = self.s0, self.s1
        velocity = None if self.velocity is None else (lambda s: -np.asarray(self.velocity(a + b - s)))
        return ContourPiece(lambda s: self.point(a + b - s), a, b, velocity)

    def mapped(self, matrix: np.ndarray) -> 'ContourPiece':
        velocity = None if self.velocity is None else (lambda s: np.asarray(self.velocity(s)) @ matrix)
        return ContourPiece(lambda s: np.asarray(self.point(s)) @ matrix, self.s0, self.s1, velocity)


@dataclass(frozen=True)
class Contour:
    """Piecewise-smooth path; each piece is integrated separately.

    Args:
        pieces: Smooth segments in traversal order
        epsabs: Absolute quadrature tolerance
        epsrel: Relative quadrature tolerance
        limit: Maximum number of adaptive subintervals per piece
    """

    pieces: Tuple[ContourPiece, ...]
    epsabs: float = 1e-10
    epsrel: float = 1e-10
    limit: int = 200

    def __post_init__(self):
        object.__setattr__(self, 'pieces', tuple(self.pieces))
        if not self.pieces:
            raise ValueError("Contour needs at least one piece")
        for piece in self.pieces:
            if piece.s0 == piece.s1:
                raise ValueError(f"Contour piece has an empty parameter range [{piece.s0}, {piece.s1}]")
        if self.epsabs <= 0 and self.epsrel <= 0:
            raise ValueError("Quadrature tolerance must be positive")

    @property
    def start(self) -> np.ndarray:
        first = self.pieces[0]
        return np.asarray(first.point(first.s0), dtype=float)

    @property
    def end(self) -> np.ndarray:
        last = self.pieces[-1]
        return np.asarray(last.point(last.s1), dtype=float)

    @property
    def closed(self) -> bool:
        return bool(np.allclose(self.start, self.end, atol=1e-12))

    def reversed(self) -> 'Contour':
        pieces = tuple(piece.reversed() for piece in reversed(self.pieces))
        return Contour(pieces, self.epsabs, self.epsrel, self.limit)

    def conjugated(self, algebra: Algebra = COMPLEX_PLANE) -> 'Contour':
        """Image of the path under the algebra's basis conjugation."""
        matrix = np.real(np.asarray(algebra.conjugation))
        pieces = tuple(piece.mapped(matrix) for piece in self.pieces)
        return Contour(pieces, self.epsabs, self.epsrel, self.limit)

    def sample(self, count: int = 65) -> np.ndarray:
        points = []
        for piece in self.pieces:
            for s in np.linspace(piece.s0, piece.s1, count):
                points.append(np.asarray(piece.point(s), dtype=float))
        return np.array(points)


@dataclass(frozen=True)
class IntegralResult:
    """Integral value with the summed quadrature error estimate and optional parts."""

    value: MultiVector
    error: float
    parts: Tuple[MultiVector, ...] = field(default_factory=tuple)


class ResiduePair(NamedTuple):
    I_z: complex
    I_conj: complex
    total: complex


@dataclass(frozen=True)
class DescentSplit:
    """Real and imaginary parts of d phi/ds at a point, taken along the exponent's axis.

    misalignment is the vector part of d phi/ds not parallel to that axis.
    """

    re_part: MultiVector
    im_part: MultiVector
    misalignment: np.ndarray


def polyline_contour(points: Sequence[Sequence[float]], **options) -> Contour:
    pts = [np.asarray(p, dtype=float) for p in points]
    if len(pts) < 2:
        raise ValueError("Polyline needs at least two points")
    pieces = []
    for a, b in zip(pts[:-1], pts[1:]):
        pieces.append(ContourPiece(lambda s, a=a, b=b: a + s * (b - a), 0.0, 1.0,
                                   lambda s, a=a, b=b: b - a))
    return Contour(tuple(pieces), **options)


def arc_contour(center: Sequence[float], radius: float, theta0: float, theta1: float,
                plane: Tuple[int, int] = (1, 2), **options) -> Contour:
    """Circular arc from theta0 to theta1 in the (plane[0], plane[1]) coordinate plane."""
    if radius <= 0:
        raise ValueError(f"Arc radius must be positive, got {radius}")
    center = np.asarray(center, dtype=float)
    p, q = plane
    span = theta1 - theta0

    def point(s):
        theta = theta0 + s * span
        out = center.copy()
        out[p] += radius * np.cos(theta)
        out[q] += radius * np.sin(theta)
        return out

    def velocity(s):
        theta = theta0 + s * span
        out = np.zeros_like(center)
        out[p] = -radius * span * np.sin(theta)
        out[q] = radius * span * np.cos(theta)
        return out

    return Contour((ContourPiece(point, 0.0, 1.0, velocity),), **options)


def circle_contour(center: Sequence[float], radius: float, clockwise: bool = False,
                   plane: Tuple[int, int] = (0, 1), **options) -> Contour:
    end = -2 * np.pi if clockwise else 2 * np.pi
    return arc_contour(center, radius, 0.0, end, plane, **options)


def polynomial_contour(coefficients: Sequence[Sequence[float]], s0: float = 0.0, s1: float = 1.0,
                       **options) -> Contour:
    """z(s) = sum_k coefficients[k] s^k."""
    coeffs = np.asarray(coefficients, dtype=float)
    powers = np.arange(coeffs.shape[0])

    def point(s):
        return (s ** powers) @ coeffs

    def velocity(s):
        return (powers[1:] * s ** (powers[1:] - 1)) @ coeffs[1:]

    return Contour((ContourPiece(point, s0, s1, velocity),), **options)


def _as_algebra(eta: Union[Algebra, MixtureTensor, None], n: int) -> Algebra:
    if isinstance(eta, Algebra):
        return eta
    if eta is None:
        return COMPLEX_PLANE if n == 2 else NATURAL
    mirror = natural_mirror() if eta.n == 4 else MirrorTensor(np.eye(eta.n))
    return Algebra('custom', eta, mirror, np.eye(eta.n), np.eye(eta.n))


def _integrate(contour: Contour, integrand: Callable[[np.ndarray, np.ndarray], np.ndarray],
               size: int) -> Tuple[np.ndarray, float]:
    total = np.zeros(size, dtype=complex)
    error = 0.0
    for index, piece in enumerate(contour.pieces):
        def real_integrand(s, piece=piece):
            value = np.asarray(integrand(np.asarray(piece.point(s), dtype=float), piece.tangent(s)),
                               dtype=complex)
            return np.concatenate([value.real, value.imag])

        res, err, info = quad_vec(real_integrand, piece.s0, piece.s1, epsabs=contour.epsabs,
                                  epsrel=contour.epsrel, limit=contour.limit, full_output=True)
        if not info.success:
            raise QuadratureFailure(
                f"Quadrature on contour piece {index} failed: {info.message} (error {err:.3e})"
            )
        total += res[:size] + 1j * res[size:]
        error += float(err)
    if error > max(contour.epsabs, contour.epsrel * float(np.max(np.abs(total)))) * 10:
        warnings.warn(f"Contour quadrature error estimate {error:.3e} is above tolerance",
                      MixtureWarning)
    return total, error


def path_integral(g: AnalyticField, c: Contour,
                  eta: Union[Algebra, MixtureTensor, None] = None) -> IntegralResult:
    """Integral of (dz/ds) g(z(s)) ds, differential on the left.

    Raises:
        QuadratureFailure: if adaptive refinement exhausts its budget
    """
    n = c.start.size
    lower = _as_algebra(eta, n).eta.lower

    def integrand(point, velocity):
        return np.einsum('gab,a,b->g', lower, velocity, g(point))

    value, error = _integrate(c, integrand, lower.shape[0])
    return IntegralResult(MultiVector(value), error)


def corrected_path_integral(f: AnalyticField, c: Contour,
                            eta: Union[Algebra, MixtureTensor, None] = None,
                            fd: FiniteDifferenceScheme = DEFAULT_FD) -> IntegralResult:
    """Integral of sum_b (dz e^b + e^b dz) d_b f along the contour.

    The first part (dz e^b d_b f) is the naive integral of the derivative;
    the second (e^b dz d_b f) is the by-product that restores path
    independence. In the natural geometry the sum is 2 (f(end) - f(start)).

    Returns:
        IntegralResult with parts (naive, by-product)
    """
    n = c.start.size
    algebra = _as_algebra(eta, n)
    lower = algebra.eta.lower
    dual = np.asarray(algebra.dual)

    def integrand(point, velocity):
        grad = f.gradient(point, fd)
        left = np.einsum('gpq,p,bq->gb', lower, velocity, dual)
        right = np.einsum('gpq,bp,q->gb', lower, dual, velocity)
        first = np.einsum('gb,hb,kgh->k', left, grad, lower)
        second = np.einsum('gb,hb,kgh->k', right, grad, lower)
        return np.concatenate([first, second])

    value, error = _integrate(c, integrand, 2 * lower.shape[0])
    first, second = value[:n], value[n:]
    return IntegralResult(MultiVector(first + second), error, (MultiVector(first), MultiVector(second)))


def residue_pair(c: Contour) -> ResiduePair:
    """Loop integrals of dz/z and dz*/z* in the complex plane.

    Raises:
        QuadratureFailure: if the contour passes through the origin
    """
    samples = c.sample()
    if samples.shape[1] != 2:
        raise ValueError("residue_pair works in the two-dimensional complex plane")
    if np.min(np.hypot(samples[:, 0], samples[:, 1])) < 1e-8:
        raise QuadratureFailure("Contour passes through the origin")
    lower = COMPLEX_PLANE.eta.lower

    def integrand(point, velocity):
        r2 = point @ point
        inverse = np.array([point[0], -point[1]]) / r2
        return np.einsum('gab,a,b->g', lower, velocity, inverse)

    direct, _ = _integrate(c, integrand, 2)
    conj, _ = _integrate(c.conjugated(COMPLEX_PLANE), integrand, 2)
    i_z = complex(direct[0] + 1j * direct[1])
    i_conj = complex(conj[0] + 1j * conj[1])
    return ResiduePair(i_z, i_conj, i_z + i_conj)


def proper_derivative(f: AnalyticField, gamma, eta: Union[Algebra, MixtureTensor, None],
                      z: np.ndarray, fd: FiniteDifferenceScheme = DEFAULT_FD) -> MultiVector:
    """(1/n) e^b e_a f^a_;b, the covariant derivative with respect to z.

    Args:
        f: Field to differentiate
        gamma: Connection field, or None for a flat one
        eta: Algebra (or mixture) supplying the product and dual basis
        z: Interior point
        fd: Finite-difference scheme for f when no Jacobian is given
    """
    z = np.asarray(z, dtype=float)
    algebra = _as_algebra(eta, z.size)
    cov = _covariant_gradient(f, gamma, z, fd)
    lower, dual = algebra.eta.lower, np.asarray(algebra.dual)
    return MultiVector(np.einsum('bm,gma,ab->g', dual, lower, cov) / algebra.n)


def connection_mixture_matrix(gamma: np.ndarray, eta: Union[Algebra, MixtureTensor, None]) -> np.ndarray:
    """H^g_a = e^b-product of Gamma, so that the proper derivative reads (1/n)(eta d + H) f."""
    gamma = np.asarray(gamma, dtype=complex)
    algebra = _as_algebra(eta, gamma.shape[0])
    return np.einsum('bm,gml,lab->ga', np.asarray(algebra.dual), algebra.eta.lower, gamma)


def analyticity_residual(f: AnalyticField, gamma, eta: Union[Algebra, MixtureTensor, None],
                         z: np.ndarray, fd: FiniteDifferenceScheme = DEFAULT_FD) -> np.ndarray:
    """Components of sum_b adjoint(e^b) e_a f^a_;b; zero where f is analytic.

    In the complex plane this is 2 df/dz*, i.e. the Cauchy-Riemann residual.
    """
    z = np.asarray(z, dtype=float)
    algebra = _as_algebra(eta, z.size)
    cov = _covariant_gradient(f, gamma, z, fd)
    adjoint_dual = np.conj(np.asarray(algebra.dual)) @ algebra.conjugation @ algebra.mirror.m
    return np.einsum('bm,gma,ab->g', adjoint_dual, algebra.eta.lower, cov)


def _covariant_gradient(f: AnalyticField, gamma, z: np.ndarray,
                        fd: FiniteDifferenceScheme) -> np.ndarray:
    if gamma is None:
        return f.gradient(z, fd)
    if f.jacobian is not None:
        conn = np.asarray(gamma(z), dtype=complex)
        return f.gradient(z, fd) + np.einsum('g,agb->ab', f(z), conn)
    return covariant_derivative(f, gamma, z, Variance.VECTOR, fd)


def descent_conditions(phi: AnalyticField, c: Contour, s0: float, piece: int = 0,
                       fd: Optional[FiniteDifferenceScheme] = None) -> DescentSplit:
    """Split d phi(z(s))/ds at s0 into real and imaginary parts along phi's axis.

    With phi(z0) = a + sigma k (k^2 = 1) and d phi/ds = a' + tau k + w where w
    is orthogonal to k, re_part = Re a' + Re tau k and im_part = Im a' + Im tau k.
    re_part = 0 flags pure oscillation, im_part = 0 pure descent.

    Raises:
        DegenerateVector: if phi(z0) has a null vector part
    """
    segment = c.pieces[piece]
    fd = fd or FiniteDifferenceScheme(1e-4 * max(1.0, abs(segment.s1 - segment.s0)), 4)
    along = lambda s: phi(segment.point(float(s[0])))
    value = MultiVector(phi(segment.point(s0)))
    rate = MultiVector(fd.partial(along, np.array([s0]), 0))
    axis = split_axis(value)[2] if value.n == 4 else None
    if axis is None:
        # no axis to align with: plain componentwise split
        rest = np.zeros(max(value.n - 1, 0), dtype=complex)
        return DescentSplit(MultiVector(rate.c.real), MultiVector(rate.c.imag), rest)

    scalar = rate.scalar_part
    vector = rate.vector_part
    tau = complex(vector @ axis)
    re_part = MultiVector.from_parts(scalar.real, tau.real * axis)
    im_part = MultiVector.from_parts(scalar.imag, tau.imag * axis)
    return DescentSplit(re_part, im_part, vector - tau * axis)
