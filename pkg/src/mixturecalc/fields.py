"""Scalar and vector fields described in scenario files.

A scalar field spec is one of

    3.5                                   constant
    {polynomial: [[coef, [p0, p1, p2, p3]], ...]}   sum coef * prod z_i^p_i
    {wave: {amplitude, k, omega, phase, kind}}      amplitude * cos(k.x - omega z0 + phase)

and a vector field spec is a list of three scalar specs.
"""

from dataclasses import dataclass
from typing import Any, Callable, Sequence, Tuple

import numpy as np

from .errors import ConfigError

WAVE_KINDS = ('cos', 'sin')


@dataclass(frozen=True)
class ConstantField:
    value: float

    def __call__(self, z: np.ndarray) -> float:
        return self.value

    def gradient(self, z: np.ndarray) -> np.ndarray:
        return np.zeros(4)


@dataclass(frozen=True)
class PolynomialField:
    """Sum of monomials coef * prod_i z_i^p_i over four coordinates."""

    terms: Tuple[Tuple[float, Tuple[int, ...]], ...]

    def __call__(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(sum(coef * np.prod(z ** np.asarray(powers)) for coef, powers in self.terms))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        """Exact partial derivatives d/dz_i."""
        z = np.asarray(z, dtype=float)
        grad = np.zeros(4)
        for coef, powers in self.terms:
            for axis, power in enumerate(powers):
                if power == 0:
                    continue
                lowered = np.array(powers)
                lowered[axis] -= 1
                grad[axis] += coef * power * np.prod(z ** lowered)
        return grad


@dataclass(frozen=True)
class WaveField:
    amplitude: float
    k: Tuple[float, float, float]
    omega: float
    phase: float = 0.0
    kind: str = 'cos'

    def __call__(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        arg = float(np.dot(self.k, z[1:4])) - self.omega * z[0] + self.phase
        return self.amplitude * (np.cos(arg) if self.kind == 'cos' else np.sin(arg))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        arg = float(np.dot(self.k, z[1:4])) - self.omega * z[0] + self.phase
        slope = self.amplitude * (-np.sin(arg) if self.kind == 'cos' else np.cos(arg))
        return slope * np.array([-self.omega, *self.k])

    @property
    def on_light_cone(self) -> bool:
        return bool(np.isclose(abs(self.omega), np.linalg.norm(self.k)))


def _number(value: Any, key: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=key)
    return float(value)


def parse_scalar_field(spec: Any, key: str) -> Callable[[np.ndarray], float]:
    """Build a scalar field from its config spec.

    Raises:
        ConfigError: naming `key` if the spec is malformed
    """
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return ConstantField(float(spec))
    if not isinstance(spec, dict) or len(spec) != 1:
        raise ConfigError("expected a number, {polynomial: ...} or {wave: ...}", key=key)

    kind, body = next(iter(spec.items()))
    if kind == 'polynomial':
        if not isinstance(body, list):
            raise ConfigError("polynomial terms must be a list", key=f"{key}.polynomial")
        terms = []
        for index, term in enumerate(body):
            term_key = f"{key}.polynomial[{index}]"
            if not isinstance(term, list) or len(term) != 2:
                raise ConfigError("each term is [coef, [p0, p1, p2, p3]]", key=term_key)
            coef = _number(term[0], term_key)
            powers = term[1]
            if (not isinstance(powers, list) or len(powers) != 4
                    or any(not isinstance(p, int) or isinstance(p, bool) or p < 0 for p in powers)):
                raise ConfigError("powers must be four non-negative integers", key=term_key)
            terms.append((coef, tuple(powers)))
        return PolynomialField(tuple(terms))

    if kind == 'wave':
        wave_key = f"{key}.wave"
        if not isinstance(body, dict):
            raise ConfigError("wave needs a mapping", key=wave_key)
        unknown = set(body) - {'amplitude', 'k', 'omega', 'phase', 'kind'}
        if unknown:
            raise ConfigError(f"unknown keys {sorted(unknown)}", key=wave_key)
        k = body.get('k', [1.0, 0.0, 0.0])
        if not isinstance(k, list) or len(k) != 3:
            raise ConfigError("k must be a list of three numbers", key=f"{wave_key}.k")
        wave_kind = body.get('kind', 'cos')
        if wave_kind not in WAVE_KINDS:
            raise ConfigError(f"kind must be one of {WAVE_KINDS}, got {wave_kind!r}",
                              key=f"{wave_key}.kind")
        return WaveField(
            amplitude=_number(body.get('amplitude', 1.0), f"{wave_key}.amplitude"),
            k=tuple(_number(v, f"{wave_key}.k") for v in k),
            omega=_number(body.get('omega', float(np.linalg.norm(k))), f"{wave_key}.omega"),
            phase=_number(body.get('phase', 0.0), f"{wave_key}.phase"),
            kind=wave_kind,
        )

    raise ConfigError(f"unknown field kind '{kind}'", key=key)


@dataclass(frozen=True)
class VectorField:
    components: Tuple[Callable[[np.ndarray], float], ...]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.array([component(z) for component in self.components], dtype=float)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        """Rows d A_i / d z_j."""
        return np.array([component.gradient(z) for component in self.components])


def parse_vector_field(spec: Any, key: str, size: int = 3) -> VectorField:
    if spec is None:
        spec = [0.0] * size
    if not isinstance(spec, list) or len(spec) != size:
        raise ConfigError(f"expected a list of {size} field specs", key=key)
    return VectorField(tuple(parse_scalar_field(s, f"{key}[{i}]") for i, s in enumerate(spec)))


def polynomial(*terms: Tuple[float, Sequence[int]]) -> PolynomialField:
    """Shorthand: polynomial((1.0, (0, 2, 0, 0)), (-1.0, (2, 0, 0, 0)))."""
    return PolynomialField(tuple((float(c), tuple(p)) for c, p in terms))
