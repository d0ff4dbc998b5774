"""Scenario configuration: loading, schema validation and defaults.

A scenario file is JSON or YAML (chosen by suffix). Every section is
optional apart from ``seed``, which may instead come from ``--seed``.
Unknown keys are rejected and every error names the dotted key path.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError
from .fields import VectorField, parse_scalar_field, parse_vector_field
from .geometry import FiniteDifferenceScheme
from .weakfield import TestParticle, WeakFieldConfig

try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

ALGEBRA_NAMES = ('natural', 'complex-plane')
CONTOUR_KINDS = ('polyline', 'arc', 'polynomial')

ScalarField = Callable[[np.ndarray], float]

TOP_LEVEL_KEYS = {
    'seed', 'algebra', 'finite_difference', 'geometry', 'analytic', 'dirac',
    'electromag', 'yangmills', 'weakfield',
}


# ----------------------------------------------------------------------------
# Sections
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraSection:
    name: str = 'natural'
    samples: int = 1000
    tolerance: float = 1e-12


@dataclass(frozen=True)
class FiniteDifferenceSection:
    """FD step, order, and the constant C in the C * h^order tolerances."""

    step: float = 1e-2
    order: int = 2
    constant: float = 50.0

    @property
    def scheme(self) -> FiniteDifferenceScheme:
        return FiniteDifferenceScheme(self.step, self.order)

    def tolerance(self, scheme: Optional[FiniteDifferenceScheme] = None) -> float:
        scheme = scheme or self.scheme
        return self.constant * scheme.step(0) ** scheme.order


@dataclass(frozen=True)
class GeometrySection:
    amplitude: float = 0.05
    half_width: float = 0.5
    points: int = 3


@dataclass(frozen=True)
class ContourSpec:
    """One configured contour record: kind plus its parameters."""

    kind: str
    params: Dict[str, Any]


@dataclass(frozen=True)
class AnalyticSection:
    rectangles: Tuple[float, ...] = (0.5, 1.0, 2.0)
    radii: Tuple[float, ...] = (1.0, 5.0)
    sweep: Tuple[float, ...] = tuple(float(c) for c in np.round(np.linspace(0.25, 3.0, 12), 6))
    contours: Tuple[ContourSpec, ...] = ()
    tolerance: float = 1e-6


@dataclass(frozen=True)
class DiracSection:
    mass: float = 1.0
    modes: int = 100
    k_range: float = 2.0
    charge: float = 0.3
    phi: float = 0.2
    A: Tuple[float, float, float] = (0.1, 0.0, -0.2)


@dataclass(frozen=True)
class ElectromagSection:
    phi: ScalarField
    A: VectorField
    points: int = 3
    levels: int = 5
    samples: int = 100
    curvature_fields: int = 5


@dataclass(frozen=True)
class YangMillsSection:
    epsilon: float = 1.0
    amplitude: float = 0.3
    gauge: Optional[Tuple[Tuple[float, ...], ...]] = None
    points: int = 3


@dataclass(frozen=True)
class ParticleSection:
    m: float = 1.0
    e: float = 0.0
    x: Tuple[float, ...] = (0.0, 0.5, 0.0, 0.0)
    v: Tuple[float, ...] = (0.0, 0.02, 0.0)

    def particle(self) -> TestParticle:
        return TestParticle(self.m, self.e, np.array(self.x), np.array(self.v))


@dataclass(frozen=True)
class CyclotronSection:
    B: float = 1.0
    speed: float = 0.1


@dataclass(frozen=True)
class WeakFieldSection:
    fields: WeakFieldConfig
    particle: ParticleSection = field(default_factory=ParticleSection)
    cyclotron: CyclotronSection = field(default_factory=CyclotronSection)
    dt: float = 1.0
    steps: int = 200


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario tree. Build with `parse_config` or `load_config`."""

    seed: int
    algebra: AlgebraSection
    finite_difference: FiniteDifferenceSection
    geometry: GeometrySection
    analytic: AnalyticSection
    dirac: DiracSection
    electromag: ElectromagSection
    yangmills: YangMillsSection
    weakfield: WeakFieldSection

    def rng(self, stream: int = 0) -> np.random.Generator:
        """Independent generator per consumer, all derived from the seed."""
        return np.random.default_rng([self.seed, stream])


# ----------------------------------------------------------------------------
# Field-level validators
# ----------------------------------------------------------------------------

def _section(raw: Dict[str, Any], name: str, allowed: set) -> Dict[str, Any]:
    body = raw.get(name, {})
    if body is None:
        body = {}
    if not isinstance(body, dict):
        raise ConfigError("expected a mapping", key=name)
    _reject_unknown(body, allowed, name)
    return body


def _reject_unknown(body: Dict[str, Any], allowed: set, prefix: str) -> None:
    unknown = set(body) - allowed
    if unknown:
        first = sorted(unknown)[0]
        key = f"{prefix}.{first}" if prefix else first
        raise ConfigError(
            f"unknown key (valid keys: {', '.join(sorted(allowed))})", key=key
        )


def _number(body: Dict[str, Any], name: str, prefix: str, default: float,
            positive: bool = False, minimum: Optional[float] = None) -> float:
    key = f"{prefix}.{name}"
    value = body.get(name, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", key=key)
    value = float(value)
    if not np.isfinite(value):
        raise ConfigError(f"must be finite, got {value}", key=key)
    if positive and value <= 0:
        raise ConfigError(f"must be positive, got {value}", key=key)
    if minimum is not None and value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", key=key)
    return value


def _integer(body: Dict[str, Any], name: str, prefix: str, default: int, minimum: int = 1) -> int:
    key = f"{prefix}.{name}" if prefix else name
    value = body.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", key=key)
    if value < minimum:
        raise ConfigError(f"must be >= {minimum}, got {value}", key=key)
    return value


def _vector(body: Dict[str, Any], name: str, prefix: str, default: Sequence[float],
            size: int) -> Tuple[float, ...]:
    key = f"{prefix}.{name}"
    value = body.get(name, list(default))
    if (not isinstance(value, list) or len(value) != size
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise ConfigError(f"expected a list of {size} numbers, got {value!r}", key=key)
    return tuple(float(v) for v in value)


def _number_list(body: Dict[str, Any], name: str, prefix: str, default: Sequence[float],
                 positive: bool = False) -> Tuple[float, ...]:
    key = f"{prefix}.{name}"
    value = body.get(name, list(default))
    if not isinstance(value, list) or not value:
        raise ConfigError("expected a non-empty list of numbers", key=key)
    out = []
    for index, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigError(f"expected a number, got {item!r}", key=f"{key}[{index}]")
        if positive and item <= 0:
            raise ConfigError(f"must be positive, got {item}", key=f"{key}[{index}]")
        out.append(float(item))
    return tuple(out)


# ----------------------------------------------------------------------------
# Section parsers
# ----------------------------------------------------------------------------

def _parse_algebra(raw: Dict[str, Any]) -> AlgebraSection:
    body = _section(raw, 'algebra', {'name', 'samples', 'tolerance'})
    name = body.get('name', 'natural')
    if name not in ALGEBRA_NAMES:
        raise ConfigError(f"must be one of {ALGEBRA_NAMES}, got {name!r}", key='algebra.name')
    return AlgebraSection(
        name=name,
        samples=_integer(body, 'samples', 'algebra', 1000),
        tolerance=_number(body, 'tolerance', 'algebra', 1e-12, positive=True),
    )


def _parse_finite_difference(raw: Dict[str, Any]) -> FiniteDifferenceSection:
    body = _section(raw, 'finite_difference', {'step', 'order', 'constant'})
    order = _integer(body, 'order', 'finite_difference', 2)
    if order not in (2, 4):
        raise ConfigError(f"must be 2 or 4, got {order}", key='finite_difference.order')
    return FiniteDifferenceSection(
        step=_number(body, 'step', 'finite_difference', 1e-2, positive=True),
        order=order,
        constant=_number(body, 'constant', 'finite_difference', 50.0, positive=True),
    )


def _parse_geometry(raw: Dict[str, Any]) -> GeometrySection:
    body = _section(raw, 'geometry', {'frame', 'half_width', 'points'})
    frame = body.get('frame', {}) or {}
    if not isinstance(frame, dict):
        raise ConfigError("expected a mapping", key='geometry.frame')
    _reject_unknown(frame, {'amplitude'}, 'geometry.frame')
    amplitude = _number(frame, 'amplitude', 'geometry.frame', 0.05, positive=True)
    half_width = _number(body, 'half_width', 'geometry', 0.5, positive=True)
    return GeometrySection(amplitude, half_width, _integer(body, 'points', 'geometry', 3, minimum=2))


def _parse_contour(record: Any, key: str) -> ContourSpec:
    if not isinstance(record, dict) or len(record) != 1:
        raise ConfigError(f"expected one of {{{', '.join(CONTOUR_KINDS)}: ...}}", key=key)
    kind, body = next(iter(record.items()))
    if kind not in CONTOUR_KINDS:
        raise ConfigError(f"unknown contour kind '{kind}'", key=key)
    key = f"{key}.{kind}"
    if kind in ('polyline', 'polynomial'):
        if (not isinstance(body, list) or len(body) < 2
                or any(not isinstance(p, list) or len(p) != 4 for p in body)
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for p in body for v in p)):
            raise ConfigError("expected a list of at least two 4-component points", key=key)
        rows = [[float(v) for v in p] for p in body]
        return ContourSpec(kind, {'points' if kind == 'polyline' else 'coefficients': rows})

    if not isinstance(body, dict):
        raise ConfigError("expected a mapping", key=key)
    _reject_unknown(body, {'center', 'radius', 'theta0', 'theta1', 'plane'}, key)
    plane = body.get('plane', [1, 2])
    if (not isinstance(plane, list) or len(plane) != 2 or plane[0] == plane[1]
            or any(not isinstance(p, int) or not 0 <= p < 4 for p in plane)):
        raise ConfigError("plane must be two distinct axes in 0..3", key=f"{key}.plane")
    return ContourSpec(kind, {
        'center': _vector(body, 'center', key, (0.0, 0.0, 0.0, 0.0), 4),
        'radius': _number(body, 'radius', key, 1.0, positive=True),
        'theta0': _number(body, 'theta0', key, -np.pi / 2),
        'theta1': _number(body, 'theta1', key, np.pi / 2),
        'plane': tuple(plane),
    })


def _parse_analytic(raw: Dict[str, Any]) -> AnalyticSection:
    body = _section(raw, 'analytic', {'rectangles', 'radii', 'sweep', 'contours', 'tolerance'})
    contours = body.get('contours', []) or []
    if not isinstance(contours, list):
        raise ConfigError("expected a list of contour records", key='analytic.contours')
    defaults = AnalyticSection()
    return AnalyticSection(
        rectangles=_number_list(body, 'rectangles', 'analytic', defaults.rectangles, positive=True),
        radii=_number_list(body, 'radii', 'analytic', defaults.radii, positive=True),
        sweep=_number_list(body, 'sweep', 'analytic', defaults.sweep, positive=True),
        contours=tuple(_parse_contour(c, f"analytic.contours[{i}]") for i, c in enumerate(contours)),
        tolerance=_number(body, 'tolerance', 'analytic', 1e-6, positive=True),
    )


def _parse_dirac(raw: Dict[str, Any]) -> DiracSection:
    body = _section(raw, 'dirac', {'mass', 'modes', 'k_range', 'charge', 'phi', 'A'})
    return DiracSection(
        mass=_number(body, 'mass', 'dirac', 1.0, minimum=0.0),
        modes=_integer(body, 'modes', 'dirac', 100),
        k_range=_number(body, 'k_range', 'dirac', 2.0, positive=True),
        charge=_number(body, 'charge', 'dirac', 0.3),
        phi=_number(body, 'phi', 'dirac', 0.2),
        A=_vector(body, 'A', 'dirac', (0.1, 0.0, -0.2), 3),
    )


DEFAULT_WAVE = {'wave': {'amplitude': 1.0, 'k': [0.6, 0.8, 0.0], 'omega': 1.0}}
DEFAULT_WAVE_SIN = {'wave': {'amplitude': 0.5, 'k': [0.6, 0.8, 0.0], 'omega': 1.0, 'kind': 'sin'}}


def _parse_electromag(raw: Dict[str, Any]) -> ElectromagSection:
    body = _section(raw, 'electromag',
                    {'potentials', 'points', 'levels', 'samples', 'curvature_fields'})
    potentials = body.get('potentials', {}) or {}
    if not isinstance(potentials, dict):
        raise ConfigError("expected a mapping", key='electromag.potentials')
    _reject_unknown(potentials, {'phi', 'A'}, 'electromag.potentials')
    return ElectromagSection(
        phi=parse_scalar_field(potentials.get('phi', DEFAULT_WAVE), 'electromag.potentials.phi'),
        A=parse_vector_field(potentials.get('A', [DEFAULT_WAVE_SIN, 0.0, 0.0]),
                             'electromag.potentials.A'),
        points=_integer(body, 'points', 'electromag', 3),
        levels=_integer(body, 'levels', 'electromag', 5, minimum=2),
        samples=_integer(body, 'samples', 'electromag', 100),
        curvature_fields=_integer(body, 'curvature_fields', 'electromag', 5),
    )


def _parse_yangmills(raw: Dict[str, Any]) -> YangMillsSection:
    body = _section(raw, 'yangmills', {'epsilon', 'amplitude', 'gauge', 'points'})
    gauge = body.get('gauge')
    if gauge is not None:
        if (not isinstance(gauge, list) or len(gauge) != 3
                or any(not isinstance(row, list) or len(row) != 5 for row in gauge)
                or any(isinstance(v, bool) or not isinstance(v, (int, float))
                       for row in gauge for v in row)):
            raise ConfigError("expected a 3x5 table: theta_a = c_a0 + c_a . z",
                              key='yangmills.gauge')
        gauge = tuple(tuple(float(v) for v in row) for row in gauge)
    epsilon = _number(body, 'epsilon', 'yangmills', 1.0)
    if epsilon == 0:
        raise ConfigError("coupling must be nonzero", key='yangmills.epsilon')
    return YangMillsSection(
        epsilon=epsilon,
        amplitude=_number(body, 'amplitude', 'yangmills', 0.3, positive=True),
        gauge=gauge,
        points=_integer(body, 'points', 'yangmills', 3),
    )


DEFAULT_PSI = {'polynomial': [[5e-4, [0, 2, 0, 0]], [5e-4, [0, 0, 2, 0]], [5e-4, [0, 0, 0, 2]]]}
# Uniform E along x and uniform B = 0.2 along z.
DEFAULT_WEAK_PHI = {'polynomial': [[0.05, [0, 1, 0, 0]]]}
DEFAULT_WEAK_A = [{'polynomial': [[-0.1, [0, 0, 1, 0]]]}, {'polynomial': [[0.1, [0, 1, 0, 0]]]}, 0.0]


def _parse_particle(body: Dict[str, Any]) -> ParticleSection:
    prefix = 'weakfield.particle'
    particle = body.get('particle', {}) or {}
    if not isinstance(particle, dict):
        raise ConfigError("expected a mapping", key=prefix)
    _reject_unknown(particle, {'m', 'e', 'x', 'v'}, prefix)
    defaults = ParticleSection()
    v = _vector(particle, 'v', prefix, defaults.v, 3)
    speed = float(np.linalg.norm(v))
    if speed >= 1.0:
        raise ConfigError(f"|v| = {speed:.6g} must be below 1 (units of c)", key=f"{prefix}.v")
    return ParticleSection(
        m=_number(particle, 'm', prefix, defaults.m, positive=True),
        e=_number(particle, 'e', prefix, defaults.e),
        x=_vector(particle, 'x', prefix, defaults.x, 4),
        v=v,
    )


def _parse_weakfield(raw: Dict[str, Any]) -> WeakFieldSection:
    prefix = 'weakfield'
    body = _section(raw, prefix, {'c', 'mu_g', 'mu_e', 'rho', 'guard', 'psi', 'phi', 'A',
                                  'particle', 'cyclotron', 'dt', 'steps'})
    c = _number(body, 'c', prefix, 1.0, positive=True)
    mu_e = _number(body, 'mu_e', prefix, 1e-3, positive=True)
    mu_g = _number(body, 'mu_g', prefix, 2.0 / c ** 2, positive=True)
    rho = _number(body, 'rho', prefix, 1.0 / (c ** 2 * mu_e), positive=True)
    target = 1.0 / c ** 2
    if abs(rho * mu_e - target) > 1e-9 * target:
        raise ConfigError(
            f"rho * mu_e = {rho * mu_e:.12g} but the Lorentz limit needs rho * mu_e = 1/c^2 "
            f"= {target:.12g}",
            key='weakfield.rho',
        )
    fields = WeakFieldConfig(
        psi=parse_scalar_field(body.get('psi', DEFAULT_PSI), f"{prefix}.psi"),
        phi=parse_scalar_field(body.get('phi', DEFAULT_WEAK_PHI), f"{prefix}.phi"),
        A=parse_vector_field(body.get('A', DEFAULT_WEAK_A), f"{prefix}.A"),
        c=c, mu_g=mu_g, mu_e=mu_e, rho=rho,
        guard=_number(body, 'guard', prefix, 1e-3, positive=True),
    )

    cyclotron = body.get('cyclotron', {}) or {}
    if not isinstance(cyclotron, dict):
        raise ConfigError("expected a mapping", key=f"{prefix}.cyclotron")
    _reject_unknown(cyclotron, {'B', 'speed'}, f"{prefix}.cyclotron")
    speed = _number(cyclotron, 'speed', f"{prefix}.cyclotron", 0.1, positive=True)
    if speed >= 1.0:
        raise ConfigError(f"must be below 1 (units of c), got {speed}",
                          key=f"{prefix}.cyclotron.speed")

    return WeakFieldSection(
        fields=fields,
        particle=_parse_particle(body),
        cyclotron=CyclotronSection(
            B=_number(cyclotron, 'B', f"{prefix}.cyclotron", 1.0, positive=True), speed=speed),
        dt=_number(body, 'dt', prefix, 1.0, positive=True),
        steps=_integer(body, 'steps', prefix, 200),
    )


# ----------------------------------------------------------------------------
# Entry points
# ----------------------------------------------------------------------------

def parse_config(raw: Optional[Dict[str, Any]], seed: Optional[int] = None,
                 require_seed: bool = True) -> ScenarioConfig:
    """Validate a raw key-value tree and build the scenario.

    Args:
        raw: Parsed file contents (None for an empty file)
        seed: Override for the file's seed (the --seed flag)
        require_seed: Reject trees without any seed

    Raises:
        ConfigError: naming the dotted key of the first problem found
    """
    raw = {} if raw is None else raw
    if not isinstance(raw, dict):
        raise ConfigError(f"top level must be a mapping, got {type(raw).__name__}")
    _reject_unknown(raw, TOP_LEVEL_KEYS, '')

    if 'seed' in raw:
        file_seed = _integer(raw, 'seed', '', 0, minimum=0)
        seed = file_seed if seed is None else seed
    if seed is None:
        if require_seed:
            raise ConfigError("a seed is required (set it in the file or pass --seed)", key='seed')
        seed = 0
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"must be a non-negative integer, got {seed!r}", key='seed')

    return ScenarioConfig(
        seed=seed,
        algebra=_parse_algebra(raw),
        finite_difference=_parse_finite_difference(raw),
        geometry=_parse_geometry(raw),
        analytic=_parse_analytic(raw),
        dirac=_parse_dirac(raw),
        electromag=_parse_electromag(raw),
        yangmills=_parse_yangmills(raw),
        weakfield=_parse_weakfield(raw),
    )


def read_config_file(config_path: Path) -> Dict[str, Any]:
    """Load the raw tree from a JSON or YAML file.

    Raises:
        ConfigError: for a missing file, unsupported suffix or parse error
            (with the line number where the parser reports one)
    """
    config_path = Path(config_path)
    if not config_path.exists():
        raise ConfigError(f"config file '{config_path}' not found")

    suffix = config_path.suffix.lower()
    text = config_path.read_text(encoding='utf-8')
    if suffix == '.json':
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{config_path.name} line {e.lineno}, column {e.colno}: {e.msg}")
    if suffix in ('.yaml', '.yml'):
        if not YAML_AVAILABLE:
            raise ConfigError("PyYAML not installed. Install with: pip install pyyaml")
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            where = f" line {mark.line + 1}, column {mark.column + 1}" if mark else ""
            problem = getattr(e, 'problem', None) or str(e)
            raise ConfigError(f"{config_path.name}{where}: {problem}")
    raise ConfigError(f"unsupported config file format '{suffix}'. Use .json or .yaml")


def load_config(config_path: Optional[Path], seed: Optional[int] = None,
                require_seed: bool = True) -> ScenarioConfig:
    """Read and validate a scenario file; with no path, defaults plus `seed`."""
    raw = read_config_file(config_path) if config_path is not None else {}
    return parse_config(raw, seed=seed, require_seed=require_seed)


def default_config(seed: int = 0) -> ScenarioConfig:
    return parse_config({}, seed=seed)
