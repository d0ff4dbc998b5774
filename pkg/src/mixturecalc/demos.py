"""Demo scenarios that produce plot-ready tables."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List

from .analytic import circle_contour, corrected_path_integral, path_integral, residue_pair
from .config import ScenarioConfig
from .electromag import FourPotential
from .errors import UnknownDemo
from .geometry import FiniteDifferenceScheme
from .suites import (
    CUBIC,
    SQUARED_RADIUS,
    cyclotron_setup,
    gravity_only,
    maxwell_worst,
    rectangle_contour,
)
from .weakfield import DEFAULT_FD, TRAJECTORY_COLUMNS, TestParticle, energy, integrate_trajectory


@dataclass
class DemoTable:
    """Named table of float rows with a header."""

    name: str
    columns: List[str]
    rows: List[List[float]]


def path_integral_demo(cfg: ScenarioConfig) -> DemoTable:
    """Naive and corrected integrals over the rectangle family, one row per c."""
    rows = []
    for c in cfg.analytic.sweep:
        contour = rectangle_contour(c)
        naive = path_integral(SQUARED_RADIUS, contour).value.c
        corrected = corrected_path_integral(CUBIC, contour).value.c
        rows.append([c, naive[2].real, 2.0 * (c * c + 1.0 / 3.0), corrected[2].real])
    return DemoTable('path-integral', ['c', 'naive_e2', 'expected_e2', 'corrected_e2'], rows)


def residue_demo(cfg: ScenarioConfig) -> DemoTable:
    pair = residue_pair(circle_contour((0.0, 0.0), cfg.analytic.radii[0]))
    rows = [
        ['dz/z', pair.I_z.real, pair.I_z.imag],
        ['dz*/z*', pair.I_conj.real, pair.I_conj.imag],
    ]
    return DemoTable('residue', ['integral', 're', 'im'], rows)


def cyclotron_demo(cfg: ScenarioConfig) -> DemoTable:
    section = cfg.weakfield
    fields, particle, _, period = cyclotron_setup(section.fields, section.cyclotron.B,
                                                  section.cyclotron.speed)
    rows = integrate_trajectory(fields, particle, period / section.steps, section.steps, DEFAULT_FD)
    return DemoTable('cyclotron', list(TRAJECTORY_COLUMNS), [row.as_list() for row in rows])


def newton_demo(cfg: ScenarioConfig) -> DemoTable:
    """Neutral particle in the configured gravitational potential, with its energy."""
    section = cfg.weakfield
    fields = gravity_only(section.fields)
    start = section.particle.particle()
    neutral = TestParticle(start.m, 0.0, start.x, start.v)
    rows = integrate_trajectory(fields, neutral, section.dt, section.steps, DEFAULT_FD)
    table = []
    for row in rows:
        probe = TestParticle(neutral.m, 0.0, row.x, row.v)
        table.append(row.as_list() + [energy(fields, probe)])
    return DemoTable('newton', list(TRAJECTORY_COLUMNS) + ['energy'], table)


def maxwell_convergence_demo(cfg: ScenarioConfig) -> DemoTable:
    """Largest Maxwell residual per group while halving the step."""
    section = cfg.electromag
    h = FourPotential(section.phi, section.A)
    points = list(cfg.rng(4).uniform(-1.0, 1.0, (section.points, 4)))
    scheme = FiniteDifferenceScheme(cfg.finite_difference.step, 2)
    rows = []
    for _ in range(section.levels):
        worst = maxwell_worst(h, points, scheme)
        rows.append([scheme.step(0), *worst.values(), max(worst.values())])
        scheme = scheme.halved()
    return DemoTable('maxwell-convergence', ['h', 'gauss_E', 'ampere', 'gauss_B', 'faraday', 'max'],
                     rows)


DEMOS: Dict[str, Callable[[ScenarioConfig], DemoTable]] = {
    'path-integral': path_integral_demo,
    'residue': residue_demo,
    'cyclotron': cyclotron_demo,
    'newton': newton_demo,
    'maxwell-convergence': maxwell_convergence_demo,
}


def run_demo(name: str, cfg: ScenarioConfig) -> DemoTable:
    """Build the named demo table.

    Raises:
        UnknownDemo: if the name is not registered
    """
    if name not in DEMOS:
        raise UnknownDemo(f"Unknown demo '{name}' (available: {', '.join(DEMOS)})")
    return DEMOS[name](cfg)


def _cell(value) -> str:
    if isinstance(value, str):
        return value
    return repr(float(value))


def write_csv(table: DemoTable, path: Path) -> None:
    """Write the table as UTF-8 CSV with LF line endings."""
    path = Path(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_cell(value) for value in row])
