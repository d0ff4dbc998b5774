import json
from pathlib import Path

import numpy as np
import pytest

from mixturecalc.config import (
    default_config,
    load_config,
    parse_config,
    read_config_file,
)
from mixturecalc.errors import ConfigError

ROOT = Path(__file__).resolve().parent.parent


def test_defaults():
    cfg = default_config(seed=5)
    assert cfg.seed == 5
    assert cfg.algebra.name == 'natural'
    assert cfg.finite_difference.tolerance() == pytest.approx(5e-3)
    assert cfg.analytic.sweep[0] == 0.25 and cfg.analytic.sweep[-1] == 3.0
    assert len(cfg.analytic.sweep) == 12
    assert cfg.weakfield.fields.mu_g == pytest.approx(2.0)
    assert cfg.weakfield.fields.rho == pytest.approx(1000.0)
    assert cfg.yangmills.gauge is None


def test_seed_is_required_unless_waived():
    with pytest.raises(ConfigError) as info:
        parse_config({})
    assert info.value.key == 'seed'
    assert parse_config({}, require_seed=False).seed == 0
    assert parse_config(None, seed=4).seed == 4


def test_cli_seed_overrides_file_seed():
    assert parse_config({'seed': 3}).seed == 3
    assert parse_config({'seed': 3}, seed=9).seed == 9


def test_rng_streams_are_reproducible():
    cfg = default_config(seed=11)
    assert np.array_equal(cfg.rng(2).normal(size=5), cfg.rng(2).normal(size=5))
    assert not np.array_equal(cfg.rng(2).normal(size=5), cfg.rng(3).normal(size=5))
    assert not np.array_equal(cfg.rng(2).normal(size=5), default_config(12).rng(2).normal(size=5))


@pytest.mark.parametrize("raw, key", [
    ({'seed': -1}, 'seed'),
    ({'seed': True}, 'seed'),
    ({'seed': 0, 'bogus': 1}, 'bogus'),
    ({'seed': 0, 'algebra': {'name': 'octonion'}}, 'algebra.name'),
    ({'seed': 0, 'algebra': {'samples': 0}}, 'algebra.samples'),
    ({'seed': 0, 'algebra': []}, 'algebra'),
    ({'seed': 0, 'finite_difference': {'order': 3}}, 'finite_difference.order'),
    ({'seed': 0, 'finite_difference': {'step': -0.1}}, 'finite_difference.step'),
    ({'seed': 0, 'geometry': {'frame': {'size': 1}}}, 'geometry.frame.size'),
    ({'seed': 0, 'analytic': {'radii': [1.0, -2.0]}}, 'analytic.radii[1]'),
    ({'seed': 0, 'analytic': {'contours': [{'spiral': []}]}}, 'analytic.contours[0]'),
    ({'seed': 0, 'analytic': {'contours': [{'polyline': [[0, 0, 0, 0]]}]}},
     'analytic.contours[0].polyline'),
    ({'seed': 0, 'analytic': {'contours': [{'arc': {'plane': [1, 1]}}]}},
     'analytic.contours[0].arc.plane'),
    ({'seed': 0, 'dirac': {'A': [0.1, 0.2]}}, 'dirac.A'),
    ({'seed': 0, 'electromag': {'potentials': {'phi': {'wave': {'kind': 'tan'}}}}},
     'electromag.potentials.phi.wave.kind'),
    ({'seed': 0, 'yangmills': {'gauge': [[0.0] * 5] * 2}}, 'yangmills.gauge'),
    ({'seed': 0, 'yangmills': {'epsilon': 0}}, 'yangmills.epsilon'),
    ({'seed': 0, 'weakfield': {'rho': 5.0}}, 'weakfield.rho'),
    ({'seed': 0, 'weakfield': {'particle': {'v': [0.8, 0.8, 0.0]}}}, 'weakfield.particle.v'),
    ({'seed': 0, 'weakfield': {'cyclotron': {'speed': 1.5}}}, 'weakfield.cyclotron.speed'),
    ({'seed': 0, 'weakfield': {'A': [0.0, 0.0]}}, 'weakfield.A'),
])
def test_errors_name_the_offending_key(raw, key):
    with pytest.raises(ConfigError) as info:
        parse_config(raw)
    assert info.value.key == key
    assert key in str(info.value)


def test_contour_records():
    raw = {'seed': 0, 'analytic': {'contours': [
        {'polyline': [[0, 0, -1, 0], [0, 1, 0, 0]]},
        {'arc': {'radius': 2.0}},
        {'polynomial': [[0, 0, -1, 0], [0, 0, 2, 0]]},
    ]}}
    kinds = [spec.kind for spec in parse_config(raw).analytic.contours]
    assert kinds == ['polyline', 'arc', 'polynomial']
    arc = parse_config(raw).analytic.contours[1]
    assert arc.params['radius'] == 2.0 and arc.params['plane'] == (1, 2)


def test_consistent_couplings_are_accepted():
    cfg = parse_config({'seed': 0, 'weakfield': {'c': 2.0, 'mu_e': 0.01, 'rho': 25.0}})
    assert cfg.weakfield.fields.mu_g == pytest.approx(0.5)


def test_json_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps({'seed': 7, 'dirac': {'mass': 2.0}}), encoding='utf-8')
    cfg = load_config(path)
    assert cfg.seed == 7
    assert cfg.dirac.mass == 2.0


def test_yaml_file(tmp_path):
    pytest.importorskip('yaml')
    path = tmp_path / "scenario.yaml"
    path.write_text("seed: 2\nalgebra:\n  name: complex-plane\n", encoding='utf-8')
    assert load_config(path).algebra.name == 'complex-plane'


def test_parse_errors_report_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "seed": 0,\n  "algebra": {\n}', encoding='utf-8')
    with pytest.raises(ConfigError, match="line"):
        read_config_file(path)


def test_missing_and_unsupported_files(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        read_config_file(tmp_path / "absent.json")
    path = tmp_path / "scenario.toml"
    path.write_text("seed = 0\n", encoding='utf-8')
    with pytest.raises(ConfigError, match="unsupported"):
        read_config_file(path)


def test_example_json_is_valid():
    cfg = load_config(ROOT / "config_example.json")
    assert cfg.seed == 0
    assert len(cfg.analytic.contours) == 2


def test_example_yaml_is_valid():
    pytest.importorskip('yaml')
    cfg = load_config(ROOT / "config_example.yaml")
    assert [spec.kind for spec in cfg.analytic.contours] == ['polyline', 'arc', 'polynomial']
    assert cfg.yangmills.gauge is not None
