import json

import pytest

from mixturecalc.cli import build_parser, main

QUICK = {
    'seed': 0,
    'dirac': {'modes': 10},
    'electromag': {'samples': 10, 'curvature_fields': 1, 'levels': 2},
    'weakfield': {'steps': 20},
}


@pytest.fixture
def quick_config(tmp_path):
    path = tmp_path / "quick.json"
    path.write_text(json.dumps(QUICK), encoding='utf-8')
    return path


def test_run_prints_json_report(quick_config, capsys):
    assert main(['run', 'dirac', '--config', str(quick_config)]) == 0
    out = capsys.readouterr()
    report = json.loads(out.out)
    assert report['suite'] == 'dirac' and report['pass'] is True
    assert 'wall_time' not in report
    assert 'Seed: 0' in out.err


def test_reruns_are_byte_identical(quick_config, capsys):
    main(['run', 'dirac', '--config', str(quick_config)])
    first = capsys.readouterr().out
    main(['run', 'dirac', '--config', str(quick_config)])
    assert capsys.readouterr().out == first


def test_run_writes_report_file(quick_config, tmp_path, capsys):
    out = tmp_path / "report.json"
    assert main(['run', 'yangmills', '--config', str(quick_config), '--out', str(out),
                 '--timing', '-v']) == 0
    data = json.loads(out.read_text(encoding='utf-8'))
    assert 'wall_time' in data
    assert capsys.readouterr().out == ''


def test_seed_flag_overrides_config(quick_config, capsys):
    assert main(['run', 'dirac', '--config', str(quick_config), '--seed', '3']) == 0
    assert 'Seed: 3' in capsys.readouterr().err


def test_failing_suite_exits_one(tmp_path, capsys):
    path = tmp_path / "broken.json"
    broken = {**QUICK, 'electromag': {'potentials': {'phi': {'polynomial': [[1.0, [0, 2, 0, 0]]]}},
                                      'samples': 10, 'curvature_fields': 1}}
    path.write_text(json.dumps(broken), encoding='utf-8')
    assert main(['run', 'maxwell', '--config', str(path)]) == 1
    assert json.loads(capsys.readouterr().out)['pass'] is False


@pytest.mark.parametrize("argv", [
    ['run', 'dirac'],
    ['run', 'no-such-suite', '--seed', '0'],
    ['demo', 'no-such-demo', '--seed', '0'],
])
def test_usage_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert 'Error' in capsys.readouterr().err


def test_bad_config_exits_two(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({'seed': 0, 'algebra': {'name': 'octonion'}}), encoding='utf-8')
    assert main(['run', 'algebra-identities', '--config', str(path)]) == 2
    assert 'algebra.name' in capsys.readouterr().err
    assert main(['run', 'dirac', '--config', str(tmp_path / "absent.json")]) == 2


def test_demo_writes_csv(quick_config, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(['demo', 'residue', '--config', str(quick_config)]) == 0
    lines = (tmp_path / "residue.csv").read_text(encoding='utf-8').splitlines()
    assert lines[0] == 'integral,re,im'
    assert len(lines) == 3

    out = tmp_path / "orbit.csv"
    assert main(['demo', 'cyclotron', '--config', str(quick_config), '--out', str(out)]) == 0
    assert len(out.read_text(encoding='utf-8').splitlines()) == QUICK['weakfield']['steps'] + 2


def test_validate(quick_config, tmp_path, capsys):
    assert main(['validate', str(quick_config)]) == 0
    assert '✓' in capsys.readouterr().out

    unseeded = tmp_path / "unseeded.json"
    unseeded.write_text('{}', encoding='utf-8')
    assert main(['validate', str(unseeded)]) == 0

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({'seed': 0, 'weakfield': {'rho': 1.0}}), encoding='utf-8')
    assert main(['validate', str(bad)]) == 1
    out = capsys.readouterr().out
    assert '✗' in out and 'weakfield.rho' in out


def test_parser_lists_suites():
    help_text = build_parser().format_help()
    assert 'validate' in help_text
    with pytest.raises(SystemExit):
        build_parser().parse_args(['run'])
