"""Command line runs: exit codes, report files and determinism"""
import csv
import json
import os

import pytest

import main
from config import Config
from report_writer import CONVERGENCE_FILE, FIBERS_FILE, PLOTS_DIR, REPORT_FILE, TIMINGS_FILE

SCENARIOS = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'scenarios')


def write_scenario(tmp_path, name='small.json', **overrides):
    data = {
        'name': 'small',
        'surface': {'model': 'FlatTorus', 'level': 1},
        'checks': ['eq4'],
        'N': [256],
        'seeds': [0],
        'cycles': {'count': 2},
        'fields': {'count': 1},
    }
    data.update(overrides)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def read_report(out_dir):
    with open(os.path.join(out_dir, REPORT_FILE)) as handle:
        return json.load(handle)


def test_torus_eq4_scenario_passes(out_dir):
    code = main.main(['run', os.path.join(SCENARIOS, 'torus_eq4.json'), '--out-dir', str(out_dir)])
    assert code == main.EXIT_OK
    report = read_report(out_dir)
    assert report['passed'] is True
    assert report['seed'] == 0
    assert [r['check'] for r in report['records']] == ['eq4']
    assert report['records'][0]['params']['N'] == 256
    assert report['records'][0]['params']['seed'] == 0
    assert os.path.exists(os.path.join(out_dir, TIMINGS_FILE))


def test_report_is_byte_identical_across_runs(tmp_path):
    config = write_scenario(tmp_path, checks=['eq4', 'prop1'], options={'prop1': {'pairs': 2}})
    first, second = tmp_path / 'a', tmp_path / 'b'
    assert main.main(['run', config, '--out-dir', str(first)]) == main.EXIT_OK
    assert main.main(['run', config, '--out-dir', str(second)]) == main.EXIT_OK
    assert (first / REPORT_FILE).read_bytes() == (second / REPORT_FILE).read_bytes()
    assert (first / REPORT_FILE).read_text().endswith('\n')


def test_seed_override(tmp_path, out_dir):
    config = write_scenario(tmp_path)
    assert main.main(['run', config, '--seed', '5', '--out-dir', str(out_dir)]) == main.EXIT_OK
    report = read_report(out_dir)
    assert report['seed'] == 5
    assert all(r['params']['seed'] == 5 for r in report['records'])


@pytest.mark.parametrize('overrides', [{'N': [15]}, {'checks': ['eq9']}, {'tau': -1.0}])
def test_invalid_scenario_exits_two(tmp_path, out_dir, overrides):
    config = write_scenario(tmp_path, **overrides)
    assert main.main(['run', config, '--out-dir', str(out_dir)]) == main.EXIT_INVALID
    assert not os.path.exists(os.path.join(out_dir, REPORT_FILE))


def test_missing_file_and_bad_tolerance_scale(tmp_path, out_dir):
    assert main.main(['run', str(tmp_path / 'nope.json')]) == main.EXIT_INVALID
    config = write_scenario(tmp_path)
    assert main.main(['run', config, '--tol-scale', '0', '--out-dir', str(out_dir)]) == main.EXIT_INVALID


def test_crashing_check_becomes_a_failed_record(tmp_path, out_dir):
    # random sphere samples need level >= 2
    config = write_scenario(tmp_path, surface={'model': 'RoundSphere', 'level': 1})
    assert main.main(['run', config, '--out-dir', str(out_dir)]) == main.EXIT_FAILED
    report = read_report(out_dir)
    assert report['passed'] is False
    record = report['records'][0]
    assert record['pass'] is False and record['lhs'] is None
    assert 'level >= 2' in record['diagnostics']


def test_fiber_table_and_plots_are_written(tmp_path, out_dir):
    config = write_scenario(tmp_path, checks=['bs-fibers'],
                            options={'bs-fibers': {'torus_levels': [2], 'sphere_levels': [3]}})
    assert main.main(['run', config, '--out-dir', str(out_dir)]) == main.EXIT_OK
    with open(os.path.join(out_dir, FIBERS_FILE), newline='') as handle:
        rows = list(csv.reader(handle))
    assert len(rows) == 1 + 2 + 2
    assert os.path.exists(os.path.join(out_dir, PLOTS_DIR, 'bs-fibers.dat'))


def test_enabled_checks_filter(tmp_path, out_dir, monkeypatch):
    monkeypatch.setattr(Config, 'ENABLED_CHECKS', {'moduli'})
    config = write_scenario(tmp_path, checks=['eq4', 'toeplitz'], options={'toeplitz': {'levels': [1]}})
    result = main.run_scenario(config, out_dir=str(out_dir))
    assert {r.check_id for r in result.records} == {'eq4'}
    monkeypatch.setattr(Config, 'ENABLED_CHECKS', {'real'})
    assert main.main(['run', config, '--out-dir', str(out_dir)]) == main.EXIT_INVALID


def test_list_checks(capsys):
    assert main.main(['list-checks']) == main.EXIT_OK
    printed = capsys.readouterr().out
    for check_id in ('prop1', 'eq4', 'eq5', 'bs-fibers', 'prop3', 'toeplitz', 'sk-bracket', 'prop4',
                     'boundary-scan', 'convergence'):
        assert check_id in printed


def test_converge_over_refinement_report(tmp_path):
    config = write_scenario(tmp_path, checks=['convergence'], N=[64, 128, 256],
                            options={'convergence': {'studies': ['area']}})
    run_dir = tmp_path / 'run'
    assert main.main(['run', config, '--out-dir', str(run_dir)]) == main.EXIT_OK
    fit_dir = tmp_path / 'fit'
    assert main.main(['converge', str(run_dir / REPORT_FILE), '--out-dir', str(fit_dir)]) == main.EXIT_OK
    with open(fit_dir / CONVERGENCE_FILE, newline='') as handle:
        rows = list(csv.DictReader(handle))
    assert [int(r['N']) for r in rows] == [64, 128, 256]
    assert all(r['flagged'] == '0' for r in rows)
    assert float(rows[0]['order']) == pytest.approx(2.0, abs=0.05)


def test_converge_needs_three_levels(tmp_path, out_dir):
    config = write_scenario(tmp_path)
    assert main.main(['run', config, '--out-dir', str(out_dir)]) == main.EXIT_OK
    assert main.main(['converge', os.path.join(out_dir, REPORT_FILE)]) == main.EXIT_INVALID
    broken = tmp_path / 'broken.json'
    broken.write_text('not json')
    assert main.main(['converge', str(broken)]) == main.EXIT_INVALID


def test_unknown_command_is_rejected():
    with pytest.raises(SystemExit):
        main.main(['frobnicate'])
