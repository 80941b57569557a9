import csv
import io
import json
import math
from pathlib import Path

import jsonschema
import pytest
from django.core.management import call_command
from django.core.management.base import CommandError

from apps.cli import suites
from apps.cli.management.commands.spectrum import Command as SpectrumCommand
from apps.cli.models import CheckResult
from apps.core.exceptions import HorizonExceeded
from pucci import settings
from pucci.logging import configure_logging

PUCCI_3D = ['--lambda', '1', '--Lambda', '2', '--dim', '3']
LAPLACIAN_3D = ['--lambda', '1', '--Lambda', '1', '--dim', '3']
SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / 'schemas' / 'output.schema.json').read_text()
)


def run(*args):
    out = io.StringIO()
    call_command(*args, stdout=out)
    return out.getvalue()


def table(text):
    """(comment lines as a dict, CSV rows as dicts)."""
    lines = text.splitlines()
    comments = dict(line[2:].split('=', 1) for line in lines if line.startswith('# '))
    rows = list(csv.DictReader(line for line in lines if not line.startswith('#')))
    return comments, rows


def check_document(document, row_keys):
    jsonschema.validate(document, SCHEMA)
    for row in document['rows']:
        assert set(row) == set(row_keys)


def test_spectrum_csv():
    _, rows = table(run('spectrum', *LAPLACIAN_3D, '--count', '2'))
    assert [(row['sign'], row['k']) for row in rows] == [('plus', '1'), ('plus', '2'), ('minus', '1'), ('minus', '2')]
    assert float(rows[0]['mu']) == pytest.approx(math.pi ** 2, rel=1e-8)
    assert float(rows[3]['beta']) == pytest.approx(2 * math.pi, rel=1e-8)
    assert float(rows[0]['dw_at_beta']) < 0


def test_spectrum_single_sign():
    _, rows = table(run('spectrum', *PUCCI_3D, '--count', '3', '--sign', 'minus'))
    assert [row['sign'] for row in rows] == ['minus'] * 3


def test_spectrum_json():
    document = json.loads(run('spectrum', *PUCCI_3D, '--count', '2', '--format', 'json', '--seed', '9'))
    check_document(document, ('sign', 'k', 'beta', 'mu', 'dw_at_beta'))
    assert document['meta']['command'] == 'spectrum'
    assert document['meta']['seed'] == 9
    assert document['meta']['params'] == {'lambda': 1.0, 'Lambda': 2.0, 'dim': 3, 'operator': 'max'}
    assert len(document['rows']) == 4


@pytest.mark.parametrize("path, value", [
    (('rows', 0, 'mu'), 'large'),
    (('rows', 0, 'k'), 0),
    (('meta', 'params', 'operator'), 'avg'),
    (('meta', 'seed'), -1),
])
def test_schema_rejects_malformed_output(path, value):
    document = json.loads(run('spectrum', *PUCCI_3D, '--count', '1', '--format', 'json'))
    target = document
    for key in path[:-1]:
        target = target[key]
    target[path[-1]] = value
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(document, SCHEMA)


def test_min_operator_swaps_the_columns():
    _, direct = table(run('spectrum', *PUCCI_3D, '--count', '2', '--sign', 'plus'))
    _, flipped = table(run('spectrum', *PUCCI_3D, '--count', '2', '--sign', 'minus', '--operator', 'min'))
    for a, b in zip(direct, flipped):
        assert float(a['mu']) == pytest.approx(float(b['mu']), rel=1e-12)


def test_missing_parameter_is_a_usage_error():
    with pytest.raises(CommandError) as e:
        run('spectrum', '--lambda', '1', '--dim', '3')
    assert e.value.returncode == 1
    assert 'Lambda' in str(e.value)


@pytest.mark.parametrize("args", [
    ['--lambda', '-1', '--Lambda', '2', '--dim', '3'],
    ['--lambda', '2', '--Lambda', '1', '--dim', '3'],
    [*PUCCI_3D, '--count', '0'],
    [*PUCCI_3D, '--format', 'xml'],
    [*PUCCI_3D, '--dim', 'three'],
])
def test_bad_arguments_exit_with_one(args):
    with pytest.raises(CommandError) as e:
        run('spectrum', *args)
    assert e.value.returncode == 1


def test_parse_error_from_the_command_line(capsys):
    with pytest.raises(SystemExit) as e:
        SpectrumCommand().run_from_argv(['manage.py', 'spectrum', '--lambda', '1', '--Lambda', '2', '--dim', 'three'])
    assert e.value.code == 1
    err = capsys.readouterr().err
    assert "invalid int value: 'three'" in err
    assert 'Traceback' not in err


def test_usage_error_from_the_command_line(capsys):
    with pytest.raises(SystemExit) as e:
        SpectrumCommand().run_from_argv(['manage.py', 'spectrum', '--lambda', '1', '--dim', '3'])
    assert e.value.code == 1
    assert 'CommandError: Lambda: is required' in capsys.readouterr().err


def test_numerical_failure_exits_with_two(monkeypatch):
    def fail(*args, **kwargs):
        raise HorizonExceeded("no zeros")

    monkeypatch.setattr('apps.cli.management.commands.spectrum.half_eigenvalues', fail)
    with pytest.raises(CommandError) as e:
        run('spectrum', *PUCCI_3D)
    assert e.value.returncode == 2


def test_config_file_fills_missing_flags(tmp_path):
    config = tmp_path / 'run.conf'
    config.write_text("# ellipticity\nlambda = 1\nLambda = 2\ndim = 3\ncount = 2\nsign = plus\n")
    _, rows = table(run('spectrum', '--config', str(config)))
    assert len(rows) == 2

    _, rows = table(run('spectrum', '--config', str(config), '--count', '1', '--sign', 'both'))
    assert [row['sign'] for row in rows] == ['plus', 'minus']


def test_bad_config_file_is_a_usage_error(tmp_path):
    config = tmp_path / 'run.conf'
    config.write_text("lambda 1\n")
    with pytest.raises(CommandError) as e:
        run('spectrum', '--config', str(config))
    assert e.value.returncode == 1


def test_output_file(tmp_path):
    target = tmp_path / 'spectrum.csv'
    assert run('spectrum', *PUCCI_3D, '--count', '1', '--out', str(target)) == ''
    _, rows = table(target.read_text())
    assert len(rows) == 2


@pytest.fixture
def reset_logging():
    yield
    configure_logging()


def test_log_file_from_the_flag(reset_logging, tmp_path):
    target = tmp_path / 'run.log'
    run('spectrum', *PUCCI_3D, '--count', '1', '--log-path', str(target))
    assert 'integrated mu=' in target.read_text()


def test_log_file_from_settings(reset_logging, monkeypatch, tmp_path):
    target = tmp_path / 'default.log'
    monkeypatch.setattr(settings, 'LOG_PATH', str(target))
    run('spectrum', *PUCCI_3D, '--count', '1')
    assert 'integrated mu=' in target.read_text()


def test_eigenfunction():
    comments, rows = table(run('eigenfunction', *LAPLACIAN_3D, '--samples', '50'))
    assert len(rows) == 51
    assert float(comments['mu']) == pytest.approx(math.pi ** 2, rel=1e-8)
    assert float(comments['boundary_derivative']) == pytest.approx(-1.0, rel=1e-7)
    assert float(rows[0]['value']) == 1.0
    assert abs(float(rows[-1]['value'])) <= 1e-10
    assert float(rows[25]['value']) == pytest.approx(math.sin(math.pi / 2) / (math.pi / 2), abs=1e-8)


def test_eigenfunction_json():
    document = json.loads(run('eigenfunction', *PUCCI_3D, '--k', '2', '--sign', 'minus', '--samples', '40', '--format', 'json'))
    check_document(document, ('r', 'value'))
    assert document['meta']['k'] == 2
    assert document['rows'][0] == {'r': 0.0, 'value': -1.0}


def test_eigenfunction_rejects_k():
    with pytest.raises(CommandError) as e:
        run('eigenfunction', *PUCCI_3D, '--k', '0')
    assert e.value.returncode == 1


def test_branch():
    comments, rows = table(run(
        'branch', *PUCCI_3D, '--nonlinearity', 'oddpower:c=-1,p=3',
        '--alpha-min', '0.01', '--alpha-max', '0.5', '--steps', '3',
    ))
    assert comments['termination_reason'] == 'AmplitudeLimit'
    assert [float(row['alpha']) for row in rows] == pytest.approx([0.01, math.sqrt(0.005), 0.5])
    assert {row['nodal_count'] for row in rows} == {'0'}


def test_branch_json():
    document = json.loads(run('branch', *PUCCI_3D, '--sign', 'minus', '--steps', '2', '--format', 'json'))
    check_document(document, ('alpha', 'mu', 'sup_norm', 'nodal_count', 'boundary_derivative'))
    assert document['meta']['termination_reason'] in SCHEMA['properties']['meta']['properties']['termination_reason']['enum']
    assert all(row['alpha'] < 0 for row in document['rows'])


def test_verify_interlacing():
    text = run('verify', '--suite', 'interlacing', *PUCCI_3D, '--count', '3')
    assert text.startswith('PASS interlacing lambda=1 Lambda=2 dim=3 margin=')


def test_verify_maxprinciple_on_a_small_grid():
    lines = run('verify', '--suite', 'maxprinciple', '--lambda', '1', '--Lambda', '2', '--dim', '2', '--n', '32').splitlines()
    assert len(lines) == 2
    assert all(line.startswith('PASS maxprinciple') for line in lines)
    assert 'side=b' in lines[1] and 'capped' in lines[1]


def test_verify_failure_exits_with_three(monkeypatch):
    monkeypatch.setitem(suites.SUITES, 'gap', lambda ctx: [
        CheckResult('gap', 'sharpness', False, 0.5, asserted=False),
        CheckResult('gap', 'ratio', False, -0.5),
    ])
    out = io.StringIO()
    with pytest.raises(CommandError) as e:
        call_command('verify', '--suite', 'gap', stdout=out)
    assert e.value.returncode == 3
    assert out.getvalue().splitlines() == ['INFO gap sharpness margin=0.5', 'FAIL gap ratio margin=-0.5']


@pytest.mark.slow
def test_verify_all_default_sets():
    run('verify')
