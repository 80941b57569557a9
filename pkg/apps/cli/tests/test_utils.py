import io
import json

from django.core.management.base import OutputWrapper

from apps.cli.utils import BRANCH_HEADERS, emit, format_value, render_csv, render_json


def test_format_value_round_trips():
    assert format_value(0.1) == '0.10000000000000001'
    assert float(format_value(2.0 / 3.0)) == 2.0 / 3.0
    assert format_value(3) == '3'
    assert format_value('plus') == 'plus'


def test_render_csv():
    rows = [{'alpha': 0.5, 'mu': 10.0, 'sup_norm': 0.5, 'nodal_count': 0, 'boundary_derivative': -1.5}]
    text = render_csv(BRANCH_HEADERS, rows, preamble=(('mu', 2.0),), trailer=(('termination_reason', 'RootLost'),))
    assert text.splitlines() == [
        '# mu=2',
        'alpha,mu,sup_norm,nodal_count,boundary_derivative',
        '0.5,10,0.5,0,-1.5',
        '# termination_reason=RootLost',
    ]


def test_render_json():
    document = json.loads(render_json({'command': 'branch'}, iter([{'alpha': 1.0}])))
    assert document == {'meta': {'command': 'branch'}, 'rows': [{'alpha': 1.0}]}


def test_emit(tmp_path):
    stdout = io.StringIO()
    emit('a\n', None, OutputWrapper(stdout))
    assert stdout.getvalue() == 'a\n'

    target = tmp_path / 'out.csv'
    emit('b\n', str(target), OutputWrapper(stdout))
    assert target.read_text() == 'b\n'
    assert stdout.getvalue() == 'a\n'
