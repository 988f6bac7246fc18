"""
Pytest test suite for the command line interface
"""

import json

import pytest

from trigonal_knots.core.certifier import ScanResult
from trigonal_knots.core.twobridge import Torus
from trigonal_knots.ui import cli


@pytest.fixture(autouse=True)
def isolated_output(tmp_path, monkeypatch):
    monkeypatch.setenv('TRIGONAL_OUTPUT_DIR', str(tmp_path))
    monkeypatch.delenv('TRIGONAL_LOG_FILE', raising=False)
    return tmp_path


def run_json(capsys, *argv):
    code = cli.main([*argv, '--json'])
    return code, json.loads(capsys.readouterr().out)


def test_example25(capsys):
    """The worked example passes every check."""
    code, payload = run_json(capsys, 'example25')
    assert code == 0
    assert payload['success'] is True
    assert payload['outputs']['scheme'] == "o1 <1 x2 x1 >1 v"
    assert payload['outputs']['traced_scheme'] == "o1 <2 x1 x1 >1 v"
    assert {c['name'] for c in payload['checks']} == {
        'traced_scheme', 'scheme', 'braid', 'trivial', 'traced_braid_agrees'}
    assert all(c['passed'] for c in payload['checks'])


def test_parse(capsys):
    """Parse reports counts and the branch history."""
    code, payload = run_json(capsys, 'parse', 'o1 <2 x1 >2 v')
    assert code == 0
    assert payload['outputs']['branches'] == [1, 1, 3, 3, 1]
    assert payload['outputs']['alternating'] is True


def test_parse_error_exit_code(capsys):
    """Malformed schemes exit with 2 and a structured error."""
    code, payload = run_json(capsys, 'parse', 'x1 v')
    assert code == 2
    assert payload['success'] is False
    assert payload['error_type'] == 'BranchCountViolation'
    assert payload['details']['position'] == 0


def test_scheme2braid(capsys):
    """The worked scheme gives a trivial braid."""
    code, payload = run_json(capsys, 'scheme2braid', 'o1 <1 x2 x1 >1 v', '--b', '4')
    assert code == 0
    assert payload['outputs']['trivial'] is True
    assert payload['outputs']['length'] == 14


def test_trace_degenerate_exit_code(capsys):
    """A cusp exits with 3."""
    code, payload = run_json(capsys, 'trace', '--P', '0,0,0,1', '--Q', '0,0,1')
    assert code == 3
    assert payload['error_type'] == 'DegenerateCurve'


def test_trace_cheb_shortcut(capsys):
    """--cheb sets the height; P defaults to T_3."""
    code, payload = run_json(capsys, 'trace', '--cheb', '4@2/5')
    assert code in (0, cli.CHECK_FAILED)
    assert payload['inputs'] == {'P': 'cheb:3', 'Q': 'cheb:4@2/5'}
    assert payload['outputs']['scheme'] == "o1 <2 x1 x1 >1 v"


def test_trace_writes_svg(capsys, isolated_output):
    """--svg draws the traced curve next to the JSON."""
    code, payload = run_json(capsys, 'trace', '--cheb', '4', '--svg', 'curve.svg')
    assert code in (0, cli.CHECK_FAILED)
    text = (isolated_output / 'curve.svg').read_text()
    assert payload['outputs']['svg'] == str(isolated_output / 'curve.svg')
    assert text.count('class="event"') == len(payload['outputs']['events'])
    assert 'class="strand"' in text


def test_trace_rejects_cheb_with_q(capsys):
    """A height given twice is an input error."""
    assert cli.main(['trace', '--cheb', '4', '--Q', '0,0,1']) == 2


def test_trace_needs_input(capsys):
    """Neither a map nor a random batch is an input error."""
    assert cli.main(['trace']) == 2
    assert 'error' in capsys.readouterr().err


def test_trace_random_batch(capsys):
    """Every map of a seeded batch is either analyzed or refused."""
    code, payload = run_json(capsys, 'trace', '--random', '5', '--seed', '7', '--b-max', '5')
    assert code in (0, cli.CHECK_FAILED)
    outputs = payload['outputs']
    assert outputs['analyzed'] + outputs['refused'] == 5


def test_certify_infeasible(capsys):
    """C(5) is infeasible at b = 6."""
    code, payload = run_json(capsys, 'certify', '--torus', '5', '--b', '6')
    assert code == 0
    assert payload['outputs']['verdict'] == 'infeasible'


def test_scan_check_failure(capsys, mocker):
    """A scan that never becomes feasible fails its check."""
    mocker.patch.object(cli.certifier, 'lower_bound_scan',
                        return_value=ScanResult(Torus(3), ()))
    code, payload = run_json(capsys, 'scan', '--torus', '3')
    assert code == cli.CHECK_FAILED
    assert payload['success'] is False


def test_lattice_text_output(capsys):
    """Plain text output lists outputs and checks."""
    assert cli.main(['lattice', '--b', '6']) == 0
    out = capsys.readouterr().out
    assert 'interior_points: 4' in out
    assert '[PASS] pick_formula' in out


def test_bounds(capsys):
    """Alternating bound below degree six is refused."""
    code, payload = run_json(capsys, 'bounds', '--degree', '5', '--alternating')
    assert code == 2
    assert payload['error_type'] == 'AlternatingBoundRequiresD6'


def test_svg_scheme(capsys, isolated_output):
    """Bare file names are written to the output directory."""
    code, payload = run_json(capsys, 'svg', 'scheme', '<2 x1 >2 v', '--out', 'scheme.svg')
    assert code == 0
    path = isolated_output / 'scheme.svg'
    assert payload['outputs']['path'] == str(path)
    assert '<svg' in path.read_text()


def test_run_report_success():
    """A report succeeds only when every check passes."""
    report = cli.RunReport('demo')
    assert report.success
    report.check('first', True)
    report.check('second', False, reason='x')
    assert not report.success
    assert report.to_dict()['checks'][1] == {
        'name': 'second', 'passed': False, 'details': {'reason': 'x'}}
