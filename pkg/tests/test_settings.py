"""
Pytest test suite for runtime configuration and the error hierarchy
"""

import logging
from pathlib import Path

import pytest

from trigonal_knots.config.settings import Settings, configure_logging
from trigonal_knots.core.errors import (
    DegenerateCurve,
    InvalidPolynomial,
    NotTwoBridgeTrigonal,
    StepBudgetExceeded,
    TrigonalError,
    UnknownToken,
)


def test_settings_from_env(monkeypatch, tmp_path):
    """Environment variables override the defaults."""
    monkeypatch.setenv('TRIGONAL_SEED', '11')
    monkeypatch.setenv('TRIGONAL_BFS_BUDGET', '50')
    monkeypatch.setenv('TRIGONAL_OUTPUT_DIR', str(tmp_path))
    settings = Settings.from_env()
    assert settings.seed == 11
    assert settings.bfs_budget == 50
    assert settings.output_dir == tmp_path


def test_resolve_output_bare_name(tmp_path):
    """Bare names go to the output directory, which is created."""
    out = tmp_path / 'out'
    path = Settings(output_dir=out).resolve_output('curve.svg')
    assert path == out / 'curve.svg'
    assert out.is_dir()


def test_resolve_output_keeps_paths(tmp_path):
    """Names with a directory part are used as given."""
    target = tmp_path / 'pictures' / 'braid.svg'
    assert Settings(output_dir=tmp_path / 'unused').resolve_output(str(target)) == target
    assert not (tmp_path / 'unused').exists()


def test_configure_logging_verbose(tmp_path):
    """Verbose mode logs at DEBUG into the configured file."""
    log_file = tmp_path / 'run.log'
    configure_logging(Settings(log_file=str(log_file)), verbose=True)
    logging.getLogger('trigonal_knots.test').debug('hello')
    assert logging.getLogger().level == logging.DEBUG
    for handler in logging.getLogger().handlers:
        handler.flush()
    assert 'DEBUG | hello' in Path(log_file).read_text()


@pytest.mark.parametrize("error, code", [
    (InvalidPolynomial("bad"), 2),
    (UnknownToken("y3", 1), 2),
    (DegenerateCurve("tie"), 3),
    (NotTwoBridgeTrigonal("unknot"), 3),
])
def test_exit_codes(error, code):
    """Input errors exit with 2, refused degenerate inputs with 3."""
    assert isinstance(error, TrigonalError)
    assert error.exit_code == code


def test_error_to_dict():
    """Errors serialize with their type and details."""
    payload = StepBudgetExceeded(10, 4).to_dict()
    assert payload['success'] is False
    assert payload['error_type'] == 'StepBudgetExceeded'
    assert payload['details'] == {'max_steps': 10, 'frontier_size': 4}
