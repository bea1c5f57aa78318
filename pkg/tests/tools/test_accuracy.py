"Tests for skelsign-accuracy."

import subprocess
import sys

import pytest

from skelsign.tools.accuracy import confidence_half_width, mean_accuracy


def _accuracy(session, *options):
    command = [sys.executable, "-m", "skelsign.tools.accuracy"] + list(options) + [str(session)]
    return subprocess.run(command, cwd=str(session.parent), capture_output=True, text=True)


def test_smoke_test_for_initialized_session(initialized_session):
    proc = _accuracy(initialized_session.session)
    assert proc.returncode == 0
    assert float(proc.stdout) == 0


def test_mean_over_all_regimes(execd_session):
    proc = _accuracy(execd_session.session)
    assert proc.returncode == 0
    assert float(proc.stdout) == 85.0


def test_mean_of_one_regime(execd_session):
    proc = _accuracy(execd_session.session, "--regime", "ssl")
    assert float(proc.stdout) == 75.0


def test_estimate_brackets_the_mean(execd_session):
    proc = _accuracy(execd_session.session, "--estimate", "--regime", "sl")
    lower, mean, upper = (float(v) for v in proc.stdout.split())
    assert lower < mean == 95.0 < upper
    assert mean - lower == pytest.approx(upper - mean, abs=0.011)


@pytest.mark.parametrize("fail_under, code", [(80, 0), (90, 1)])
def test_fail_under(execd_session, fail_under, code):
    assert _accuracy(execd_session.session, "--fail-under", str(fail_under)).returncode == code


def test_missing_session_is_a_usage_error(tmpdir_path):
    assert _accuracy(tmpdir_path / "missing.sqlite").returncode == 2


def test_empty_values():
    assert mean_accuracy([]) == 0.0
    assert confidence_half_width([70.0], 1.96) == 0.0


def test_half_width():
    assert confidence_half_width([80.0, 80.0, 100.0, 100.0], 1.96) == pytest.approx(1.96 * (400 / 3 / 4) ** 0.5)
