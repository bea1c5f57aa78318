"Tests for skelsign-report."

import itertools
import subprocess
import sys

import pytest


SHOW_OUTPUT_OPTIONS = (None, "--show-output", "--no-show-output")
SHOW_REPORT_OPTIONS = (None, "--show-report", "--no-show-report")
SHOW_PENDING_OPTIONS = (None, "--show-pending", "--no-show-pending")
OPTION_COMBINATIONS = (
    list(filter(None, combo))
    for combo in itertools.product(SHOW_OUTPUT_OPTIONS, SHOW_REPORT_OPTIONS, SHOW_PENDING_OPTIONS)
)


@pytest.fixture(params=OPTION_COMBINATIONS)
def options(request):
    "All valid combinations of command line options for skelsign-report."
    return request.param


def _report(session, *options):
    command = [sys.executable, "-m", "skelsign.tools.report"] + list(options) + [str(session)]
    return subprocess.run(command, cwd=str(session.parent), capture_output=True, text=True, check=True).stdout


def test_smoke_test_for_report_on_initialized_session(initialized_session, options):
    assert "no jobs completed" in _report(initialized_session.session, *options)


def test_report_on_executed_session(execd_session):
    output = _report(execd_session.session)
    assert "total jobs: 6" in output
    assert "complete: 5 (83.33%)" in output
    assert "sl mean test accuracy: 95.00% over 2 runs" in output
    assert "ssl mean test accuracy: 75.00% over 2 runs" in output
    assert "outcome: exception" in output
    assert "boom" not in output


def test_report_shows_output_and_pending(execd_session):
    output = _report(execd_session.session, "--show-output", "--show-pending", "--show-report")
    assert "boom" in output
    assert "test-accuracy = 0.9" in output
    assert output.count("[job-id] ssl-cnn-2") == 1
