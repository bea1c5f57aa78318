"Tests for the ExperimentDB"

import pytest

from skelsign.work_db import ExperimentDB, use_db
from skelsign.work_item import Job, JobOutcome, JobResult, Regime

# pylint: disable=W0621,C0111


@pytest.fixture
def experiment_db():
    with use_db(":memory:", ExperimentDB.Mode.create) as db:
        yield db


def _result(accuracy=0.75, output=None):
    return JobResult(outcome=JobOutcome.NORMAL, test_accuracy=accuracy, report="test-accuracy = 0.75", output=output)


def test_empty_db_has_no_pending_jobs(experiment_db):
    assert not experiment_db.pending_jobs


def test_find_pending_job(experiment_db):
    job = Job.for_run("ssl", "cnn", 3)
    experiment_db.add_job(job)
    assert experiment_db.pending_jobs == (job,)


def test_job_id_is_derived_from_settings():
    job = Job.for_run(Regime.SL_LOW, "fc", 2)
    assert job.job_id == "sl-low-fc-2"


def test_jobs_keep_insertion_order(experiment_db):
    jobs = [Job.for_run(regime, "cnn", seed) for seed in (4, 1) for regime in ("ssl", "sl")]
    experiment_db.add_jobs(jobs[:2])
    experiment_db.add_jobs(jobs[2:])
    assert list(experiment_db.jobs) == jobs


def test_jobs_with_results_are_not_pending(experiment_db):
    experiment_db.add_job(Job.for_run("sl", "fc", 0))
    experiment_db.set_result("sl-fc-0", _result())
    assert not experiment_db.pending_jobs
    assert experiment_db.completed_jobs[0][1].test_accuracy == 0.75


def test_set_result_throws_KeyError_if_no_matching_job(experiment_db):
    with pytest.raises(KeyError):
        experiment_db.set_result("sl-fc-0", _result())


def test_set_multiple_results_works(experiment_db):
    experiment_db.add_job(Job.for_run("sl", "fc", 0))
    experiment_db.set_result("sl-fc-0", _result(output="first result"))
    experiment_db.set_result("sl-fc-0", _result(output="second result"))

    results = [r for job_id, r in experiment_db.results if job_id == "sl-fc-0"]
    assert len(results) == 1
    assert results[0].output == "second result"


def test_exception_results_are_stored(experiment_db):
    experiment_db.add_job(Job.for_run("ssl", "fc", 1))
    experiment_db.set_result("ssl-fc-1", JobResult(outcome=JobOutcome.EXCEPTION, output="Traceback"))
    (_, result), = experiment_db.completed_jobs
    assert not result.succeeded
    assert result.test_accuracy is None


def test_normal_result_needs_an_accuracy():
    with pytest.raises(ValueError):
        JobResult(outcome=JobOutcome.NORMAL)


def test_counts(experiment_db):
    experiment_db.add_jobs(Job.for_run("sl", "cnn", seed) for seed in range(10))
    experiment_db.set_result("sl-cnn-3", _result())
    assert experiment_db.num_jobs == 10
    assert experiment_db.num_results == 1
    assert len(experiment_db.pending_jobs) == 9


def test_clear_removes_jobs_and_results(experiment_db):
    experiment_db.add_jobs(Job.for_run("sl", "cnn", seed) for seed in range(3))
    experiment_db.set_result("sl-cnn-0", _result())
    experiment_db.clear()
    assert experiment_db.num_jobs == 0
    assert experiment_db.num_results == 0


def test_opening_a_missing_file_raises(tmpdir_path):
    with pytest.raises(FileNotFoundError):
        ExperimentDB(tmpdir_path / "missing.sqlite", ExperimentDB.Mode.open)


def test_results_survive_reopening(session):
    with use_db(session) as db:
        db.add_job(Job.for_run("sl", "lstm", 5))
        db.set_result("sl-lstm-5", _result(0.5))
    with use_db(session, ExperimentDB.Mode.open) as db:
        (job, result), = db.completed_jobs
    assert job.regime == Regime.SL
    assert result.test_accuracy == 0.5
