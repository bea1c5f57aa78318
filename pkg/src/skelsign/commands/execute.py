"Implementation of the 'execute' command."
import logging
import os
import traceback

from skelsign.commands.runs import load_samples, run_regime
from skelsign.config import ConfigDict
from skelsign.progress import progress_reporter
from skelsign.work_item import JobOutcome, JobResult

log = logging.getLogger(__name__)

_progress_messages = {}  # pylint: disable=invalid-name


def _update_progress(experiment_db):
    total = experiment_db.num_jobs
    message = "{} out of {} completed".format(experiment_db.num_results, total)
    _progress_messages[experiment_db.name()] = message


def _report_progress(stream):
    for db_name, progress_message in _progress_messages.items():
        session = os.path.splitext(db_name)[0]
        print("{session} : {progress_message}".format(session=session, progress_message=progress_message), file=stream)


def run_job(job, samples, config):
    """Run ``job`` and capture its outcome. Exceptions are recorded, not raised."""
    try:
        report = run_regime(job.regime, job.model, job.seed, samples, config)
    except Exception:  # pylint: disable=broad-except
        log.exception("Job %s failed", job.job_id)
        return JobResult(outcome=JobOutcome.EXCEPTION, output=traceback.format_exc())
    return JobResult(outcome=JobOutcome.NORMAL, test_accuracy=report.test_accuracy, report=report.to_toml())


def execute(experiment_db, config: ConfigDict):
    """Run every job of ``experiment_db`` that has no result yet, recording each result as it completes."""
    pending = experiment_db.pending_jobs
    if not pending:
        log.info("No pending jobs")
        return

    samples = load_samples(config.data_dir, config.labels, config.t_max)
    with progress_reporter(_report_progress):
        _update_progress(experiment_db)
        log.info("Beginning execution of %s jobs", len(pending))
        for job in pending:
            experiment_db.set_result(job.job_id, run_job(job, samples, config))
            _update_progress(experiment_db)
            log.info("Job %s complete", job.job_id)
    log.info("Execution finished")
