from dataclasses import dataclass
import pathlib
import tempfile

import pytest

from skelsign.work_db import use_db
from skelsign.work_item import Job, JobOutcome, JobResult

ACCURACIES = {"sl-cnn-0": 0.9, "sl-cnn-1": 1.0, "ssl-cnn-0": 0.7, "ssl-cnn-1": 0.8}


@dataclass
class SessionData:
    session: pathlib.Path


def _jobs():
    return [Job.for_run(regime, "cnn", seed) for seed in (0, 1, 2) for regime in ("sl", "ssl")]


@pytest.fixture(scope="module")
def initialized_session():
    "A session with jobs but no results."
    with tempfile.TemporaryDirectory() as tmp_path:
        session = pathlib.Path(tmp_path) / "skelsign.sqlite"
        with use_db(session) as db:
            db.add_jobs(_jobs())
        yield SessionData(session)


@pytest.fixture(scope="module")
def execd_session():
    "A session where seeds 0 and 1 finished, seed 2 of sl failed and seed 2 of ssl is pending."
    with tempfile.TemporaryDirectory() as tmp_path:
        session = pathlib.Path(tmp_path) / "skelsign.sqlite"
        with use_db(session) as db:
            db.add_jobs(_jobs())
            for job_id, accuracy in ACCURACIES.items():
                report = "test-accuracy = {}".format(accuracy)
                db.set_result(job_id, JobResult(outcome=JobOutcome.NORMAL, test_accuracy=accuracy, report=report))
            db.set_result("sl-cnn-2", JobResult(outcome=JobOutcome.EXCEPTION, output="Traceback: boom"))
        yield SessionData(session)
