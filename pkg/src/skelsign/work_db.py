"""Implementation of the ExperimentDB."""

import contextlib
import enum
from pathlib import Path

from sqlalchemy import Column, Enum, Float, ForeignKey, Integer, String, Text, create_engine, event
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import declarative_base
from sqlalchemy.orm.session import sessionmaker

from .work_item import Job, JobOutcome, JobResult, Regime


class ExperimentDB:
    """The database of a multi-seed sweep.

    There is a row for each job (regime, model kind, seed) of the sweep. Jobs start without results; a result is
    stored as each run completes, so an interrupted sweep can be resumed.
    """

    class Mode(enum.Enum):
        "Modes in which an ExperimentDB may be opened."

        # Open existing files, creating if necessary
        create = 1

        # Open only existing files, failing if it doesn't exist
        open = 2

    def __init__(self, path, mode):
        """Open a DB in file `path` in mode `mode`.

        Raises:
          FileNotFoundError: If `mode` is `Mode.open` and `path` does not exist.
        """
        self._path = path
        if mode == ExperimentDB.Mode.open and (not Path(path).exists()):
            raise FileNotFoundError("File does not exist: {}".format(path))

        self._engine = create_engine("sqlite:///{}".format(path))

        def enable_foreign_keys(dbapi_con, _con_rec):
            dbapi_con.execute("pragma foreign_keys=ON")

        event.listen(self._engine, "connect", enable_foreign_keys)
        Base.metadata.create_all(self._engine)
        self._session_maker = sessionmaker(self._engine)

    def close(self):
        """Release the database engine."""
        self._engine.dispose()

    def name(self):
        """A name for this database, derived from its path."""
        return str(self._path)

    @property
    def jobs(self):
        "All jobs, with and without results, in insertion order."
        with self._session_maker.begin() as session:
            return tuple(_job_from_storage(job) for job in session.query(JobStorage).order_by(JobStorage.position))

    @property
    def num_jobs(self):
        """The number of jobs."""
        with self._session_maker.begin() as session:
            return session.query(JobStorage).count()

    def add_job(self, job):
        "Add a :class:`Job`."
        self.add_jobs((job,))

    def add_jobs(self, jobs):
        "Add several :class:`Job`\\s, keeping their order."
        with self._session_maker.begin() as session:
            start = session.query(JobStorage).count()
            session.add_all(_job_to_storage(job, start + offset) for offset, job in enumerate(jobs))

    def clear(self):
        """Remove all jobs and their results."""
        with self._session_maker.begin() as session:
            session.query(JobResultStorage).delete()
            session.query(JobStorage).delete()

    @property
    def results(self):
        "An iterable of all ``(job-id, JobResult)``\\s."
        with self._session_maker.begin() as session:
            for result in session.query(JobResultStorage).all():
                yield result.job_id, _job_result_from_storage(result)

    @property
    def num_results(self):
        """The number of results."""
        with self._session_maker.begin() as session:
            return session.query(JobResultStorage).count()

    def set_result(self, job_id, result):
        """Set the result for a job, replacing any earlier one.

        Raises:
           KeyError: If there is no job with a matching job-id.
        """
        try:
            with self._session_maker.begin() as session:
                session.merge(_job_result_to_storage(result, job_id))
        except IntegrityError:
            raise KeyError("Unable to add results for job-id {}. No matching Job.".format(job_id))

    @property
    def pending_jobs(self):
        "Jobs without a result, in insertion order."
        with self._session_maker.begin() as session:
            completed_job_ids = session.query(JobResultStorage.job_id)
            pending = (
                session.query(JobStorage)
                .where(~JobStorage.job_id.in_(completed_job_ids))
                .order_by(JobStorage.position)
            )
            return tuple(_job_from_storage(job) for job in pending)

    @property
    def completed_jobs(self):
        "``(job, result)`` pairs of all completed jobs, in insertion order."
        with self._session_maker.begin() as session:
            results = (
                session.query(JobStorage, JobResultStorage)
                .where(JobStorage.job_id == JobResultStorage.job_id)
                .order_by(JobStorage.position)
            )
            return tuple((_job_from_storage(job), _job_result_from_storage(result)) for job, result in results)


@contextlib.contextmanager
def use_db(path, mode=ExperimentDB.Mode.create):
    """Open a DB in file `path` in mode `mode` as a context manager, closing it on exit.

    Raises:
      FileNotFoundError: If `mode` is `Mode.open` and `path` does not exist.
    """
    database = ExperimentDB(path, mode)
    try:
        yield database
    finally:
        database.close()


Base = declarative_base()


class JobStorage(Base):
    "Database model for Job."
    __tablename__ = "jobs"

    job_id = Column(String, primary_key=True)
    position = Column(Integer)
    regime = Column(Enum(Regime))
    model = Column(String)
    seed = Column(Integer)


class JobResultStorage(Base):
    "Database model for JobResult."
    __tablename__ = "job_results"

    outcome = Column(Enum(JobOutcome))
    test_accuracy = Column(Float, nullable=True)
    report = Column(Text, nullable=True)
    output = Column(Text, nullable=True)
    job_id = Column(String, ForeignKey("jobs.job_id"), primary_key=True)


def _job_to_storage(job: Job, position):
    return JobStorage(job_id=job.job_id, position=position, regime=job.regime, model=job.model, seed=job.seed)


def _job_from_storage(job: JobStorage):
    return Job(job_id=job.job_id, regime=job.regime, model=job.model, seed=job.seed)


def _job_result_to_storage(result: JobResult, job_id):
    return JobResultStorage(
        outcome=result.outcome,
        test_accuracy=result.test_accuracy,
        report=result.report,
        output=result.output,
        job_id=job_id,
    )


def _job_result_from_storage(result: JobResultStorage):
    return JobResult(
        outcome=result.outcome,
        test_accuracy=result.test_accuracy,
        report=result.report,
        output=result.output,
    )
