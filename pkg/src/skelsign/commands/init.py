"Implementation of the 'init' command."
import logging

from skelsign.config import ConfigValueError
from skelsign.models import ModelKind
from skelsign.work_db import ExperimentDB
from skelsign.work_item import Job, Regime

log = logging.getLogger()


def sweep_jobs(config):
    """The jobs of the sweep described by ``[skelsign.sweep]``: every regime for every seed.

    Raises:
        ConfigValueError: If a regime is unknown or SSL is requested for a model without an autoencoder.
    """
    kind = config.model_kind
    try:
        regimes = [Regime(regime) for regime in config.sweep_regimes]
        ModelKind(kind)
    except ValueError as exc:
        raise ConfigValueError(str(exc)) from exc
    if Regime.SSL in regimes and kind not in (ModelKind.FC.value, ModelKind.CNN.value):
        raise ConfigValueError("The ssl regime needs an fc or cnn model, got {}".format(kind))
    return [Job.for_run(regime, kind, seed) for seed in config.sweep_seeds for regime in regimes]


def init(config, experiment_db: ExperimentDB):
    """Clear and initialize an experiment database with the jobs of a sweep.

    Any existing jobs and results in the database are removed.
    """
    jobs = sweep_jobs(config)
    experiment_db.clear()
    experiment_db.add_jobs(jobs)
    log.info("Initialized %s jobs in %s", len(jobs), experiment_db.name())
