"Shared implementation of the training commands and sweep jobs."
import logging

from skelsign.data import SplitScheme, load_dataset, split_dataset
from skelsign.exceptions import InsufficientDataError
from skelsign.models import ModelKind, ModelSpec, build_model
from skelsign.training import run_low_label_baseline, run_ssl_pipeline, train_supervised
from skelsign.work_item import Regime

log = logging.getLogger(__name__)


def load_samples(data_dir, labels, t_max=None):
    """Load a labelled dataset, refusing an empty directory.

    Raises:
        InsufficientDataError: If the directory holds no skeleton files.
    """
    samples = load_dataset(data_dir, labels=labels, t_max=t_max)
    if not samples:
        raise InsufficientDataError("No skeleton files in {}".format(data_dir))
    return samples


def train_classifier(samples, kind, scheme, seed, hp, model_options=None):
    """Split ``samples``, build a ``kind`` classifier and train it.

    Returns:
        ``(model, report)``.
    """
    splits = split_dataset(samples, scheme, seed)
    spec = ModelSpec(
        kind=kind,
        t_max=samples[0].t_max,
        joint_count=samples[0].joint_count,
        seed=seed,
        **(model_options or {})
    )
    model = build_model(spec)
    log.info("Training %s on %s", spec.kind.value, splits.sizes)
    return model, train_supervised(model, splits, hp)


def run_regime(regime, kind, seed, samples, config):
    """Run one sweep job and return its downstream :class:`TrainReport`.

    Args:
        regime: :class:`Regime`.
        kind: Classifier kind (the backbone for SSL).
        seed: Seed of the split, the initialization and the shuffles.
        samples: The labelled dataset.
        config: The :class:`ConfigDict` supplying hyperparameters and model options.
    """
    regime = Regime(regime)
    kind = ModelKind(kind)
    hp_train = config.hyperparams("train", seed)
    options = config.model_options(kind.value)

    if regime == Regime.SL:
        _, report = train_classifier(samples, kind, SplitScheme.SL, seed, hp_train, options)
        return report
    if regime == Regime.SL_LOW:
        return run_low_label_baseline(samples, hp_train, seed, kind=kind, model_options=options)

    hp_pretrain = config.hyperparams("pretrain", seed)
    _, report = run_ssl_pipeline(samples, hp_pretrain, hp_train, seed, backbone=kind, model_options=options)
    return report
