"""The self-supervised pipeline and its matched low-label baseline."""
import logging

from skelsign.data import SplitScheme, split_dataset
from skelsign.exceptions import InsufficientDataError
from skelsign.models import ModelKind, ModelSpec, build_model, extract_encoder
from skelsign.training.reconstruction import train_reconstruction
from skelsign.training.supervised import train_supervised

log = logging.getLogger(__name__)


def _geometry(samples):
    if not samples:
        raise InsufficientDataError("No samples")
    return samples[0].t_max, samples[0].joint_count


def run_ssl_pipeline(samples, hp_unsup, hp_sup, seed, backbone=ModelKind.CNN, model_options=None):
    """Pretrain an autoencoder on the unsupervised set, then fine-tune its encoder on 5+5 labelled samples.

    The samples are split with the SSL scheme. The unsupervised set is also the test set.

    Args:
        samples: Labelled :class:`PaddedSample`\\s. The labels of the unsupervised set are only read for testing;
            pretraining sees the pool without labels. A contrastive term (``hp_unsup.contrastive_weight > 0``) takes
            its positives from the 5 labelled training samples.
        hp_unsup: Hyperparameters of the pretraining.
        hp_sup: Hyperparameters of the fine-tuning.
        seed: Seed of the split and of every model's initialization.
        backbone: ``cnn`` or ``fc``.
        model_options: Extra :class:`ModelSpec` fields.

    Returns:
        ``(pretraining report, downstream report)``.

    Raises:
        InsufficientDataError: With fewer than 12 samples or too few of a class.
    """
    samples = list(samples)
    t_max, joint_count = _geometry(samples)
    splits = split_dataset(samples, SplitScheme.SSL, seed)
    auto = build_model(
        ModelSpec(
            kind=ModelKind.AUTOENCODER,
            t_max=t_max,
            joint_count=joint_count,
            seed=seed,
            backbone=backbone,
            **(model_options or {})
        )
    )
    log.info("Pretraining a %s autoencoder on %s samples", auto.spec.backbone.value, len(splits.unsupervised))
    pool = [sample.with_label(None) for sample in splits.unsupervised]
    pretraining = train_reconstruction(auto, pool, hp_unsup, labelled=splits.train)
    classifier = extract_encoder(auto, seed=seed)
    downstream = train_supervised(classifier, splits, hp_sup)
    return pretraining, downstream


def run_low_label_baseline(samples, hp_sup, seed, kind=ModelKind.CNN, model_options=None):
    """Train a freshly initialized classifier on the same 5+5 labelled samples the SSL pipeline uses.

    Returns:
        The :class:`TrainReport` of the run.
    """
    samples = list(samples)
    t_max, joint_count = _geometry(samples)
    splits = split_dataset(samples, SplitScheme.SSL, seed)
    model = build_model(
        ModelSpec(kind=kind, t_max=t_max, joint_count=joint_count, seed=seed, **(model_options or {}))
    )
    return train_supervised(model, splits, hp_sup)
