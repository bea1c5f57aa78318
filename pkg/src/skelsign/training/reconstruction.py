"""Unsupervised pretraining of an autoencoder.

The objective is the mean squared reconstruction error of the unlabelled pool. The labels of the pool are never read.
With a positive ``contrastive_weight`` and a labelled set, every step also adds the label-selected contrastive loss
of the labelled set's latents, so positives only come from samples whose labels are known.
"""
import logging

import numpy as np

from skelsign.data import stack_grids
from skelsign.exceptions import ContractError
from skelsign.numcore import Tensor, add, mse_loss, scale, take
from skelsign.progress import Progress, progress_reporter
from skelsign.timing import Timer
from skelsign.training.contrastive import contrastive_loss, has_positive_pair
from skelsign.training.evaluate import chunks, require_labels
from skelsign.training.optim import make_optimizer
from skelsign.training.report import TrainReport
from skelsign.training.supervised import epoch_order

log = logging.getLogger(__name__)


def reconstruction_error(auto, samples):
    "Mean squared reconstruction error over ``samples``."
    frozen = auto.frozen()
    total = 0.0
    for chunk in chunks(list(samples)):
        inputs = Tensor(frozen.prepare(stack_grids(chunk)))
        reconstruction, _ = frozen(inputs)
        total += mse_loss(reconstruction, inputs).item() * len(chunk)
    return total / len(samples)


def contrastive_term(auto, labelled, temperature):
    """The contrastive loss of the latents of ``labelled``, or ``None`` if it is undefined.

    Samples whose latent vector is zero have no direction and are left out. ``None`` is returned when fewer than
    two samples remain or no two of them share a label.
    """
    _, latent = auto(Tensor(auto.prepare(stack_grids(labelled))))
    rows = np.flatnonzero(np.linalg.norm(latent.data, axis=1) > 0)
    labels = [labelled[row].label for row in rows]
    if len(rows) < 2 or not has_positive_pair(labels):
        log.debug("Skipping the contrastive term: %s usable latents", len(rows))
        return None
    if len(rows) < len(labelled):
        latent = take(latent, rows)
    return contrastive_loss(latent, labels, temperature)


def train_reconstruction(auto, unlabelled, hp, labelled=()):
    """Pretrain ``auto`` to reconstruct ``unlabelled``.

    Args:
        auto: The autoencoder; its parameters are updated in place.
        unlabelled: The pretraining pool. Its labels, if any, are ignored.
        hp: :class:`HyperParams`.
        labelled: Samples with known labels for the contrastive term. Only used when ``hp.contrastive_weight`` is
            positive.

    Returns:
        A reconstruction :class:`TrainReport`; ``train_loss`` holds the reconstruction error over the whole pool
        after each epoch.

    Raises:
        ContractError: If ``unlabelled`` is empty, or the contrastive term is enabled without a labelled set that
            holds a positive pair.
    """
    samples = list(unlabelled)
    if not samples:
        raise ContractError("Cannot pretrain on an empty dataset")
    labelled = list(labelled)
    contrastive = hp.contrastive_weight > 0
    if contrastive:
        require_labels(labelled, "contrastive")
        if not has_positive_pair(sample.label for sample in labelled):
            raise ContractError("The contrastive term needs a labelled set with two samples of one class")

    optimizer = make_optimizer(auto.parameters(), hp)
    losses = []
    progress = Progress("pretrain")

    with Timer() as timer, progress_reporter(progress.report):
        for epoch in range(hp.epochs):
            order = epoch_order(len(samples), hp.seed, epoch)
            for start in range(0, len(order), hp.batch_size):
                batch = [samples[i] for i in order[start : start + hp.batch_size]]
                inputs = Tensor(auto.prepare(stack_grids(batch)))
                optimizer.zero_grad()
                reconstruction, _ = auto(inputs)
                loss = mse_loss(reconstruction, inputs)
                if contrastive:
                    term = contrastive_term(auto, labelled, hp.contrastive_temperature)
                    if term is not None:
                        loss = add(loss, scale(term, hp.contrastive_weight))
                loss.backward()
                optimizer.step()

            losses.append(reconstruction_error(auto, samples))
            progress.update(epoch + 1, hp.epochs, loss=losses[-1])
            log.info("Pretraining epoch %s/%s: reconstruction loss %.6f", epoch + 1, hp.epochs, losses[-1])

        final = losses[-1] if losses else reconstruction_error(auto, samples)

    return TrainReport(seed=hp.seed, epochs=hp.epochs, train_loss=losses, final_loss=final, seconds=timer.elapsed)
