"""Supervised training of a classifier on labelled splits."""
import logging

import numpy as np

from skelsign.numcore import softmax_cross_entropy
from skelsign.progress import Progress, progress_reporter
from skelsign.timing import Timer
from skelsign.training.evaluate import evaluate, forward_samples, measure, require_labels, targets
from skelsign.training.optim import make_optimizer
from skelsign.training.report import TrainReport

log = logging.getLogger(__name__)


def epoch_order(count, seed, epoch):
    "The shuffled sample order of one epoch, fixed by ``seed + epoch``."
    return np.random.default_rng(seed + epoch).permutation(count)


def train_supervised(model, splits, hp):
    """Train ``model`` with mini-batch descent on softmax cross-entropy.

    After every epoch the loss and accuracy over the whole training and validation sets are recorded. The test set
    is evaluated once, at the end. There is no early stopping.

    Args:
        model: A classifier; its parameters are updated in place.
        splits: :class:`DatasetSplits` whose train, validation and test sets are labelled.
        hp: :class:`HyperParams`.

    Raises:
        ContractError: If a sample in one of the labelled sets has no label, or the test set is empty.
    """
    for what in ("train", "validation", "test"):
        require_labels(getattr(splits, what), what)

    train = list(splits.train)
    optimizer = make_optimizer(model.parameters(), hp)
    curves = {"train_loss": [], "train_accuracy": [], "validation_loss": [], "validation_accuracy": []}
    progress = Progress("train {}".format(model.kind.value))

    with Timer() as timer, progress_reporter(progress.report):
        for epoch in range(hp.epochs):
            order = epoch_order(len(train), hp.seed, epoch)
            for start in range(0, len(order), hp.batch_size):
                batch = [train[i] for i in order[start : start + hp.batch_size]]
                optimizer.zero_grad()
                loss, _ = softmax_cross_entropy(forward_samples(model, batch), targets(batch))
                loss.backward()
                optimizer.step()

            train_loss, train_accuracy = measure(model, train)
            validation_loss, validation_accuracy = measure(model, splits.validation)
            curves["train_loss"].append(train_loss)
            curves["train_accuracy"].append(train_accuracy)
            curves["validation_loss"].append(validation_loss)
            curves["validation_accuracy"].append(validation_accuracy)
            progress.update(epoch + 1, hp.epochs, loss=train_loss, accuracy=train_accuracy)
            log.info(
                "Epoch %s/%s: train loss %.4f, accuracy %.3f; validation loss %.4f, accuracy %.3f",
                epoch + 1,
                hp.epochs,
                train_loss,
                train_accuracy,
                validation_loss,
                validation_accuracy,
            )

        result = evaluate(model, splits.test)
        held_out = list(splits.test) + list(splits.validation)
        test_validation = evaluate(model, held_out).accuracy

    log.info("Test accuracy %.3f (%s misclassified) in %.1fs", result.accuracy, len(result.misclassified), timer.elapsed)
    return TrainReport(
        seed=hp.seed,
        epochs=hp.epochs,
        test_accuracy=result.accuracy,
        test_validation_accuracy=test_validation,
        f1=result.f1,
        confusion=result.confusion.tolist(),
        misclassified=result.misclassified,
        split_sizes=splits.sizes,
        scheme=splits.scheme.value,
        model=model.kind.value,
        seconds=timer.elapsed,
        **curves,
    )
