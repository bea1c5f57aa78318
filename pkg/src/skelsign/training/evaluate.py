"""Predictions and metrics on labelled samples."""
from typing import NamedTuple, Tuple

import numpy as np

from skelsign.data import stack_grids
from skelsign.exceptions import ContractError
from skelsign.numcore import Tensor, softmax_cross_entropy

# Samples per forward pass when scoring a whole set.
CHUNK_SIZE = 32


class Evaluation(NamedTuple):
    """Metrics of a model on a labelled set.

    ``confusion[actual][predicted]`` holds counts; ``f1`` is the macro average over the classes present.
    """

    accuracy: float
    confusion: np.ndarray
    misclassified: Tuple[str, ...]
    f1: float


def require_labels(samples, what):
    "Raise ContractError unless every sample carries a label."
    unlabelled = [sample.name for sample in samples if sample.label is None]
    if unlabelled:
        raise ContractError("Unlabelled samples in the {} set: {}".format(what, ", ".join(unlabelled)))


def targets(samples):
    "The integer class of each sample."
    return np.array([int(sample.label) for sample in samples], dtype=np.int64)


def forward_samples(model, samples):
    "Model output for a list of padded samples, as a tensor recorded on the tape."
    return model(Tensor(model.prepare(stack_grids(samples))))


def chunks(items, size=CHUNK_SIZE):
    "Consecutive slices of at most ``size`` items."
    return [items[start : start + size] for start in range(0, len(items), size)]


def predict_logits(model, samples):
    "Logit matrix of ``samples``, one row per sample."
    return np.concatenate([forward_samples(model.frozen(), chunk).data for chunk in chunks(list(samples))])


def predict(model, samples):
    "Predicted class per sample. Ties go to the lower class index."
    return predict_logits(model, samples).argmax(axis=1)


def measure(model, samples):
    """Mean cross-entropy and accuracy of ``model`` on labelled ``samples``.

    Returns ``(nan, nan)`` for an empty set.
    """
    samples = list(samples)
    if not samples:
        return float("nan"), float("nan")
    logits = predict_logits(model, samples)
    expected = targets(samples)
    loss, _ = softmax_cross_entropy(logits, expected)
    return loss.item(), float(np.mean(logits.argmax(axis=1) == expected))


def macro_f1(confusion):
    "Mean F1 over the classes that occur as an actual or predicted class."
    scores = []
    for index in range(confusion.shape[0]):
        true_positive = confusion[index, index]
        false_positive = confusion[:, index].sum() - true_positive
        false_negative = confusion[index, :].sum() - true_positive
        denominator = 2 * true_positive + false_positive + false_negative
        if denominator:
            scores.append(2 * true_positive / denominator)
    return float(np.mean(scores))


def evaluate(model, samples):
    """Classify ``samples`` and compare with their labels.

    Raises:
        ContractError: If ``samples`` is empty or contains an unlabelled sample.
    """
    samples = list(samples)
    if not samples:
        raise ContractError("Cannot evaluate on an empty set")
    require_labels(samples, "evaluation")

    predicted = predict(model, samples)
    actual = targets(samples)
    classes = model.spec.num_classes
    confusion = np.zeros((classes, classes), dtype=np.int64)
    np.add.at(confusion, (actual, predicted), 1)
    misclassified = tuple(sample.name for sample, a, p in zip(samples, actual, predicted) if a != p)
    accuracy = float(np.trace(confusion)) / len(samples)
    return Evaluation(accuracy=accuracy, confusion=confusion, misclassified=misclassified, f1=macro_f1(confusion))
