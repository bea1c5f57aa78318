"""Loading a directory of skeleton files and splitting it for the two experiment protocols."""
import dataclasses
import enum
import logging
from pathlib import Path
from typing import Tuple

import numpy as np

from skelsign.data.preprocessing import PaddedSample, pad_sequence
from skelsign.data.skeleton import GestureLabel, label_for, read_labels, read_skeleton_file
from skelsign.exceptions import ContractError, InsufficientDataError

log = logging.getLogger(__name__)

# Fixed labelled-set sizes of the self-supervised protocol.
SSL_TRAIN_SIZE = 5
SSL_VALIDATION_SIZE = 5
SSL_MIN_SAMPLES = 12
SL_MIN_SAMPLES = 3

_MAX_PARTITION_ATTEMPTS = 10000


class SplitScheme(str, enum.Enum):
    "Dataset split protocols."

    SL = "sl"  # 60% train, 10% validation, 30% test
    SSL = "ssl"  # 5 train, 5 validation, the rest unsupervised and reused as test


def load_dataset(directory, labels=None, t_max=None):
    """Parse, pad and label every ``*.csv`` skeleton file in ``directory``.

    Args:
        directory: Directory holding the skeleton files.
        labels: Path to the ``name,label`` file. It is skipped if it lives in ``directory``. If ``None`` the samples
            are unlabelled.
        t_max: Padded length. Defaults to the length of the longest file.

    Returns:
        A list of :class:`PaddedSample`, sorted by name.

    Raises:
        LabelingError: If a file has no label.
        LengthError: If ``t_max`` is shorter than some file.
        OSError: If a file cannot be read.
    """
    directory = Path(directory)
    labels_path = Path(labels).resolve() if labels is not None else None
    paths = sorted(
        (path for path in directory.glob("*.csv") if path.resolve() != labels_path), key=lambda path: path.stem
    )

    label_map = None
    if labels_path is not None:
        with open(labels_path, mode="rt", encoding="utf-8", newline="") as handle:
            label_map = read_labels(handle)

    sequences = [read_skeleton_file(path) for path in paths]
    if not sequences:
        log.info("No skeleton files in %s", directory)
        return []

    if t_max is None:
        t_max = max(sequence.length for sequence in sequences)
    samples = [
        pad_sequence(sequence, t_max, label=label_for(label_map, sequence.name) if label_map is not None else None)
        for sequence in sequences
    ]
    log.info("Loaded %s skeleton files from %s (t_max=%s)", len(samples), directory, t_max)
    return samples


@dataclasses.dataclass(frozen=True)
class DatasetSplits:
    """The subsets used by one experiment.

    Under the SSL scheme ``test`` and ``unsupervised`` are the same samples.
    """

    train: Tuple[PaddedSample, ...]
    validation: Tuple[PaddedSample, ...]
    test: Tuple[PaddedSample, ...]
    unsupervised: Tuple[PaddedSample, ...]
    scheme: SplitScheme
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "scheme", SplitScheme(self.scheme))
        train, validation = _names(self.train), _names(self.validation)
        if train & validation:
            raise ContractError("Train and validation sets overlap")
        if self.scheme == SplitScheme.SL and (_names(self.test) & (train | validation)):
            raise ContractError("Test set overlaps the training data")
        if self.scheme == SplitScheme.SSL and (_names(self.unsupervised) & (train | validation)):
            raise ContractError("Unsupervised set overlaps the labelled data")

    @property
    def sizes(self):
        "``{'train': ..., 'validation': ..., 'test': ...}``."
        return {"train": len(self.train), "validation": len(self.validation), "test": len(self.test)}


def split_dataset(samples, scheme, seed):
    """Split ``samples`` according to ``scheme``, shuffling deterministically with ``seed``.

    SL keeps ``floor(0.6·N)`` samples for training, ``floor(0.1·N)`` for validation and the rest for testing, which
    is 66/11/34 for 111 samples. SSL keeps 5 labelled training and 5 labelled validation samples, each containing
    both classes, and puts everything else in the unsupervised set, which is also the test set.

    Raises:
        InsufficientDataError: If there are too few samples (or, for SSL, too few of some class).
    """
    scheme = SplitScheme(scheme)
    samples = list(samples)
    rng = np.random.default_rng(seed)
    count = len(samples)

    if scheme == SplitScheme.SL:
        if count < SL_MIN_SAMPLES:
            raise InsufficientDataError("The SL split needs at least {} samples, got {}".format(SL_MIN_SAMPLES, count))
        order = rng.permutation(count)
        n_train, n_validation = count * 6 // 10, count // 10
        shuffled = tuple(samples[i] for i in order)
        return DatasetSplits(
            train=shuffled[:n_train],
            validation=shuffled[n_train : n_train + n_validation],
            test=shuffled[n_train + n_validation :],
            unsupervised=(),
            scheme=scheme,
            seed=seed,
        )

    if count < SSL_MIN_SAMPLES:
        raise InsufficientDataError("The SSL split needs at least {} samples, got {}".format(SSL_MIN_SAMPLES, count))
    if any(sample.label is None for sample in samples):
        raise ContractError("The SSL split needs labelled samples to choose the labelled sets")
    for label in GestureLabel:
        if sum(sample.label == label for sample in samples) < 2:
            raise InsufficientDataError("The SSL split needs at least two {} samples".format(label.display))

    labelled = SSL_TRAIN_SIZE + SSL_VALIDATION_SIZE
    for _ in range(_MAX_PARTITION_ATTEMPTS):
        order = rng.permutation(count)
        train = tuple(samples[i] for i in order[:SSL_TRAIN_SIZE])
        validation = tuple(samples[i] for i in order[SSL_TRAIN_SIZE:labelled])
        if _has_every_class(train) and _has_every_class(validation):
            rest = tuple(samples[i] for i in order[labelled:])
            return DatasetSplits(
                train=train, validation=validation, test=rest, unsupervised=rest, scheme=scheme, seed=seed
            )
    raise InsufficientDataError("Could not draw class-balanced labelled sets")


def _has_every_class(samples):
    return {sample.label for sample in samples} == set(GestureLabel)


def _names(samples):
    return {sample.name for sample in samples}
