"""Training reports and their TOML form."""
import dataclasses
import math
from typing import Dict, Optional, Tuple

import toml

from skelsign.exceptions import ContractError, FormatError

_CLASSIFICATION_CURVES = ("train_loss", "train_accuracy", "validation_loss", "validation_accuracy")


@dataclasses.dataclass(frozen=True)
class TrainReport:
    """The record of one training run.

    A classification run fills every field. A reconstruction run has only ``train_loss`` and ``final_loss``.

    Attributes:
        seed: The seed of the run.
        epochs: Number of epochs.
        train_loss: Loss over the training set after each epoch.
        train_accuracy: Accuracy over the training set after each epoch.
        validation_loss: Loss over the validation set after each epoch (NaN when it is empty).
        validation_accuracy: Accuracy over the validation set after each epoch (NaN when it is empty).
        test_accuracy: Final accuracy on the test set.
        test_validation_accuracy: Final accuracy on the test and validation sets together.
        f1: Macro-averaged F1 on the test set.
        confusion: Test counts, ``confusion[actual][predicted]``.
        misclassified: Names of the wrongly classified test samples.
        split_sizes: ``{"train": ..., "validation": ..., "test": ...}``.
        scheme: The split scheme.
        model: The model kind.
        final_loss: For reconstruction runs, the last entry of ``train_loss`` (or the initial loss without epochs).
        seconds: Wall-clock duration. Only serialized on request.
    """

    seed: int
    epochs: int
    train_loss: Tuple[float, ...] = ()
    train_accuracy: Tuple[float, ...] = ()
    validation_loss: Tuple[float, ...] = ()
    validation_accuracy: Tuple[float, ...] = ()
    test_accuracy: Optional[float] = None
    test_validation_accuracy: Optional[float] = None
    f1: Optional[float] = None
    confusion: Tuple[Tuple[int, ...], ...] = ()
    misclassified: Tuple[str, ...] = ()
    split_sizes: Dict[str, int] = dataclasses.field(default_factory=dict)
    scheme: Optional[str] = None
    model: Optional[str] = None
    final_loss: Optional[float] = None
    seconds: float = 0.0

    def __post_init__(self):
        for name in _CLASSIFICATION_CURVES + ("misclassified",):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        object.__setattr__(self, "confusion", tuple(tuple(int(c) for c in row) for row in self.confusion))

        if len(self.train_loss) != self.epochs:
            raise ContractError("train_loss has {} entries for {} epochs".format(len(self.train_loss), self.epochs))
        if self.is_reconstruction:
            return
        for name in _CLASSIFICATION_CURVES:
            if len(getattr(self, name)) != self.epochs:
                raise ContractError(
                    "{} has {} entries for {} epochs".format(name, len(getattr(self, name)), self.epochs)
                )
        if self.confusion:
            total = sum(sum(row) for row in self.confusion)
            if "test" in self.split_sizes and total != self.split_sizes["test"]:
                raise ContractError(
                    "Confusion matrix counts {} samples, the test set has {}".format(total, self.split_sizes["test"])
                )
            correct = sum(self.confusion[i][i] for i in range(len(self.confusion)))
            if self.test_accuracy is not None and not math.isclose(correct / total, self.test_accuracy):
                raise ContractError("Test accuracy {} disagrees with the confusion matrix".format(self.test_accuracy))

    @property
    def is_reconstruction(self):
        "Whether this reports a reconstruction run."
        return self.final_loss is not None

    def to_dict(self, include_timing=False):
        "The serializable fields."
        if self.is_reconstruction:
            d = {
                "seed": self.seed,
                "epochs": self.epochs,
                "train_loss": list(self.train_loss),
                "final_loss": self.final_loss,
            }
        else:
            d = {
                "seed": self.seed,
                "scheme": self.scheme,
                "model": self.model,
                "epochs": self.epochs,
                "train_loss": list(self.train_loss),
                "train_accuracy": list(self.train_accuracy),
                "validation_loss": list(self.validation_loss),
                "validation_accuracy": list(self.validation_accuracy),
                "test_accuracy": self.test_accuracy,
                "test_validation_accuracy": self.test_validation_accuracy,
                "f1": self.f1,
                "confusion": [list(row) for row in self.confusion],
                "misclassified": list(self.misclassified),
                "split_sizes": dict(self.split_sizes),
            }
            d = {key: value for key, value in d.items() if value is not None}
        if include_timing:
            d["seconds"] = self.seconds
        return d

    def to_toml(self, include_timing=False):
        """The report as a TOML document.

        Without ``include_timing`` two runs with the same seed, data and hyperparameters give identical text.
        """
        return toml.dumps(self.to_dict(include_timing=include_timing))

    @classmethod
    def from_dict(cls, d):
        "Inverse of :meth:`to_dict`."
        try:
            return cls(**d)
        except TypeError as exc:
            raise FormatError("Invalid training report: {}".format(exc)) from exc

    @classmethod
    def from_toml(cls, text):
        """Parse a report written by :meth:`to_toml`.

        Raises:
            FormatError: If the text is not a valid report.
        """
        try:
            d = toml.loads(text)
        except toml.TomlDecodeError as exc:
            raise FormatError("Invalid training report: {}".format(exc)) from exc
        return cls.from_dict(d)
