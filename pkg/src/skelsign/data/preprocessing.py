"""Fixed-size model inputs: zero padding to ``t_max`` frames and flattening.

The timestamp column is not part of the model input; only the ``3·n`` coordinate columns are kept.
"""
import dataclasses
from typing import Optional

import numpy as np

from skelsign.data.skeleton import GestureLabel
from skelsign.exceptions import FormatError, LengthError


@dataclasses.dataclass(frozen=True, eq=False)
class PaddedSample:
    """A skeleton sequence padded with zero rows to ``t_max`` frames.

    Attributes:
        name: Sample identifier.
        grid: ``t_max×3n`` array. Rows at or after ``original_length`` are zero.
        original_length: Number of real frames.
        label: The gesture class, if known.
    """

    name: str
    grid: np.ndarray
    original_length: int
    label: Optional[GestureLabel] = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=np.float64)
        object.__setattr__(self, "grid", grid)
        if grid.ndim != 2 or grid.shape[1] % 3 != 0:
            raise FormatError("Padded grid of {} must be t_max×3n, got {}".format(self.name, grid.shape))
        if not 0 <= self.original_length <= grid.shape[0]:
            raise LengthError(
                "{}: original length {} outside [0, {}]".format(self.name, self.original_length, grid.shape[0])
            )
        if self.label is not None:
            object.__setattr__(self, "label", GestureLabel(self.label))

    @property
    def t_max(self):
        "Number of rows of the grid."
        return self.grid.shape[0]

    @property
    def joint_count(self):
        "Number of joints ``n``."
        return self.grid.shape[1] // 3

    def with_label(self, label):
        "A copy carrying ``label``."
        return dataclasses.replace(self, label=label)


def pad_sequence(sequence, t_max, label=None):
    """Pad ``sequence`` with zero rows up to ``t_max`` frames, dropping the timestamps.

    Raises:
        LengthError: If the sequence is longer than ``t_max``.
    """
    if t_max < 1:
        raise LengthError("t_max must be positive, got {}".format(t_max))
    if sequence.length > t_max:
        raise LengthError(
            "{} has {} frames, longer than t_max = {}".format(sequence.name, sequence.length, t_max)
        )
    grid = np.zeros((t_max, 3 * sequence.joint_count), dtype=np.float64)
    grid[: sequence.length] = sequence.frames
    return PaddedSample(name=sequence.name, grid=grid, original_length=sequence.length, label=label)


def flatten(sample):
    "The grid as a vector of length ``3·n·t_max``, frame 0 first."
    return sample.grid.reshape(-1).copy()


def stack_grids(samples):
    "The grids of ``samples`` as one ``N×t_max×3n`` array."
    return np.stack([sample.grid for sample in samples]) if samples else np.zeros((0, 0, 0))
