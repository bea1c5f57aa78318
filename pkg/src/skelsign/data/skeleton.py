"""Skeleton sequences and the motion-capture CSV format they are stored in.

A skeleton file has one row per frame. Column 0 is the timestamp in seconds, followed by ``x, y, z`` for each of
the ``n`` joints, so a file has ``3·n + 1`` columns. A single header row is allowed; it is recognised by its first
cell not being a number.
"""
import csv
import dataclasses
import enum
import math
from pathlib import Path

import numpy as np

from skelsign.exceptions import FormatError, LabelingError, ParseError


class GestureLabel(enum.IntEnum):
    """The two gesture classes."""

    MONO = 0  # one hand moves
    BI = 1  # both hands move

    @classmethod
    def parse(cls, text):
        """Read a label from ``Mono``/``Bi`` (any case) or ``0``/``1``.

        Raises:
            FormatError: For anything else.
        """
        value = text.strip().lower()
        for label in cls:
            if value in (label.display.lower(), str(label.value)):
                return label
        raise FormatError("Unknown gesture label: {!r}".format(text))

    @property
    def display(self):
        "The label as written in label files."
        return self.name.capitalize()


@dataclasses.dataclass(frozen=True, eq=False)
class SkeletonSequence:
    """Time-ordered 3D joint coordinates.

    Attributes:
        name: Sample identifier, normally the file stem (e.g. ``"Avion"``).
        joint_count: Number of joints ``n``.
        frames: ``t×3n`` array; row ``f`` holds ``x, y, z`` for every joint at frame ``f``.
        timestamps: ``t`` strictly increasing times in seconds.
    """

    name: str
    joint_count: int
    frames: np.ndarray
    timestamps: np.ndarray

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.size == 0:
            frames = frames.reshape(0, 3 * self.joint_count)
        timestamps = np.asarray(self.timestamps, dtype=np.float64).reshape(-1)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "timestamps", timestamps)

        if self.joint_count < 1:
            raise FormatError("A skeleton needs at least one joint, got {}".format(self.joint_count))
        if frames.ndim != 2 or frames.shape[1] != 3 * self.joint_count:
            raise FormatError(
                "Frames of {} must be t×{}, got {}".format(self.name, 3 * self.joint_count, frames.shape)
            )
        if timestamps.shape[0] != frames.shape[0]:
            raise FormatError(
                "{} has {} timestamps for {} frames".format(self.name, timestamps.shape[0], frames.shape[0])
            )
        if not np.all(np.isfinite(frames)) or not np.all(np.isfinite(timestamps)):
            raise FormatError("{} contains non-finite values".format(self.name))
        if np.any(np.diff(timestamps) <= 0):
            raise FormatError("Timestamps of {} are not strictly increasing".format(self.name))

    @property
    def length(self):
        "The number of frames ``t``."
        return self.frames.shape[0]

    def joint_positions(self):
        "The frames as a ``t×n×3`` array."
        return self.frames.reshape(self.length, self.joint_count, 3)


def parse_skeleton_csv(stream, name="sample"):
    """Parse a skeleton file.

    Args:
        stream: A text stream (or any iterable of lines) in the skeleton CSV format.
        name: The identifier to give the sequence.

    Returns:
        A :class:`SkeletonSequence`.

    Raises:
        ParseError: If a cell is not a finite number, or the text is not valid UTF-8 (the row is then the first one
            that could not be decoded).
        FormatError: If the column count is not ``3·n + 1``, rows are ragged, the file is empty or timestamps
            do not increase.
    """
    reader = csv.reader(stream)
    try:
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    except UnicodeDecodeError as exc:
        raise ParseError("{}: not UTF-8 text ({})".format(name, exc.reason), reader.line_num, 0) from exc
    if not rows:
        raise FormatError("{} is empty".format(name))

    first_data_row = 1 if not _is_number(rows[0][0]) else 0
    columns = len(rows[0])
    if columns < 4 or (columns - 1) % 3 != 0:
        raise FormatError(
            "{} has {} columns; expected a time column plus 3 per joint (3·n + 1)".format(name, columns)
        )

    values = np.empty((len(rows) - first_data_row, columns), dtype=np.float64)
    for row_index, row in enumerate(rows[first_data_row:], start=first_data_row):
        if len(row) != columns:
            raise FormatError("{}: row {} has {} columns, expected {}".format(name, row_index, len(row), columns))
        for col_index, cell in enumerate(row):
            try:
                value = float(cell)
            except ValueError:
                raise ParseError("{}: not a number: {!r}".format(name, cell), row_index, col_index) from None
            if not math.isfinite(value):
                raise ParseError("{}: not a finite number: {!r}".format(name, cell), row_index, col_index)
            values[row_index - first_data_row, col_index] = value

    timestamps = values[:, 0]
    bad = np.flatnonzero(np.diff(timestamps) <= 0)
    if bad.size:
        raise FormatError(
            "{}: timestamps not strictly increasing at row {}".format(name, int(bad[0]) + 1 + first_data_row)
        )
    return SkeletonSequence(name=name, joint_count=(columns - 1) // 3, frames=values[:, 1:], timestamps=timestamps)


def read_skeleton_file(path):
    "Parse the skeleton file at ``path``, naming the sequence after the file stem."
    with open(path, mode="rt", encoding="utf-8", newline="") as handle:
        return parse_skeleton_csv(handle, name=Path(path).stem)


def write_skeleton_csv(sequence, stream):
    """Write ``sequence`` in the skeleton CSV format, with a header row.

    Floats are written in their shortest round-trip form so that parsing the output gives back identical values.
    """
    writer = csv.writer(stream, lineterminator="\n")
    header = ["time"]
    for joint in range(sequence.joint_count):
        header.extend("j{}_{}".format(joint, axis) for axis in "xyz")
    writer.writerow(header)
    for timestamp, frame in zip(sequence.timestamps, sequence.frames):
        writer.writerow([repr(float(timestamp))] + [repr(float(v)) for v in frame])


def read_labels(stream):
    """Read a ``name,label`` file into a dict mapping name to :class:`GestureLabel`.

    A header row is skipped if its label cell is not a recognised label.

    Raises:
        FormatError: If a row does not have two cells, holds an unknown label or the text is not valid UTF-8.
    """
    try:
        rows = list(csv.reader(stream))
    except UnicodeDecodeError as exc:
        raise FormatError("Label file is not UTF-8 text ({})".format(exc.reason)) from exc

    labels = {}
    for row_index, row in enumerate(rows):
        if not row or not any(cell.strip() for cell in row):
            continue
        if len(row) != 2:
            raise FormatError("Label file row {} has {} cells, expected 2".format(row_index, len(row)))
        name, text = row[0].strip(), row[1]
        try:
            labels[name] = GestureLabel.parse(text)
        except FormatError:
            if row_index == 0:
                continue
            raise
    return labels


def write_labels(labels, stream):
    "Write ``(name, GestureLabel)`` pairs as a label file with a header."
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["name", "label"])
    for name, label in labels:
        writer.writerow([name, GestureLabel(label).display])


def label_for(labels, name):
    """Look up the label of ``name``.

    Raises:
        LabelingError: If there is none.
    """
    try:
        return labels[name]
    except KeyError:
        raise LabelingError("No label for skeleton file {!r}".format(name)) from None


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True
