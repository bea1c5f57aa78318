"""Grad-CAM for the convolutional classifier, reduced to per-joint importance.

1. Backpropagate the logit of the chosen class to the activations ``A`` of the last convolution.
2. Average the gradient of each channel over its spatial positions, giving weights ``α_c``.
3. Sum the featuremaps weighted by ``α_c``.
4. Keep the positive part.

The resulting heatmap is resized to the input grid (bilinear, corners aligned), each joint takes the maximum over
its three coordinate columns, and the ``k`` strongest joints of every frame are highlighted.

Exports use two files next to a common prefix:

* ``<prefix>.heatmap.csv``: the input heatmap, ``t_max`` rows of ``3n`` values, no header.
* ``<prefix>.highlight.txt``: one line ``frame: j1 j2 ... jk`` per frame, strongest joint first, with a
  `` # padded`` suffix on frames after the end of the real sequence.
"""
import csv
import dataclasses
import logging
from pathlib import Path

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from skelsign.exceptions import ContractError, FormatError, ParseError, ShapeError
from skelsign.models import ModelKind
from skelsign.numcore import Tensor, take

log = logging.getLogger(__name__)

DEFAULT_TOP_K = 10
PADDED_MARKER = "# padded"


@dataclasses.dataclass(frozen=True, eq=False)
class GradCamResult:
    """The explanation of one classification.

    Attributes:
        class_index: The explained class.
        conv_heatmap: ``H'×W'`` map at the resolution of the last convolution.
        input_heatmap: ``t_max×3n`` map at the resolution of the input.
        joint_scores: ``t_max×n`` per-joint importance.
        top_joints: ``t_max×k`` joint indices, strongest first.
        original_length: Number of real (unpadded) frames.
    """

    class_index: int
    conv_heatmap: np.ndarray
    input_heatmap: np.ndarray
    joint_scores: np.ndarray
    top_joints: np.ndarray
    original_length: int

    def __post_init__(self):
        if np.any(self.conv_heatmap < 0) or np.any(self.input_heatmap < 0):
            raise ContractError("Grad-CAM heatmaps must be non-negative")
        frames, width = self.input_heatmap.shape
        if self.joint_scores.shape != (frames, width // 3):
            raise ShapeError(
                "Joint scores {} do not match the heatmap {}".format(self.joint_scores.shape, self.input_heatmap.shape)
            )
        if self.top_joints.shape[0] != frames:
            raise ShapeError("{} highlight rows for {} frames".format(self.top_joints.shape[0], frames))
        _check_top_joints(self.top_joints, width // 3)

    @property
    def padded_frames(self):
        "Whether each frame is padding."
        return np.arange(self.input_heatmap.shape[0]) >= self.original_length


def _check_top_joints(top_joints, joint_count):
    for frame, row in enumerate(top_joints):
        if len(set(row.tolist())) != len(row) or np.any(row < 0) or np.any(row >= joint_count):
            raise ContractError("Frame {} highlights invalid joints {}".format(frame, row.tolist()))


def _require_cnn(model):
    if model.kind != ModelKind.CNN or model.last_conv is None:
        raise ContractError("gradcam requires cnn, got {}".format(model.kind.value))


def _grid(model, sample):
    grid = sample.grid if hasattr(sample, "grid") else np.asarray(sample, dtype=np.float64)
    return model.prepare(grid[np.newaxis])[0]


def class_scores(model, sample):
    "The logits of ``sample``."
    _require_cnn(model)
    logits, _ = model.architecture.forward_with_featuremaps(model.frozen(), Tensor(_grid(model, sample)))
    return logits.data


def predicted_class(model, sample):
    "The class with the largest logit, the lower index on ties."
    return int(np.argmax(class_scores(model, sample)))


def weighted_featuremap_sum(featuremaps, gradients):
    """Positive part of the featuremaps summed with the channel means of their gradients as weights.

    Args:
        featuremaps: ``C×H'×W'`` activations.
        gradients: Gradients of the class score with respect to ``featuremaps``.
    """
    weights = gradients.mean(axis=(1, 2))
    return np.maximum(np.tensordot(weights, featuremaps, axes=1), 0.0)


def compute_conv_heatmap(model, sample, class_index):
    """The Grad-CAM map of ``class_index`` at the resolution of the last convolution.

    The model's parameters and gradients are not touched; the backward pass runs on a frozen view.

    Args:
        model: A CNN classifier.
        sample: A :class:`PaddedSample` or a ``t_max×3n`` grid.
        class_index: The class whose logit is explained.

    Raises:
        ContractError: If the model is not a CNN or the class is out of range.
    """
    _require_cnn(model)
    if not 0 <= class_index < model.spec.num_classes:
        raise ContractError("class_index {} outside [0, {})".format(class_index, model.spec.num_classes))

    inputs = Tensor(_grid(model, sample), requires_grad=True)
    logits, featuremaps = model.architecture.forward_with_featuremaps(model.frozen(), inputs)
    take(logits, int(class_index)).backward()
    log.debug("Grad-CAM for class %s (logits %s)", class_index, logits.data)
    return weighted_featuremap_sum(featuremaps.data, featuremaps.grad)


def upsample_to_input(conv_heatmap, target):
    """Bilinear resize of ``conv_heatmap`` to ``target = (rows, cols)`` with aligned corners.

    Raises:
        ContractError: If the target is smaller than the heatmap along either axis.
    """
    heat = np.asarray(conv_heatmap, dtype=np.float64)
    rows, cols = (int(size) for size in target)
    if heat.ndim != 2 or rows < heat.shape[0] or cols < heat.shape[1]:
        raise ContractError("Cannot upsample a {} heatmap to {}×{}".format(heat.shape, rows, cols))

    # A single row or column is repeated so that every axis has two grid points.
    for axis in (0, 1):
        if heat.shape[axis] == 1:
            heat = np.repeat(heat, 2, axis=axis)
    interpolator = RegularGridInterpolator(
        (np.arange(heat.shape[0]), np.arange(heat.shape[1])), heat, method="linear"
    )
    mesh = np.meshgrid(
        np.linspace(0.0, heat.shape[0] - 1, rows), np.linspace(0.0, heat.shape[1] - 1, cols), indexing="ij"
    )
    return np.maximum(interpolator(np.stack(mesh, axis=-1)), 0.0)


def joint_importance(input_heatmap, joint_count):
    """Per-joint scores: the maximum over each joint's x, y and z columns.

    Raises:
        ShapeError: If the heatmap is not ``t×3n``.
    """
    heat = np.asarray(input_heatmap, dtype=np.float64)
    if heat.ndim != 2 or heat.shape[1] != 3 * joint_count:
        raise ShapeError("Heatmap {} does not have 3·{} columns".format(heat.shape, joint_count))
    return heat.reshape(heat.shape[0], joint_count, 3).max(axis=2)


def top_k_joints(joint_scores, k=DEFAULT_TOP_K):
    """Indices of the ``k`` largest scores of each frame, largest first, lower index first on ties.

    Raises:
        ContractError: If ``k`` is not in ``[1, n]``.
    """
    scores = np.asarray(joint_scores, dtype=np.float64)
    if not 1 <= k <= scores.shape[1]:
        raise ContractError("Cannot pick {} of {} joints".format(k, scores.shape[1]))
    return np.argsort(-scores, axis=1, kind="stable")[:, :k]


def explain(model, sample, class_index=None, k=DEFAULT_TOP_K):
    """Run the whole Grad-CAM procedure on one sample.

    Args:
        model: A CNN classifier.
        sample: A :class:`PaddedSample`.
        class_index: The class to explain. Defaults to the predicted class.
        k: Joints highlighted per frame.
    """
    _require_cnn(model)
    if class_index is None:
        class_index = predicted_class(model, sample)
    conv_heatmap = compute_conv_heatmap(model, sample, class_index)
    input_heatmap = upsample_to_input(conv_heatmap, (model.spec.t_max, model.spec.input_width))
    scores = joint_importance(input_heatmap, model.spec.joint_count)
    return GradCamResult(
        class_index=int(class_index),
        conv_heatmap=conv_heatmap,
        input_heatmap=input_heatmap,
        joint_scores=scores,
        top_joints=top_k_joints(scores, k),
        original_length=getattr(sample, "original_length", model.spec.t_max),
    )


def result_paths(prefix):
    "The heatmap and highlight paths for an export prefix."
    prefix = Path(prefix)
    return prefix.with_name(prefix.name + ".heatmap.csv"), prefix.with_name(prefix.name + ".highlight.txt")


def export_result(result, prefix):
    """Write the heatmap CSV and the highlight file of ``result``.

    Returns:
        The two paths written.

    Raises:
        ContractError: If the result has no frames.
        OSError: If a file cannot be written.
    """
    if result.input_heatmap.shape[0] == 0:
        raise ContractError("Cannot export a Grad-CAM result without frames")
    heatmap_path, highlight_path = result_paths(prefix)

    with open(heatmap_path, mode="wt", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        for row in result.input_heatmap:
            writer.writerow([repr(float(v)) for v in row])

    with open(highlight_path, mode="wt", encoding="utf-8") as handle:
        for frame, (joints, padded) in enumerate(zip(result.top_joints, result.padded_frames)):
            line = "{}: {}".format(frame, " ".join(str(int(j)) for j in joints))
            if padded:
                line += " " + PADDED_MARKER
            handle.write(line + "\n")

    log.info("Wrote %s and %s", heatmap_path, highlight_path)
    return heatmap_path, highlight_path


def read_heatmap(path):
    """Read a heatmap CSV.

    Raises:
        ParseError: If a cell is not a number.
        FormatError: If the rows differ in length.
    """
    rows = []
    with open(path, mode="rt", encoding="utf-8", newline="") as handle:
        for row_index, row in enumerate(csv.reader(handle)):
            values = []
            for col_index, cell in enumerate(row):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError("Not a number: {!r}".format(cell), row_index, col_index) from None
            rows.append(values)
    if len({len(row) for row in rows}) > 1:
        raise FormatError("Ragged heatmap in {}".format(path))
    return np.array(rows, dtype=np.float64)


def read_highlights(path):
    """Read a highlight file.

    Returns:
        ``(top_joints, original_length)``; the length is the index of the first padded frame.

    Raises:
        FormatError: If a line is malformed or frames are out of order.
    """
    rows = []
    original_length = None
    with open(path, mode="rt", encoding="utf-8") as handle:
        for line_index, line in enumerate(handle):
            text = line.strip()
            padded = text.endswith(PADDED_MARKER)
            if padded:
                text = text[: -len(PADDED_MARKER)].strip()
            frame, sep, joints = text.partition(":")
            try:
                if not sep or int(frame) != line_index:
                    raise ValueError(frame)
                rows.append([int(j) for j in joints.split()])
            except ValueError:
                raise FormatError("Malformed highlight line {}: {!r}".format(line_index, line)) from None
            if padded and original_length is None:
                original_length = line_index
    if len({len(row) for row in rows}) > 1:
        raise FormatError("Highlight rows in {} differ in length".format(path))
    return np.array(rows, dtype=np.int64), len(rows) if original_length is None else original_length
