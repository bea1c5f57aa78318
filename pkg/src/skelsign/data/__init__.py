"""Skeleton files, preprocessing and dataset splits."""

from .dataset import DatasetSplits, SplitScheme, load_dataset, split_dataset  # NOQA
from .preprocessing import PaddedSample, flatten, pad_sequence, stack_grids  # NOQA
from .skeleton import (  # NOQA
    GestureLabel,
    SkeletonSequence,
    parse_skeleton_csv,
    read_labels,
    read_skeleton_file,
    write_labels,
    write_skeleton_csv,
)
