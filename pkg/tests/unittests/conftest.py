import contextlib
import os

import numpy as np
import pytest

from skelsign import synth
from skelsign.data import pad_sequence


class PathUtils:
    "Path utilities for testing."

    @staticmethod
    @contextlib.contextmanager
    def excursion(directory):
        """Context manager for temporarily setting `directory` as the current working
        directory.
        """
        old_dir = os.getcwd()
        os.chdir(str(directory))
        try:
            yield
        finally:
            os.chdir(old_dir)


@pytest.fixture
def path_utils():
    "Path utilities for testing."
    return PathUtils


@pytest.fixture
def rng():
    "A seeded NumPy generator."
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_synth_config():
    "A generator setting small enough for fast training tests."
    return synth.SynthConfig(joint_count=7, t_min=6, t_max_gen=8, seed=3)


@pytest.fixture(scope="session")
def small_dataset(small_synth_config):
    "24 small labelled sequences."
    return synth.generate_dataset(24, small_synth_config)


@pytest.fixture
def small_samples(small_dataset, small_synth_config):
    "The small dataset padded to the generator's longest length."
    return [pad_sequence(seq, small_synth_config.t_max_gen, label=label) for seq, label in small_dataset]


@pytest.fixture
def small_data_dir(tmpdir_path, small_dataset):
    "The small dataset written to disk. Returns (directory, labels path)."
    directory = tmpdir_path / "data"
    labels = synth.write_dataset(small_dataset, directory)
    return directory, labels
