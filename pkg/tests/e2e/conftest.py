import pytest

from skelsign import synth
from skelsign.data import pad_sequence


@pytest.fixture(scope="session")
def gesture_dataset():
    "The 111-gesture synthetic dataset with its default settings."
    return synth.generate_dataset(111, synth.SynthConfig(seed=0))


@pytest.fixture(scope="session")
def gesture_samples(gesture_dataset):
    "The dataset padded to its longest gesture."
    t_max = max(sequence.length for sequence, _ in gesture_dataset)
    return [pad_sequence(sequence, t_max, label=label) for sequence, label in gesture_dataset]
