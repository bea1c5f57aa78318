"Tests for the synthetic gesture generator and the displacement baseline."

# pylint: disable=C0111,W0621

import numpy as np
import pytest

from skelsign import synth
from skelsign.data import GestureLabel, load_dataset
from skelsign.exceptions import ContractError, SpecError


def test_role_map_for_79_joints():
    roles = synth.JointRoleMap.for_joint_count(79)
    assert (roles.rest, roles.left, roles.right) == (range(0, 39), range(39, 59), range(59, 79))


def test_role_map_for_two_joints():
    roles = synth.JointRoleMap.for_joint_count(2)
    assert (len(roles.rest), len(roles.left), len(roles.right)) == (0, 1, 1)


@pytest.mark.parametrize("field, value", [("joint_count", 1), ("t_min", 0), ("bi_ratio", 1.5), ("amplitude", 0)])
def test_invalid_config_raises(field, value):
    with pytest.raises(SpecError):
        synth.SynthConfig(**{field: value})


def test_dataset_has_exact_class_balance():
    dataset = synth.generate_dataset(11, synth.SynthConfig(joint_count=7, t_min=5, t_max_gen=9, bi_ratio=0.5))
    bi = sum(label == GestureLabel.BI for _, label in dataset)
    assert bi == round(11 * 0.5)
    assert [seq.name for seq, _ in dataset] == [synth.sample_name(i) for i in range(11)]


def test_lengths_stay_in_range(small_dataset, small_synth_config):
    assert all(small_synth_config.t_min <= seq.length <= small_synth_config.t_max_gen for seq, _ in small_dataset)


def test_generation_is_deterministic(small_synth_config):
    first = synth.generate_dataset(6, small_synth_config)
    second = synth.generate_dataset(6, small_synth_config)
    for (a, la), (b, lb) in zip(first, second):
        assert la == lb
        assert np.array_equal(a.frames, b.frames)


def test_too_small_dataset_raises(small_synth_config):
    with pytest.raises(ContractError):
        synth.generate_dataset(1, small_synth_config)


def test_mono_moves_one_hand_and_bi_moves_both(rng):
    cfg = synth.SynthConfig(joint_count=11, t_min=30, t_max_gen=30, noise=0.0)
    roles = synth.JointRoleMap.for_joint_count(11)
    mono = synth.generate_sample(GestureLabel.MONO, cfg, rng)
    moved = sorted(synth.displacement(mono, hand) > 0.1 for hand in roles.hands)
    assert moved == [False, True]
    bi = synth.generate_sample(GestureLabel.BI, cfg, rng)
    assert all(synth.displacement(bi, hand) > 0.1 for hand in roles.hands)
    assert synth.displacement(bi, roles.rest) == 0.0


def test_ambiguous_sample_raises_idle_hand(rng):
    cfg = synth.SynthConfig(joint_count=11, t_min=30, t_max_gen=30, noise=0.0)
    roles = synth.JointRoleMap.for_joint_count(11)
    sample = synth.make_ambiguous_sample(cfg, rng)
    heights = [sample.joint_positions()[:, hand.start : hand.stop, 1].mean() for hand in roles.hands]
    assert np.isclose(heights[0], heights[1])
    assert sorted(synth.displacement(sample, hand) > 0.1 for hand in roles.hands) == [False, True]


def test_written_dataset_loads_back(tmpdir_path, small_dataset):
    labels = synth.write_dataset(small_dataset, tmpdir_path)
    assert labels.name == synth.LABELS_FILE
    samples = load_dataset(tmpdir_path, labels=labels)
    assert [s.name for s in samples] == [seq.name for seq, _ in small_dataset]
    assert [s.label for s in samples] == [label for _, label in small_dataset]


def test_written_files_are_identical_across_runs(tmpdir_path, small_synth_config):
    for name in ("a", "b"):
        synth.write_dataset(synth.generate_dataset(4, small_synth_config), tmpdir_path / name)
    for path in sorted((tmpdir_path / "a").iterdir()):
        assert path.read_bytes() == (tmpdir_path / "b" / path.name).read_bytes()


def test_displacement_baseline_separates_the_classes():
    dataset = synth.generate_dataset(111, synth.SynthConfig(joint_count=15, t_min=20, t_max_gen=40, seed=1))
    sequences = [seq for seq, _ in dataset]
    labels = [label for _, label in dataset]
    baseline = synth.DisplacementBaseline().fit(sequences, labels)
    assert baseline.accuracy(sequences, labels) >= 0.9


def test_unfitted_baseline_raises(small_dataset):
    with pytest.raises(ContractError):
        synth.DisplacementBaseline().predict([seq for seq, _ in small_dataset])
