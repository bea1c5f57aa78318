"""Desk-scale experiments on the synthetic dataset.

These train full-size models and take minutes each; they only run with ``--run-slow``.
"""
import numpy as np
import pytest

from skelsign import gradcam, synth
from skelsign.data import GestureLabel, SplitScheme, split_dataset
from skelsign.models import ModelKind, ModelSpec, build_model
from skelsign.training import HyperParams, evaluate, run_low_label_baseline, run_ssl_pipeline, train_supervised

SSL_SEEDS = range(5)


def _train(samples, kind, seed=0, epochs=30):
    splits = split_dataset(samples, SplitScheme.SL, seed)
    model = build_model(
        ModelSpec(kind=kind, t_max=samples[0].t_max, joint_count=samples[0].joint_count, seed=seed)
    )
    return model, train_supervised(model, splits, HyperParams(epochs=epochs, seed=seed))


def test_displacement_baseline_separates_the_default_dataset(gesture_dataset):
    sequences = [sequence for sequence, _ in gesture_dataset]
    labels = [label for _, label in gesture_dataset]
    assert synth.DisplacementBaseline().fit(sequences, labels).accuracy(sequences, labels) >= 0.9


@pytest.mark.slow
@pytest.mark.parametrize("kind", [ModelKind.FC, ModelKind.CNN, ModelKind.LSTM])
def test_supervised_accuracy(gesture_samples, kind):
    _, report = _train(gesture_samples, kind)
    assert report.split_sizes == {"train": 66, "validation": 11, "test": 34}
    assert report.test_accuracy >= 0.95


@pytest.mark.slow
def test_pretraining_helps_with_few_labels(gesture_samples):
    hp_unsup = HyperParams(epochs=20)
    hp_sup = HyperParams(epochs=30)
    baseline, pretrained = [], []
    for seed in SSL_SEEDS:
        baseline.append(run_low_label_baseline(gesture_samples, hp_sup.replace(seed=seed), seed).test_accuracy)
        _, report = run_ssl_pipeline(
            gesture_samples, hp_unsup.replace(seed=seed), hp_sup.replace(seed=seed), seed
        )
        assert report.split_sizes == {"train": 5, "validation": 5, "test": 101}
        pretrained.append(report.test_accuracy)
    assert np.mean(pretrained) >= np.mean(baseline) + 0.03


def _moving_hand(sequence):
    roles = synth.JointRoleMap.for_joint_count(sequence.joint_count)
    return max(roles.hands, key=lambda hand: synth.displacement(sequence, hand))


@pytest.mark.slow
def test_gradcam_focuses_on_the_moving_hand(gesture_dataset, gesture_samples):
    model, _ = _train(gesture_samples, ModelKind.CNN)
    mono = [
        (sequence, sample)
        for (sequence, _), sample in zip(gesture_dataset, gesture_samples)
        if sample.label == GestureLabel.MONO and evaluate(model, [sample]).accuracy == 1.0
    ]
    assert len(mono) >= 20

    hits = []
    for sequence, sample in mono:
        hand = set(_moving_hand(sequence))
        result = gradcam.explain(model, sample, class_index=int(GestureLabel.MONO))
        active = result.top_joints[: sample.original_length]
        hits.extend(bool(hand.intersection(row.tolist())) for row in active)
    assert np.mean(hits) > 0.5
