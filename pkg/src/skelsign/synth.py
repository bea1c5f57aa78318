"""Synthetic one-handed and two-handed gestures.

A generated skeleton has three groups of joints (see :class:`JointRoleMap`): the two hands and everything else.
Every joint sways slightly around a fixed rest pose. In a one-handed (``Mono``) gesture one hand, chosen at random,
is lifted along a smooth arc while the other stays low; in a two-handed (``Bi``) gesture both hands follow arcs.

Files are written in the skeleton CSV format with a ``labels.csv`` beside them, so the output can be fed to every
command that reads real recordings.
"""
import dataclasses
import logging
from pathlib import Path

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit

from skelsign.data.skeleton import GestureLabel, SkeletonSequence, write_labels, write_skeleton_csv
from skelsign.exceptions import ContractError, SpecError

log = logging.getLogger(__name__)

LABELS_FILE = "labels.csv"

# Rest height of the hands and the centre of the body joints.
HAND_REST_HEIGHT = 0.8
BODY_HEIGHT = 1.2


@dataclasses.dataclass(frozen=True)
class SynthConfig:
    """Generator settings.

    Attributes:
        joint_count: Joints per skeleton.
        t_min: Shortest sequence, in frames.
        t_max_gen: Longest sequence, in frames.
        noise: Amplitude of the sway of every joint.
        amplitude: Size of the hand arcs.
        seed: Seed of the whole dataset.
        bi_ratio: Fraction of two-handed gestures.
        frame_rate: Frames per second of the timestamps.
    """

    joint_count: int = 79
    t_min: int = 40
    t_max_gen: int = 100
    noise: float = 0.01
    amplitude: float = 1.0
    seed: int = 0
    bi_ratio: float = 0.5
    frame_rate: float = 120.0

    def __post_init__(self):
        if self.joint_count < 2:
            raise SpecError("A synthetic skeleton needs at least two joints, got {}".format(self.joint_count))
        if not 1 <= self.t_min <= self.t_max_gen:
            raise SpecError("Need 1 ≤ t_min ≤ t_max_gen, got {} and {}".format(self.t_min, self.t_max_gen))
        if self.noise < 0:
            raise SpecError("noise must be non-negative, got {}".format(self.noise))
        if self.amplitude <= 0:
            raise SpecError("amplitude must be positive, got {}".format(self.amplitude))
        if not 0 <= self.bi_ratio <= 1:
            raise SpecError("bi_ratio must lie in [0, 1], got {}".format(self.bi_ratio))
        if self.frame_rate <= 0:
            raise SpecError("frame_rate must be positive, got {}".format(self.frame_rate))


@dataclasses.dataclass(frozen=True)
class JointRoleMap:
    """Partition of the joint indices into left hand, right hand and the rest.

    The last ``2·h`` joints are the hands, left before right, with ``h = max(1, (n + 1) // 4)``. For 79 joints the
    rest is 0–38, the left hand 39–58 and the right hand 59–78.
    """

    rest: range
    left: range
    right: range

    @classmethod
    def for_joint_count(cls, joint_count):
        "The role map of an ``n``-joint skeleton."
        hand = max(1, (joint_count + 1) // 4)
        first_hand = joint_count - 2 * hand
        if first_hand < 0:
            raise SpecError("{} joints cannot hold two hands".format(joint_count))
        return cls(
            rest=range(0, first_hand),
            left=range(first_hand, first_hand + hand),
            right=range(first_hand + hand, joint_count),
        )

    @property
    def hands(self):
        "The two hands, left first."
        return self.left, self.right


def rest_pose(joint_count):
    """The fixed ``n×3`` pose every joint sways around. Hands hang low on either side of the body."""
    roles = JointRoleMap.for_joint_count(joint_count)
    index = np.arange(joint_count, dtype=np.float64)
    pose = np.stack(
        [0.3 * np.sin(1.7 * index), BODY_HEIGHT + 0.5 * np.cos(0.9 * index), 0.2 * np.sin(2.3 * index)], axis=1
    )
    for side, hand in zip((-1.0, 1.0), roles.hands):
        local = np.arange(len(hand), dtype=np.float64)
        pose[hand.start : hand.stop] = np.stack(
            [
                side * 0.3 + 0.03 * np.sin(local),
                HAND_REST_HEIGHT + 0.03 * np.cos(local),
                0.1 + 0.02 * np.sin(2.0 * local),
            ],
            axis=1,
        )
    return pose


def _sway(frames, joint_count, noise, rng):
    "A slow sinusoidal drift of amplitude ``noise`` per joint and axis."
    progress = np.linspace(0.0, 1.0, frames)[:, np.newaxis, np.newaxis]
    frequency = rng.uniform(0.5, 1.5, size=(1, joint_count, 3))
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(1, joint_count, 3))
    return noise * np.sin(2.0 * np.pi * frequency * progress + phase)


def _arc(frames, amplitude, rng):
    """A ``t×3`` offset that starts at zero, rises and sways sideways, and comes back down."""
    progress = np.linspace(0.0, 1.0, frames)
    frequency = rng.uniform(0.5, 1.5)
    phase = rng.uniform(0.0, 2.0 * np.pi)
    depth_frequency = rng.uniform(0.5, 1.5)
    return amplitude * np.stack(
        [
            0.3 * (np.sin(2.0 * np.pi * frequency * progress + phase) - np.sin(phase)),
            0.6 * np.sin(np.pi * progress),
            0.2 * (1.0 - np.cos(2.0 * np.pi * depth_frequency * progress)),
        ],
        axis=1,
    )


def _sequence(name, positions, cfg):
    frames = positions.shape[0]
    return SkeletonSequence(
        name=name,
        joint_count=cfg.joint_count,
        frames=positions.reshape(frames, 3 * cfg.joint_count),
        timestamps=np.arange(frames, dtype=np.float64) / cfg.frame_rate,
    )


def _moving_hands(label, rng):
    if label == GestureLabel.BI:
        return (0, 1)
    return (int(rng.integers(2)),)


def _positions(label, cfg, rng):
    frames = int(rng.integers(cfg.t_min, cfg.t_max_gen + 1))
    roles = JointRoleMap.for_joint_count(cfg.joint_count)
    positions = np.broadcast_to(rest_pose(cfg.joint_count), (frames, cfg.joint_count, 3)).copy()
    positions += _sway(frames, cfg.joint_count, cfg.noise, rng)
    moving = _moving_hands(label, rng)
    for side in moving:
        hand = roles.hands[side]
        positions[:, hand.start : hand.stop] += _arc(frames, cfg.amplitude, rng)[:, np.newaxis, :]
    return positions, moving


def generate_sample(label, cfg, rng, name="gesture"):
    """One synthetic gesture of class ``label``.

    Args:
        label: :class:`GestureLabel`.
        cfg: :class:`SynthConfig`.
        rng: A NumPy ``Generator``.
        name: Name of the sequence.
    """
    positions, _ = _positions(GestureLabel(label), cfg, rng)
    return _sequence(name, positions, cfg)


def make_ambiguous_sample(cfg, rng, name="ambiguous"):
    """A one-handed gesture whose idle hand is held up at the height of the moving hand.

    The idle hand does not follow an arc; only its rest position is raised.
    """
    positions, moving = _positions(GestureLabel.MONO, cfg, rng)
    roles = JointRoleMap.for_joint_count(cfg.joint_count)
    active = roles.hands[moving[0]]
    idle = roles.hands[1 - moving[0]]
    lift = positions[:, active.start : active.stop, 1].mean() - positions[:, idle.start : idle.stop, 1].mean()
    positions[:, idle.start : idle.stop, 1] += lift
    return _sequence(name, positions, cfg)


def sample_name(index):
    "File stem of the ``index``-th generated gesture."
    return "gesture_{:03d}".format(index)


def generate_dataset(count, cfg):
    """Generate ``count`` labelled gestures.

    Exactly ``round(count · bi_ratio)`` gestures are two-handed, in shuffled order. Each sample draws from its own
    random stream spawned from ``cfg.seed``.

    Returns:
        A list of ``(SkeletonSequence, GestureLabel)`` pairs named ``gesture_000``, ``gesture_001``, ...

    Raises:
        ContractError: If ``count`` is less than 2.
    """
    if count < 2:
        raise ContractError("A dataset needs at least two samples, got {}".format(count))
    root = np.random.SeedSequence(cfg.seed)
    bi_count = int(round(count * cfg.bi_ratio))
    labels = np.array([GestureLabel.BI] * bi_count + [GestureLabel.MONO] * (count - bi_count))
    labels = np.random.default_rng(root.spawn(1)[0]).permutation(labels)

    streams = root.spawn(count + 1)[1:]
    dataset = [
        (generate_sample(label, cfg, np.random.default_rng(stream), name=sample_name(index)), GestureLabel(label))
        for index, (label, stream) in enumerate(zip(labels, streams))
    ]
    log.info("Generated %s gestures: %s Mono, %s Bi", count, count - bi_count, bi_count)
    return dataset


def write_dataset(dataset, out_dir):
    """Write ``<name>.csv`` for every sequence and a ``labels.csv`` next to them.

    Returns:
        The path of the label file.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for sequence, _ in dataset:
        with open(out_dir / "{}.csv".format(sequence.name), mode="wt", encoding="utf-8", newline="") as handle:
            write_skeleton_csv(sequence, handle)
    labels_path = out_dir / LABELS_FILE
    with open(labels_path, mode="wt", encoding="utf-8", newline="") as handle:
        write_labels(((sequence.name, label) for sequence, label in dataset), handle)
    return labels_path


def displacement(sequence, joints):
    """Total path length of a group of joints: ``Σ_f ‖pos_f − pos_{f−1}‖`` summed over the joints."""
    positions = sequence.joint_positions()[:, joints.start : joints.stop]
    return float(np.linalg.norm(np.diff(positions, axis=0), axis=2).sum())


def displacement_features(sequence):
    "``(log(1 + smaller hand displacement), log(1 + larger hand displacement))``."
    roles = JointRoleMap.for_joint_count(sequence.joint_count)
    left, right = (displacement(sequence, hand) for hand in roles.hands)
    return np.log1p([min(left, right), max(left, right)])


class DisplacementBaseline:
    """Logistic regression on :func:`displacement_features`.

    It needs no learning of joint roles and shows whether a generated dataset is separable at all.
    """

    def __init__(self, penalty=1e-3):
        self.penalty = penalty
        self.weights = None

    @staticmethod
    def _design(sequences):
        features = np.array([displacement_features(sequence) for sequence in sequences])
        return np.hstack([features, np.ones((len(features), 1))])

    def fit(self, sequences, labels):
        "Fit the weights by minimizing the penalized logistic loss."
        design = self._design(sequences)
        targets = np.array([int(label) for label in labels], dtype=np.float64)

        def objective(weights):
            margin = design @ weights
            loss = np.mean(np.logaddexp(0.0, margin) - targets * margin) + self.penalty * weights[:-1] @ weights[:-1]
            grad = design.T @ (expit(margin) - targets) / len(targets)
            grad[:-1] += 2.0 * self.penalty * weights[:-1]
            return loss, grad

        result = minimize(objective, np.zeros(design.shape[1]), jac=True, method="L-BFGS-B")
        self.weights = result.x
        return self

    def predict(self, sequences):
        "Predicted :class:`GestureLabel` per sequence."
        if self.weights is None:
            raise ContractError("The baseline has not been fitted")
        return [GestureLabel(int(p)) for p in (self._design(sequences) @ self.weights > 0)]

    def accuracy(self, sequences, labels):
        "Fraction of correctly predicted labels."
        predicted = self.predict(sequences)
        return float(np.mean([p == GestureLabel(label) for p, label in zip(predicted, labels)]))
