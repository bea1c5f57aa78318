"""This is the command-line program for skelsign.

Here we manage command-line parsing and launching of dataset synthesis, training, evaluation, Grad-CAM export and
multi-seed sweeps.
"""
import dataclasses
import json
import logging
import signal
import sys
from pathlib import Path

import click
import numpy as np
from exit_codes import ExitCode
from rich.logging import RichHandler

import skelsign.commands
import skelsign.plugins
from skelsign import gradcam, synth
from skelsign.config import ConfigDict, ConfigError, load_config, resolve_seed, serialize_config
from skelsign.data import GestureLabel, SplitScheme, pad_sequence, read_skeleton_file
from skelsign.exceptions import InsufficientDataError, SkelsignError
from skelsign.models import ModelKind, load_model, save_model
from skelsign.progress import report_progress
from skelsign.training import evaluate, run_low_label_baseline, run_ssl_pipeline
from skelsign.version import __version__
from skelsign.work_db import ExperimentDB, use_db

log = logging.getLogger()

REPORT_FILE = "report.toml"
CHECKPOINT_FILE = "model.npz"

_ERROR_EXIT_CODE = 1


@click.group()
@click.option(
    "--verbosity",
    default="WARNING",
    help="The logging level to use.",
    type=click.Choice(["CRITICAL", "DEBUG", "ERROR", "FATAL", "INFO", "WARNING"], case_sensitive=True),
)
@click.version_option(version=__version__)
def cli(verbosity):
    "Hand-gesture recognition on 3D skeleton sequences"
    logging_level = getattr(logging, verbosity)
    logging.basicConfig(level=logging_level, handlers=[RichHandler()])


def _config(config_file):
    return ConfigDict({}) if config_file is None else load_config(config_file)


def _data_source(config, data_dir, labels):
    data_dir = data_dir if data_dir is not None else config.get("data-dir")
    if data_dir is None:
        raise click.UsageError("No data directory: pass DATA_DIR or set data-dir in the config")
    return data_dir, labels if labels is not None else config.labels


def _model_kind(config, kind, allowed):
    kind = kind if kind is not None else config.model_kind
    if kind not in [a.value for a in allowed]:
        raise click.UsageError("Model must be one of {}, got {}".format(", ".join(a.value for a in allowed), kind))
    return ModelKind(kind)


def _print_values(**values):
    for key, value in values.items():
        print("{}: {}".format(key, value))


def _print_evaluation(accuracy, confusion, misclassified, f1=None, title="test accuracy"):
    print("{}: {:.4f}".format(title, accuracy))
    if f1 is not None:
        print("f1: {:.4f}".format(f1))
    print("confusion: {}".format(json.dumps([[int(c) for c in row] for row in confusion])))
    print("misclassified: {}".format(" ".join(misclassified)))


def hyperparameter_options(func):
    "Decorate ``func`` with the training flags that override ``[skelsign.train]``."
    options = (
        click.option("--epochs", type=click.IntRange(min=0), default=None, help="Training epochs"),
        click.option("--batch-size", type=click.IntRange(min=1), default=None, help="Samples per step"),
        click.option("--learning-rate", type=click.FloatRange(min=0), default=None, help="Step size"),
        click.option("--optimizer", type=click.Choice(["adam", "sgd"]), default=None, help="Optimizer"),
    )
    for option in reversed(options):
        func = option(func)
    return func


def data_options(func):
    "Decorate ``func`` with the dataset and seed flags shared by the training commands."
    options = (
        click.argument("data_dir", required=False),
        click.option("--labels", default=None, help="The name,label file. Defaults to the config's labels."),
        click.option("--config", "config_file", default=None, help="A TOML configuration file."),
        click.option(
            "--seed", type=click.IntRange(min=0), default=None, help="Seed. Defaults to $SKELSIGN_SEED, then the config."
        ),
        click.option("--t-max", type=click.IntRange(min=1), default=None, help="Padded length."),
    )
    for option in reversed(options):
        func = option(func)
    return func


@cli.command(name="synth")
@click.option("--count", type=click.IntRange(min=2), default=111, show_default=True, help="Number of gestures")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed. Defaults to $SKELSIGN_SEED, then 0.")
@click.option("--out", "out_dir", default="synthetic", show_default=True, help="Output directory")
@click.option("--joints", type=click.IntRange(min=2), default=79, show_default=True, help="Joints per skeleton")
@click.option("--t-min", type=click.IntRange(min=1), default=40, show_default=True, help="Shortest gesture")
@click.option("--t-max-gen", type=click.IntRange(min=1), default=100, show_default=True, help="Longest gesture")
@click.option("--noise", type=click.FloatRange(min=0), default=0.01, show_default=True, help="Sway amplitude")
@click.option("--bi-ratio", type=click.FloatRange(0, 1), default=0.5, show_default=True, help="Two-handed share")
def synth_command(count, seed, out_dir, joints, t_min, t_max_gen, noise, bi_ratio):
    """Write a synthetic dataset of one-handed and two-handed gestures.

    The directory receives one skeleton CSV per gesture and a labels.csv. The same seed always gives the same
    bytes.
    """
    seed = resolve_seed(seed)
    cfg = synth.SynthConfig(
        joint_count=joints, t_min=t_min, t_max_gen=t_max_gen, noise=noise, seed=seed, bi_ratio=bi_ratio
    )
    dataset = synth.generate_dataset(count, cfg)
    labels_path = synth.write_dataset(dataset, out_dir)

    bi = sum(label == GestureLabel.BI for _, label in dataset)
    _print_values(
        seed=seed,
        count=count,
        mono=count - bi,
        bi=bi,
        t_max=max(sequence.length for sequence, _ in dataset),
        labels=labels_path,
    )
    sys.exit(ExitCode.OK)


@cli.command()
@data_options
@click.option("--model", "kind", type=click.Choice(["fc", "cnn", "lstm"]), default=None, help="Classifier kind")
@click.option("--scheme", type=click.Choice([s.value for s in SplitScheme]), default="sl", show_default=True)
@hyperparameter_options
@click.option("--out", "out_dir", default=None, help="Directory for report.toml and model.npz")
@click.option("--timing/--no-timing", default=False, help="Include the wall-clock duration in the report")
def train(
    data_dir, labels, config_file, seed, t_max, kind, scheme, epochs, batch_size, learning_rate, optimizer, out_dir,
    timing,
):
    """Train a classifier and print its test accuracy and confusion matrix.

    With --scheme ssl the classifier only sees the 5 + 5 labelled samples of the self-supervised split.
    """
    config = _config(config_file)
    data_dir, labels = _data_source(config, data_dir, labels)
    seed = resolve_seed(seed, config)
    kind = _model_kind(config, kind, (ModelKind.FC, ModelKind.CNN, ModelKind.LSTM))
    hp = config.hyperparams(
        "train", seed, epochs=epochs, batch_size=batch_size, learning_rate=learning_rate, optimizer=optimizer
    )

    samples = skelsign.commands.load_samples(data_dir, labels, t_max if t_max is not None else config.t_max)
    model, report = skelsign.commands.train_classifier(
        samples, kind, scheme, seed, hp, config.model_options(kind.value)
    )

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / REPORT_FILE).write_text(report.to_toml(include_timing=timing), encoding="utf-8")
        save_model(model, out_dir / CHECKPOINT_FILE)

    _print_values(seed=seed, model=kind.value, scheme=scheme)
    _print_evaluation(report.test_accuracy, report.confusion, report.misclassified, report.f1)
    print("test+validation accuracy: {:.4f}".format(report.test_validation_accuracy))
    sys.exit(ExitCode.OK)


@cli.command()
@data_options
@click.option("--model", "kind", type=click.Choice(["fc", "cnn"]), default=None, help="Backbone kind")
@hyperparameter_options
@click.option("--pretrain-epochs", type=click.IntRange(min=0), default=None, help="Reconstruction epochs")
@click.option("--contrastive-weight", type=click.FloatRange(min=0), default=None, help="Weight of the contrastive term")
@click.option(
    "--contrastive-temperature", type=click.FloatRange(min=0, min_open=True), default=None, help="Temperature"
)
@click.option("--out", "out_dir", default=None, help="Directory for the three reports")
@click.option("--timing/--no-timing", default=False, help="Include the wall-clock durations in the reports")
def ssl(
    data_dir, labels, config_file, seed, t_max, kind, epochs, batch_size, learning_rate, optimizer, pretrain_epochs,
    contrastive_weight, contrastive_temperature, out_dir, timing,
):
    """Compare self-supervised pretraining with plain training on the same 5 + 5 labelled samples.

    The training flags apply to the fine-tuning and to the baseline. Pretraining reads [skelsign.pretrain].
    """
    config = _config(config_file)
    data_dir, labels = _data_source(config, data_dir, labels)
    seed = resolve_seed(seed, config)
    kind = _model_kind(config, kind, (ModelKind.FC, ModelKind.CNN))
    hp_sup = config.hyperparams(
        "train", seed, epochs=epochs, batch_size=batch_size, learning_rate=learning_rate, optimizer=optimizer
    )
    hp_unsup = config.hyperparams(
        "pretrain",
        seed,
        epochs=pretrain_epochs,
        contrastive_weight=contrastive_weight,
        contrastive_temperature=contrastive_temperature,
    )
    options = config.model_options(kind.value)

    samples = skelsign.commands.load_samples(data_dir, labels, t_max if t_max is not None else config.t_max)
    baseline = run_low_label_baseline(samples, hp_sup, seed, kind=kind, model_options=options)
    pretraining, downstream = run_ssl_pipeline(samples, hp_unsup, hp_sup, seed, backbone=kind, model_options=options)

    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, report in (("baseline", baseline), ("pretrain", pretraining), ("ssl", downstream)):
            (out_dir / "{}.toml".format(name)).write_text(report.to_toml(include_timing=timing), encoding="utf-8")

    _print_values(seed=seed, model=kind.value)
    print("reconstruction loss: {:.6g}".format(pretraining.final_loss))
    print("supervised(10% labels) test accuracy: {:.4f}".format(baseline.test_accuracy))
    print("ssl test accuracy: {:.4f}".format(downstream.test_accuracy))
    sys.exit(ExitCode.OK)


@cli.command(name="gradcam")
@click.option("--checkpoint", required=True, help="A CNN checkpoint written by train")
@click.option("--sample", "sample_file", required=True, help="A skeleton CSV file")
@click.option("--class", "class_index", type=click.IntRange(min=0), default=None, help="Class to explain")
@click.option("--k", type=click.IntRange(min=1), default=gradcam.DEFAULT_TOP_K, show_default=True)
@click.option("--out", "prefix", default=None, help="Prefix of the two output files. Defaults to the sample stem.")
def gradcam_command(checkpoint, sample_file, class_index, k, prefix):
    """Explain a CNN classification with Grad-CAM.

    Writes PREFIX.heatmap.csv and PREFIX.highlight.txt and prints the predicted class.
    """
    model = load_model(checkpoint)
    sequence = read_skeleton_file(sample_file)
    sample = pad_sequence(sequence, model.spec.t_max)
    predicted = gradcam.predicted_class(model, sample)
    result = gradcam.explain(model, sample, class_index=class_index, k=k)
    heatmap_path, highlight_path = gradcam.export_result(
        result, prefix if prefix is not None else Path(sample_file).with_suffix("")
    )

    _print_values(
        seed=model.spec.seed,
        predicted=GestureLabel(predicted).display,
        explained=GestureLabel(result.class_index).display,
        heatmap=heatmap_path,
        highlight=highlight_path,
    )
    sys.exit(ExitCode.OK)


@cli.command(name="eval")
@click.option("--checkpoint", required=True, help="A classifier checkpoint written by train")
@click.argument("data_dir")
@click.option("--labels", required=True, help="The name,label file")
@click.option("--ambiguous", type=click.IntRange(min=0), default=0, help="Append this many ambiguous Mono gestures")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of the ambiguous gestures.")
def eval_command(checkpoint, data_dir, labels, ambiguous, seed):
    """Evaluate a checkpoint on a labelled directory and print accuracy, confusion matrix and misclassified names."""
    seed = resolve_seed(seed)
    model = load_model(checkpoint)
    try:
        samples = skelsign.commands.load_samples(data_dir, labels, model.spec.t_max)
    except InsufficientDataError as exc:
        raise click.UsageError(str(exc))
    samples.extend(ambiguous_samples(ambiguous, model.spec, seed))

    result = evaluate(model, samples)
    _print_values(seed=seed, samples=len(samples))
    _print_evaluation(result.accuracy, result.confusion, result.misclassified, result.f1, title="accuracy")
    sys.exit(ExitCode.OK)


def ambiguous_samples(count, spec, seed):
    "``count`` padded Mono gestures whose idle hand is held up, named ``ambiguous_000``, ..."
    cfg = synth.SynthConfig(
        joint_count=spec.joint_count,
        t_min=min(synth.SynthConfig.t_min, spec.t_max),
        t_max_gen=spec.t_max,
        seed=seed,
    )
    streams = np.random.SeedSequence(seed).spawn(count)
    return [
        pad_sequence(
            synth.make_ambiguous_sample(cfg, np.random.default_rng(stream), name="ambiguous_{:03d}".format(index)),
            spec.t_max,
            label=GestureLabel.MONO,
        )
        for index, stream in enumerate(streams)
    ]


@cli.command()
@click.argument("config_file", type=click.File("wt"))
def new_config(config_file):
    """Create a new config file."""
    cfg = skelsign.commands.new_config()
    config_str = serialize_config(cfg)
    config_file.write(config_str)
    sys.exit(ExitCode.OK)


@cli.command()
def architectures():
    """List the available architecture plugins."""
    print("\n".join(skelsign.plugins.architecture_names()))

    sys.exit(ExitCode.OK)


@cli.command()
@click.argument("config_file")
@click.argument("session_file")
def init(config_file, session_file):
    """Initialize a sweep session from a configuration.

    The session holds one job per seed and regime listed in [skelsign.sweep]. No training happens here; run
    `skelsign exec` to work through the jobs.
    """
    cfg = load_config(config_file)

    with use_db(session_file) as database:
        skelsign.commands.init(cfg, database)

    sys.exit(ExitCode.OK)


@cli.command(name="exec")
@click.argument("config_file")
@click.argument("session_file")
def handle_exec(config_file, session_file):
    """Run the jobs of a session that have no result yet."""
    cfg = load_config(config_file)

    with use_db(session_file, mode=ExperimentDB.Mode.open) as experiment_db:
        skelsign.commands.execute(experiment_db, cfg)
    sys.exit(ExitCode.OK)


@cli.command()
@click.argument("session_file")
def dump(session_file):
    """JSON dump of session data.

    Each line of output is a list with two elements: a Job and a JobResult, both JSON-serialized. The JobResult can
    be null, indicating a Job with no result.
    """

    def job_to_dict(job):
        d = dataclasses.asdict(job)
        d["regime"] = job.regime.value
        return d

    def result_to_dict(result):
        d = dataclasses.asdict(result)
        d["outcome"] = result.outcome.value
        return d

    with use_db(session_file, ExperimentDB.Mode.open) as database:
        for job, result in database.completed_jobs:
            print(json.dumps((job_to_dict(job), result_to_dict(result))))
        for job in database.pending_jobs:
            print(json.dumps((job_to_dict(job), None)))

    sys.exit(ExitCode.OK)


_SIGNAL_EXIT_CODE_BASE = 128


def main(argv=None):
    """Invoke skelsign.

    :param argv: the command line arguments
    """
    signal.signal(signal.SIGINT, lambda *args: sys.exit(_SIGNAL_EXIT_CODE_BASE + signal.SIGINT))

    if hasattr(signal, "SIGINFO"):
        signal.signal(getattr(signal, "SIGINFO"), lambda *args: report_progress(sys.stderr))

    try:
        return cli(argv)
    except ConfigError as exc:
        print(repr(exc), file=sys.stderr)
        if exc.__cause__ is not None:
            print(exc.__cause__, file=sys.stderr)
        return _ERROR_EXIT_CODE
    except (SkelsignError, OSError) as exc:
        print("{}: {}".format(type(exc).__name__, exc), file=sys.stderr)
        return _ERROR_EXIT_CODE
    except SystemExit as exc:
        # We intercept this here so that main() is testable.
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
