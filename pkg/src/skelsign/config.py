"""Configuration module.

A configuration is a TOML document whose settings live under a top-level ``[skelsign]`` table::

    [skelsign]
    data-dir = "data"
    labels = "data/labels.csv"
    model = "cnn"
    seed = 1

    [skelsign.train]
    epochs = 30
    learning-rate = 0.001

    [skelsign.pretrain]
    epochs = 20

    [skelsign.model-options.cnn]
    conv-channels = [8, 16, 32]

    [skelsign.sweep]
    seeds = [0, 1, 2, 3, 4]
    regimes = ["sl-low", "ssl"]
"""
from contextlib import contextmanager
import logging
import os
import sys

import toml

from skelsign.exceptions import SpecError
from skelsign.training.params import HyperParams

log = logging.getLogger()

SEED_ENVIRONMENT_VARIABLE = "SKELSIGN_SEED"

# Config key → HyperParams field.
HYPERPARAM_KEYS = {
    "epochs": "epochs",
    "batch-size": "batch_size",
    "learning-rate": "learning_rate",
    "optimizer": "optimizer",
    "beta1": "beta1",
    "beta2": "beta2",
    "epsilon": "epsilon",
    "contrastive-temperature": "contrastive_temperature",
    "contrastive-weight": "contrastive_weight",
}

# Config key → ModelSpec field.
MODEL_KEYS = {
    "hidden-sizes": "hidden_sizes",
    "conv-channels": "conv_channels",
    "kernel-size": "kernel_size",
    "pool": "pool",
    "dense-width": "dense_width",
    "lstm-hidden": "lstm_hidden",
}


def load_config(filename=None):
    """Load a configuration from a file or stdin.

    If `filename` is `None` or "-", then configuration gets read from stdin.

    Returns: A `ConfigDict`.

    Raises: ConfigError: If there is an error loading the config.
    """
    try:
        with _config_stream(filename) as handle:
            filename = handle.name
            return deserialize_config(handle.read())
    except (OSError, toml.TomlDecodeError, UnicodeDecodeError, KeyError) as exc:
        raise ConfigError("Error loading configuration from {}".format(filename)) from exc


def deserialize_config(sz) -> "ConfigDict":
    "Parse a serialized config into a ConfigDict."
    return toml.loads(sz, _dict=ConfigDict)["skelsign"]


def serialize_config(config):
    "Return the serialized form of `config`."
    return toml.dumps({"skelsign": config})


class ConfigError(Exception):
    "Base class for exceptions raised by ConfigDict."


class ConfigKeyError(ConfigError, KeyError):
    "KeyError subclass raised by ConfigDict."


class ConfigValueError(ConfigError, ValueError):
    "ValueError subclass raised by ConfigDict."


class ConfigDict(dict):
    """A dictionary subclass that contains the application configuration."""

    def __getitem__(self, key):
        try:
            return super().__getitem__(key)
        except KeyError as exc:
            raise ConfigKeyError(*exc.args)

    def sub(self, *segments):
        "Get a sub-configuration."
        d = self
        for segment in segments:
            try:
                d = d[segment]
            except KeyError:
                return ConfigDict({})
        return d

    @property
    def data_dir(self):
        "Directory of the skeleton files."
        return self["data-dir"]

    @property
    def labels(self):
        "Path of the label file, or None."
        return self.get("labels")

    @property
    def model_kind(self):
        "The configured classifier kind."
        return self.get("model", "cnn")

    @property
    def t_max(self):
        "Padded sequence length, or None to use the longest file."
        value = self.get("t-max")
        return None if value is None else int(value)

    def hyperparams(self, section, seed, **overrides):
        """The :class:`HyperParams` of ``[skelsign.<section>]``.

        ``overrides`` (HyperParams field names) take precedence over the file; ``None`` overrides are ignored.

        Raises:
            ConfigValueError: If a key is unknown or a value is invalid.
        """
        values = {}
        for key, value in self.sub(section).items():
            try:
                values[HYPERPARAM_KEYS[key]] = value
            except KeyError:
                raise ConfigValueError("Unknown key {!r} in [skelsign.{}]".format(key, section)) from None
        values.update({name: value for name, value in overrides.items() if value is not None})
        try:
            return HyperParams(seed=seed, **values)
        except SpecError as exc:
            raise ConfigValueError("Invalid [skelsign.{}]: {}".format(section, exc)) from exc

    def model_options(self, kind):
        """ModelSpec fields from ``[skelsign.model-options.<kind>]``.

        Raises:
            ConfigValueError: If a key is unknown.
        """
        options = {}
        for key, value in self.sub("model-options", kind).items():
            try:
                options[MODEL_KEYS[key]] = value
            except KeyError:
                raise ConfigValueError(
                    "Unknown key {!r} in [skelsign.model-options.{}]".format(key, kind)
                ) from None
        return options

    @property
    def sweep_seeds(self):
        "Seeds of a multi-seed sweep."
        return [int(seed) for seed in self.sub("sweep").get("seeds", [0])]

    @property
    def sweep_regimes(self):
        "Regimes of a multi-seed sweep."
        return list(self.sub("sweep").get("regimes", ["sl-low", "ssl"]))


def resolve_seed(flag=None, config=None):
    """The effective seed: the flag, else ``SKELSIGN_SEED``, else the config's ``seed``, else 0.

    Raises:
        ConfigValueError: If the chosen value is not a non-negative integer.
    """
    if flag is not None:
        return _checked_seed(flag, "--seed")
    env = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
    if env is not None:
        return _checked_seed(env, SEED_ENVIRONMENT_VARIABLE)
    if config is not None and "seed" in config:
        return _checked_seed(config["seed"], "seed")
    return 0


def _checked_seed(value, source):
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise ConfigValueError("{}={!r} is not an integer".format(source, value)) from None
    if seed < 0:
        raise ConfigValueError("{}={!r} must not be negative".format(source, value))
    return seed


@contextmanager
def _config_stream(filename):
    """Given a configuration's filename, this returns a stream from which a configuration can be read.

    If `filename` is `None` or '-' then stream will be `sys.stdin`. Otherwise,
    it's the open file handle for the filename.
    """
    if filename is None or filename == "-":
        log.info("Reading config from stdin")
        yield sys.stdin
    else:
        with open(filename, mode="rt", encoding="utf-8") as handle:
            log.info("Reading config from %r", filename)
            yield handle
