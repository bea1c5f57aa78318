"""Tests for config loading functions.
"""
import io

import pytest

from skelsign.config import (
    SEED_ENVIRONMENT_VARIABLE,
    ConfigDict,
    ConfigError,
    ConfigKeyError,
    ConfigValueError,
    deserialize_config,
    load_config,
    resolve_seed,
    serialize_config,
)
from skelsign.training import OptimizerKind


def test_load_valid_stdin(mocker):
    temp_stdin = io.StringIO()
    temp_stdin.name = "stringio"
    config = ConfigDict()
    config["key"] = "value"
    temp_stdin.write(serialize_config(config))
    temp_stdin.seek(0)
    mocker.patch("sys.stdin", temp_stdin)
    assert load_config()["key"] == "value"


def test_load_invalid_stdin_raises_ConfigError(mocker):
    temp_stdin = io.StringIO()
    temp_stdin.name = "stringio"
    temp_stdin.write("{invalid")
    temp_stdin.seek(0)
    mocker.patch("sys.stdin", temp_stdin)

    with pytest.raises(ConfigError):
        load_config()


def test_load_from_valid_config_file(tmpdir):
    config_path = tmpdir / "config.toml"
    config = ConfigDict()
    config["model"] = "lstm"
    with config_path.open(mode="wt", encoding="utf-8") as handle:
        handle.write(serialize_config(config))
    assert load_config(str(config_path)).model_kind == "lstm"


def test_load_non_existent_file_raises_ConfigError():
    with pytest.raises(ConfigError):
        load_config("/foo/bar/this/does/no-exist/I/hope")


def test_load_file_without_skelsign_table_raises_ConfigError(tmpdir):
    config_path = tmpdir / "config.toml"
    config_path.write_text('[other]\nkey = "value"\n', encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config(str(config_path))


def test_load_from_non_utf8_file_raises_ConfigError(tmpdir):
    config_path = tmpdir / "config.toml"
    with config_path.open(mode="wb") as handle:
        handle.write(serialize_config({"key": "value"}).encode("utf-16"))
    with pytest.raises(ConfigError):
        load_config(str(config_path))


def test_missing_key_raises_ConfigKeyError():
    with pytest.raises(ConfigKeyError):
        ConfigDict().data_dir


def test_defaults():
    config = ConfigDict()
    assert config.model_kind == "cnn"
    assert config.labels is None
    assert config.t_max is None
    assert config.sweep_seeds == [0]
    assert config.sweep_regimes == ["sl-low", "ssl"]


SAMPLE = """
[skelsign]
data-dir = "data"
t-max = 90
model = "fc"

[skelsign.train]
epochs = 12
learning-rate = 0.01
optimizer = "sgd"

[skelsign.pretrain]
epochs = 4
contrastive-weight = 0.5

[skelsign.model-options.fc]
hidden-sizes = [32, 8]

[skelsign.sweep]
seeds = [3, 4]
regimes = ["sl"]
"""


def test_sections_are_read():
    config = deserialize_config(SAMPLE)
    assert config.data_dir == "data"
    assert config.t_max == 90
    assert config.sweep_seeds == [3, 4]
    assert config.sweep_regimes == ["sl"]
    assert config.model_options("fc") == {"hidden_sizes": [32, 8]}
    assert config.model_options("cnn") == {}


def test_hyperparams_from_section():
    hp = deserialize_config(SAMPLE).hyperparams("train", seed=7)
    assert (hp.epochs, hp.learning_rate, hp.optimizer, hp.seed) == (12, 0.01, OptimizerKind.SGD, 7)


def test_hyperparam_overrides_win_unless_none():
    hp = deserialize_config(SAMPLE).hyperparams("pretrain", seed=0, epochs=9, batch_size=None)
    assert hp.epochs == 9
    assert hp.batch_size == 8
    assert hp.contrastive_weight == 0.5


def test_missing_section_gives_defaults():
    assert ConfigDict().hyperparams("train", seed=0).epochs == 30


def test_unknown_hyperparam_key_raises():
    config = deserialize_config('[skelsign.train]\nepoch = 3\n')
    with pytest.raises(ConfigValueError, match="epoch"):
        config.hyperparams("train", seed=0)


def test_invalid_hyperparam_value_raises():
    config = deserialize_config("[skelsign.train]\nbatch-size = 0\n")
    with pytest.raises(ConfigValueError):
        config.hyperparams("train", seed=0)


def test_unknown_model_option_raises():
    config = deserialize_config("[skelsign.model-options.cnn]\nchannels = [1]\n")
    with pytest.raises(ConfigValueError):
        config.model_options("cnn")


def test_seed_flag_wins(monkeypatch):
    monkeypatch.setenv(SEED_ENVIRONMENT_VARIABLE, "5")
    assert resolve_seed(3, ConfigDict(seed=9)) == 3


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv(SEED_ENVIRONMENT_VARIABLE, "5")
    assert resolve_seed(None, ConfigDict(seed=9)) == 5


def test_seed_from_config(monkeypatch):
    monkeypatch.delenv(SEED_ENVIRONMENT_VARIABLE, raising=False)
    assert resolve_seed(None, ConfigDict(seed=9)) == 9
    assert resolve_seed() == 0


def test_bad_seed_environment_raises(monkeypatch):
    monkeypatch.setenv(SEED_ENVIRONMENT_VARIABLE, "many")
    with pytest.raises(ConfigValueError):
        resolve_seed()


@pytest.mark.parametrize("flag", [-1, "-7"])
def test_negative_seed_flag_raises(flag):
    with pytest.raises(ConfigValueError):
        resolve_seed(flag)


def test_negative_seed_environment_raises(monkeypatch):
    monkeypatch.setenv(SEED_ENVIRONMENT_VARIABLE, "-1")
    with pytest.raises(ConfigValueError):
        resolve_seed()


def test_negative_seed_in_config_raises(monkeypatch):
    monkeypatch.delenv(SEED_ENVIRONMENT_VARIABLE, raising=False)
    with pytest.raises(ConfigValueError):
        resolve_seed(None, ConfigDict(seed=-3))
