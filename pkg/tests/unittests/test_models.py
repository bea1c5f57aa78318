"Tests for building, running, transplanting and saving models."

# pylint: disable=C0111,W0621

import numpy as np
import pytest

from skelsign.exceptions import CheckpointError, ContractError, ShapeError, SpecError
from skelsign.models import (
    ModelKind,
    ModelSpec,
    build_model,
    extract_encoder,
    forward_autoencoder,
    forward_cnn,
    forward_fc,
    forward_lstm,
    load_model,
    save_model,
)
from skelsign.models.checkpoint import CHECKPOINT_FORMAT
from skelsign.numcore import Tensor, grad_check, softmax_cross_entropy
from skelsign.plugins import architecture_names, get_architecture
from skelsign.training import Adam

T_MAX, JOINTS = 8, 3


def small_spec(kind, seed=0, **options):
    defaults = {
        "hidden_sizes": (6, 4),
        "conv_channels": (2, 3),
        "dense_width": 5,
        "lstm_hidden": 4,
    }
    defaults.update(options)
    return ModelSpec(kind=kind, t_max=T_MAX, joint_count=JOINTS, seed=seed, **defaults)


def grids(rng, count):
    return rng.normal(size=(count, T_MAX, 3 * JOINTS))


def test_all_architectures_are_registered():
    assert set(architecture_names()) >= {"fc", "cnn", "lstm", "autoencoder"}


def test_unknown_architecture_raises():
    with pytest.raises(SpecError):
        get_architecture("transformer")


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm"])
def test_classifier_gives_one_logit_per_class(kind, rng):
    model = build_model(small_spec(kind))
    batch = model.prepare(grids(rng, 3))
    assert model(Tensor(batch)).shape == (3, 2)
    assert model(Tensor(batch[0])).shape == (2,)


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm"])
def test_single_sample_matches_its_batch_row(kind, rng):
    model = build_model(small_spec(kind))
    batch = model.prepare(grids(rng, 3))
    batched = model(Tensor(batch)).data
    assert np.allclose(model(Tensor(batch[1])).data, batched[1], rtol=0, atol=1e-12)


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm", "autoencoder"])
def test_building_is_deterministic(kind):
    first, second = build_model(small_spec(kind, seed=3)), build_model(small_spec(kind, seed=3))
    for name, param in first.params.items():
        assert np.array_equal(param.data, second.params[name].data)


def test_different_seeds_give_different_weights():
    first, second = build_model(small_spec("cnn", seed=1)), build_model(small_spec("cnn", seed=2))
    assert not np.array_equal(first.params["conv1.weight"].data, second.params["conv1.weight"].data)


def test_biases_start_at_zero():
    model = build_model(small_spec("fc"))
    assert not model.params["dense1.bias"].data.any()


def test_fc_input_length_is_flattened_grid():
    assert small_spec("fc").flat_size == T_MAX * 3 * JOINTS
    assert ModelSpec(kind="fc", t_max=100, joint_count=79).flat_size == 23700


def test_wrong_input_shape_raises(rng):
    model = build_model(small_spec("fc"))
    with pytest.raises(ShapeError):
        model(Tensor(rng.normal(size=(2, 5))))


def test_prepare_rejects_wrong_grid(rng):
    model = build_model(small_spec("cnn"))
    with pytest.raises(ShapeError):
        model.prepare(rng.normal(size=(2, T_MAX + 1, 3 * JOINTS)))


def test_even_kernel_is_rejected():
    with pytest.raises(SpecError):
        small_spec("cnn", kernel_size=2)


def test_too_many_pooling_stages_are_rejected():
    with pytest.raises(SpecError):
        small_spec("cnn", conv_channels=(2, 2, 2, 2))


def test_autoencoder_backbone_must_be_fc_or_cnn():
    with pytest.raises(SpecError):
        small_spec("autoencoder", backbone="lstm")


def test_forward_helpers_check_the_kind(rng):
    model = build_model(small_spec("lstm"))
    with pytest.raises(ContractError):
        forward_fc(model, rng.normal(size=T_MAX * 3 * JOINTS))


def test_forward_fc_and_lstm(rng):
    fc = build_model(small_spec("fc"))
    lstm = build_model(small_spec("lstm"))
    assert forward_fc(fc, Tensor(rng.normal(size=T_MAX * 3 * JOINTS))).shape == (2,)
    assert forward_lstm(lstm, Tensor(rng.normal(size=(T_MAX, 3 * JOINTS)))).shape == (2,)


def test_forward_cnn_returns_last_featuremaps(rng):
    model = build_model(small_spec("cnn"))
    logits, featuremaps = forward_cnn(model, Tensor(rng.normal(size=(1, T_MAX, 3 * JOINTS))))
    assert logits.shape == (2,)
    assert featuremaps.shape == (3,) + model.spec.stage_sizes[1]
    assert model.last_conv == "conv2"


@pytest.mark.parametrize("backbone", ["cnn", "fc"])
def test_autoencoder_reconstructs_input_shape(backbone, rng):
    auto = build_model(small_spec("autoencoder", backbone=backbone))
    sample = auto.prepare(grids(rng, 1))[0]
    reconstruction, latent = forward_autoencoder(auto, Tensor(sample))
    assert reconstruction.shape == sample.shape
    assert latent.shape == (auto.architecture.latent_size(auto.spec),)


@pytest.mark.parametrize("backbone", ["cnn", "fc"])
def test_extract_encoder_copies_encoder_weights(backbone):
    auto = build_model(small_spec("autoencoder", backbone=backbone, seed=5))
    names = auto.architecture.encoder_parameters(auto.spec)
    for name in names:
        auto.params[name].data += 1.0
    classifier = extract_encoder(auto)
    assert classifier.kind == ModelKind(backbone)
    for name in names:
        assert np.array_equal(classifier.params[name].data, auto.params[name].data)
        assert classifier.params[name].data is not auto.params[name].data


def test_untrained_encoder_equals_fresh_classifier():
    auto = build_model(small_spec("autoencoder", seed=9))
    transplanted = extract_encoder(auto)
    fresh = build_model(small_spec("cnn", seed=9))
    for name, param in fresh.params.items():
        assert np.array_equal(transplanted.params[name].data, param.data)


def test_extract_encoder_needs_an_autoencoder():
    with pytest.raises(ContractError):
        extract_encoder(build_model(small_spec("cnn")))


def test_frozen_view_receives_no_gradients(rng):
    model = build_model(small_spec("fc"))
    frozen = model.frozen()
    loss, _ = softmax_cross_entropy(frozen(Tensor(rng.normal(size=T_MAX * 3 * JOINTS))), 0)
    loss.backward()
    assert not any(param.grad.any() for param in model.params.values())


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm"])
def test_model_gradients_pass_grad_check(kind, rng):
    model = build_model(small_spec(kind, hidden_sizes=(3, 2), conv_channels=(1,), dense_width=2, lstm_hidden=2))
    batch = Tensor(model.prepare(grids(rng, 2)))
    closure = lambda: softmax_cross_entropy(model(batch), [0, 1])[0]  # noqa: E731
    assert grad_check(closure, model.parameters()) < 1e-4


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm", "autoencoder"])
def test_checkpoint_round_trip_is_bit_identical(kind, rng, tmpdir_path):
    model = build_model(small_spec(kind, seed=2))
    for param in model.parameters():
        param.data += rng.normal(size=param.shape)
    path = tmpdir_path / "model.npz"
    save_model(model, path)
    loaded = load_model(path)
    assert loaded.spec == model.spec
    batch = Tensor(model.prepare(grids(rng, 2)))
    out, loaded_out = model(batch), loaded(batch)
    if kind == "autoencoder":
        out, loaded_out = out[0], loaded_out[0]
    assert np.array_equal(out.data, loaded_out.data)


def test_checkpoint_with_other_format_is_rejected(tmpdir_path):
    path = tmpdir_path / "model.npz"
    with open(path, mode="wb") as handle:
        np.savez(handle, __format__=np.array("other/9"), __spec__=np.array("{}"))
    with pytest.raises(CheckpointError):
        load_model(path)


def test_checkpoint_with_missing_parameter_is_rejected(tmpdir_path):
    model = build_model(small_spec("fc"))
    path = tmpdir_path / "model.npz"
    save_model(model, path)
    with np.load(path) as archive:
        contents = {key: archive[key] for key in archive.files if key != "dense1.weight"}
    with open(path, mode="wb") as handle:
        np.savez(handle, **contents)
    with pytest.raises(CheckpointError):
        load_model(path)


def test_checkpoint_format_constant():
    assert CHECKPOINT_FORMAT == "skelsign-checkpoint/1"


@pytest.mark.parametrize("kind", ["fc", "cnn", "lstm"])
def test_zero_parameters_give_zero_logits(kind, rng):
    model = build_model(small_spec(kind))
    for param in model.parameters():
        param.data[...] = 0.0
    logits = model(Tensor(model.prepare(grids(rng, 3))))
    assert np.array_equal(logits.data, np.zeros((3, 2)))


def test_fine_tuning_updates_transplanted_encoder(rng):
    auto = build_model(small_spec("autoencoder", seed=2))
    pretrained = auto.params["conv1.weight"].data.copy()
    classifier = extract_encoder(auto)
    loss, _ = softmax_cross_entropy(classifier(Tensor(classifier.prepare(grids(rng, 4)))), [0, 1, 0, 1])
    loss.backward()
    Adam(classifier.parameters(), 0.01).step()
    assert not np.array_equal(classifier.params["conv1.weight"].data, pretrained)
    assert np.array_equal(auto.params["conv1.weight"].data, pretrained)
