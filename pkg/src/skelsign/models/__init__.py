"""Classifier and autoencoder architectures.

Architectures are plugins in the ``skelsign.architectures`` entry point namespace. :func:`build_model` looks the
plugin up by the ModelSpec's kind and initializes its parameters.
"""
import dataclasses
import logging

from skelsign import plugins
from skelsign.exceptions import ContractError
from skelsign.models.checkpoint import load_model, save_model  # NOQA
from skelsign.models.initializers import initialize
from skelsign.models.spec import Model, ModelKind, ModelSpec  # NOQA

log = logging.getLogger(__name__)


def build_model(spec):
    """Create a freshly initialized model.

    Parameters are drawn deterministically from ``spec.seed``; building twice gives identical values.

    Raises:
        SpecError: If the ModelSpec names no installed architecture.
    """
    architecture = plugins.get_architecture(spec.kind.value)
    params = initialize(architecture.parameter_shapes(spec), spec.seed)
    log.debug(
        "Built %s model with %s parameters",
        spec.kind.value,
        sum(param.size for param in params.values()),
    )
    return Model(spec=spec, params=params, architecture=architecture, last_conv=architecture.last_conv(spec))


def _require(model, kind):
    if model.kind != kind:
        raise ContractError("Expected a {} model, got {}".format(kind.value, model.kind.value))


def forward_fc(model, flat):
    """Logits of a fully connected model for one flattened sample (or an ``N×3n·t_max`` batch).

    Raises:
        ShapeError: If the input length does not match the model.
    """
    _require(model, ModelKind.FC)
    return model(flat)


def forward_cnn(model, grid):
    """Logits and last-convolution featuremaps of a CNN for one ``1×t_max×3n`` grid (or a batch).

    Raises:
        ShapeError: If the grid shape does not match the model.
    """
    _require(model, ModelKind.CNN)
    return model.architecture.forward_with_featuremaps(model, grid)


def forward_lstm(model, frames):
    """Logits of an LSTM model for one ``t_max×3n`` sequence of frames (or a batch).

    Raises:
        ShapeError: If the sequence length or frame width does not match the model.
    """
    _require(model, ModelKind.LSTM)
    return model(frames)


def forward_autoencoder(model, grid):
    """Reconstruction and latent vector of an autoencoder.

    Raises:
        ShapeError: If the input shape does not match the model.
    """
    _require(model, ModelKind.AUTOENCODER)
    return model(grid)


def extract_encoder(auto, seed=None):
    """Build a backbone classifier whose encoder parameters are copies of the autoencoder's.

    The classifier keeps training all of its parameters; the encoder is not frozen.

    Args:
        auto: A trained autoencoder.
        seed: Seed for the classifier's remaining layers. Defaults to the autoencoder's seed.

    Raises:
        ContractError: If ``auto`` is not an autoencoder.
    """
    _require(auto, ModelKind.AUTOENCODER)
    spec = dataclasses.replace(
        auto.spec, kind=auto.spec.backbone, seed=auto.spec.seed if seed is None else int(seed)
    )
    classifier = build_model(spec)
    names = classifier.architecture.encoder_parameters(spec)
    for name in names:
        classifier.params[name].data = auto.params[name].data.copy()
    log.info("Transferred %s encoder parameters into a %s classifier", len(names), spec.kind.value)
    return classifier
