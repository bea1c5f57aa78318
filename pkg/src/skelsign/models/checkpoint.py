"""Saving and loading models.

A checkpoint is an uncompressed NumPy ``.npz`` archive holding:

* ``__format__``: the string ``skelsign-checkpoint/1``;
* ``__spec__``: the :class:`ModelSpec` as JSON (it carries the seed);
* one float64 array per parameter, keyed by parameter name.

No pickled objects are stored, and arrays are written verbatim, so loading gives bit-identical parameters.
"""
import json
import logging

import numpy as np

from skelsign.exceptions import CheckpointError, SpecError
from skelsign.models.spec import ModelSpec

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "skelsign-checkpoint/1"
_FORMAT_KEY = "__format__"
_SPEC_KEY = "__spec__"


def save_model(model, path):
    "Write ``model`` to ``path``."
    arrays = {name: param.data for name, param in model.params.items()}
    arrays[_FORMAT_KEY] = np.array(CHECKPOINT_FORMAT)
    arrays[_SPEC_KEY] = np.array(json.dumps(model.spec.to_dict(), sort_keys=True))
    with open(path, mode="wb") as handle:
        np.savez(handle, **arrays)
    log.info("Saved %s model to %s", model.kind.value, path)


def load_model(path):
    """Read a model written by :func:`save_model`.

    Raises:
        CheckpointError: If the file is not a checkpoint, has another format version, or its parameters do not
            match its spec.
        OSError: If the file cannot be read.
    """
    # Imported here: the models package imports this module.
    from skelsign.models import build_model

    try:
        with np.load(path, allow_pickle=False) as archive:
            contents = {key: archive[key] for key in archive.files}
    except ValueError as exc:
        raise CheckpointError("{} is not a model checkpoint: {}".format(path, exc)) from exc

    if _FORMAT_KEY not in contents or _SPEC_KEY not in contents:
        raise CheckpointError("{} is not a model checkpoint".format(path))
    version = str(contents.pop(_FORMAT_KEY))
    if version != CHECKPOINT_FORMAT:
        raise CheckpointError("Unsupported checkpoint format {!r} in {}".format(version, path))

    try:
        spec = ModelSpec.from_dict(json.loads(str(contents.pop(_SPEC_KEY))))
    except (ValueError, SpecError) as exc:
        raise CheckpointError("Invalid model description in {}: {}".format(path, exc)) from exc

    model = build_model(spec)
    if set(contents) != set(model.params):
        raise CheckpointError(
            "Parameters in {} do not match a {} model: {}".format(path, spec.kind.value, sorted(contents))
        )
    for name, param in model.params.items():
        if contents[name].shape != param.shape:
            raise CheckpointError(
                "Parameter {} in {} has shape {}, expected {}".format(name, path, contents[name].shape, param.shape)
            )
        param.data = contents[name].astype(np.float64, copy=True)
        param.zero_grad()
    log.info("Loaded %s model from %s", spec.kind.value, path)
    return model
