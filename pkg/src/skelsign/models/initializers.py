"""Deterministic parameter initialization.

Each parameter draws from its own random stream keyed by ``(seed, parameter name)``. Two models built with the same
seed therefore start with identical values for every parameter they have in common, whatever else they contain.
"""
import zlib

import numpy as np

from skelsign.numcore import Tensor


def parameter_rng(seed, name):
    "The random generator of one parameter."
    return np.random.default_rng(np.random.SeedSequence([int(seed), zlib.crc32(name.encode("utf-8"))]))


def glorot_uniform(shape, fan_in, fan_out, rng):
    "Uniform values in ``(−a, a)`` with ``a = sqrt(6 / (fan_in + fan_out))``."
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def initialize(shapes, seed):
    """Create the parameter tensors described by ``shapes``.

    Args:
        shapes: Mapping from name to ``(shape, fan_in, fan_out)``.
        seed: The model seed.

    Returns:
        A dict of named :class:`Tensor`\\s requiring gradients. Biases are zero.
    """
    params = {}
    for name, (shape, fan_in, fan_out) in shapes.items():
        if name.endswith(".bias"):
            values = np.zeros(shape)
        else:
            values = glorot_uniform(shape, fan_in, fan_out, parameter_rng(seed, name))
        params[name] = Tensor(values, requires_grad=True, name=name)
    return params
