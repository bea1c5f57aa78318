"""Minimal differentiable numeric core.

Dense, convolutional, recurrent and pooling operations on double precision arrays, each with an exact analytic
backward pass that can be checked with :func:`grad_check`.
"""

from .gradcheck import grad_check  # NOQA
from .losses import mse_loss, softmax_cross_entropy  # NOQA
from .lstm import LstmState, LstmWeights, lstm_cell, lstm_sequence  # NOQA
from .ops import (  # NOQA
    add,
    constant,
    conv2d,
    conv_output_size,
    dense,
    global_avg_pool,
    matmul,
    max_pool2d,
    mul,
    reduce_sum,
    relu,
    reshape,
    scale,
    take,
    upsample_nearest,
)
from .tensor import Function, Tensor  # NOQA
