"""Long short-term memory cell with an exact backward pass.

Gate pre-activations are laid out as four consecutive blocks of ``hidden`` columns in the order input, forget,
candidate, output. Chaining :func:`lstm_cell` over a sequence records every step on the tape, so backpropagation
through time needs nothing beyond :meth:`Tensor.backward`.
"""
import dataclasses

import numpy as np
from scipy.special import expit

from skelsign.exceptions import ShapeError
from skelsign.numcore.ops import take
from skelsign.numcore.tensor import Function, Tensor, as_tensor


@dataclasses.dataclass(frozen=True)
class LstmState:
    "Hidden and cell vectors (or batches of them) of an LSTM."
    hidden: Tensor
    cell: Tensor

    def __post_init__(self):
        if self.hidden.shape != self.cell.shape:
            raise ShapeError("LSTM hidden {} and cell {} differ in shape".format(self.hidden.shape, self.cell.shape))

    @classmethod
    def zeros(cls, hidden_size, batch=None):
        "The all-zero initial state."
        shape = (hidden_size,) if batch is None else (batch, hidden_size)
        return cls(Tensor(np.zeros(shape)), Tensor(np.zeros(shape)))


@dataclasses.dataclass(frozen=True)
class LstmWeights:
    """Parameters of one LSTM layer.

    Attributes:
        input_weight: ``D×4H`` matrix applied to the input.
        hidden_weight: ``H×4H`` matrix applied to the previous hidden state.
        bias: ``4H`` vector.
    """

    input_weight: Tensor
    hidden_weight: Tensor
    bias: Tensor

    @property
    def hidden_size(self):
        "The hidden size H."
        return self.hidden_weight.shape[0]

    @property
    def input_size(self):
        "The input size D."
        return self.input_weight.shape[0]


class LstmCell(Function):
    "One step of the LSTM recurrence. The output packs ``[hidden', cell']`` along the last axis."

    def forward(self, x, hidden, cell, input_weight, hidden_weight, bias):
        size = hidden_weight.shape[0]
        if hidden_weight.shape != (size, 4 * size) or bias.shape != (4 * size,):
            raise ShapeError(
                "lstm_cell: hidden weight {} / bias {} inconsistent with hidden size {}".format(
                    hidden_weight.shape, bias.shape, size
                )
            )
        if input_weight.shape != (x.shape[-1], 4 * size):
            raise ShapeError("lstm_cell: input {} does not match input weight {}".format(x.shape, input_weight.shape))
        if hidden.shape[-1] != size or cell.shape != hidden.shape or hidden.shape[:-1] != x.shape[:-1]:
            raise ShapeError("lstm_cell: state {} does not match input {}".format(hidden.shape, x.shape))

        gates = x @ input_weight + hidden @ hidden_weight + bias
        i = expit(gates[..., :size])
        f = expit(gates[..., size : 2 * size])
        g = np.tanh(gates[..., 2 * size : 3 * size])
        o = expit(gates[..., 3 * size :])
        new_cell = f * cell + i * g
        squashed = np.tanh(new_cell)
        new_hidden = o * squashed

        self.saved = (x, hidden, cell, input_weight, hidden_weight, i, f, g, o, squashed)
        return np.concatenate([new_hidden, new_cell], axis=-1)

    def backward(self, grad_output):
        x, hidden, cell, input_weight, hidden_weight, i, f, g, o, squashed = self.saved
        size = hidden_weight.shape[0]
        grad_hidden = grad_output[..., :size]
        grad_cell = grad_output[..., size:] + grad_hidden * o * (1.0 - squashed**2)

        grad_gates = np.concatenate(
            [
                grad_cell * g * i * (1.0 - i),
                grad_cell * cell * f * (1.0 - f),
                grad_cell * i * (1.0 - g**2),
                grad_hidden * squashed * o * (1.0 - o),
            ],
            axis=-1,
        )
        grad_x = grad_gates @ input_weight.T
        grad_prev_hidden = grad_gates @ hidden_weight.T
        grad_prev_cell = grad_cell * f
        if x.ndim == 1:
            grad_input_weight = np.outer(x, grad_gates)
            grad_hidden_weight = np.outer(hidden, grad_gates)
            grad_bias = grad_gates
        else:
            grad_input_weight = x.T @ grad_gates
            grad_hidden_weight = hidden.T @ grad_gates
            grad_bias = grad_gates.sum(axis=0)
        return grad_x, grad_prev_hidden, grad_prev_cell, grad_input_weight, grad_hidden_weight, grad_bias


def lstm_cell(x, state, weights):
    """Advance the LSTM by one input.

    Args:
        x: Input vector of length D (or an ``N×D`` batch).
        state: The previous :class:`LstmState`.
        weights: The layer's :class:`LstmWeights`.

    Returns:
        The next :class:`LstmState`.

    Raises:
        ShapeError: If any dimension disagrees with the weight shapes.
    """
    packed = LstmCell.apply(
        as_tensor(x), state.hidden, state.cell, weights.input_weight, weights.hidden_weight, weights.bias
    )
    size = weights.hidden_size
    return LstmState(take(packed, (Ellipsis, slice(0, size))), take(packed, (Ellipsis, slice(size, 2 * size))))


def lstm_sequence(frames, weights, state=None):
    """Run the cell over the time axis of ``frames`` (``T×D`` or ``N×T×D``) and return the final state."""
    frames = as_tensor(frames)
    if frames.ndim not in (2, 3):
        raise ShapeError("lstm_sequence: expected T×D or N×T×D frames, got {}".format(frames.shape))
    batch = None if frames.ndim == 2 else frames.shape[0]
    if state is None:
        state = LstmState.zeros(weights.hidden_size, batch)
    steps = frames.shape[0] if batch is None else frames.shape[1]
    for step in range(steps):
        index = step if batch is None else (slice(None), step)
        state = lstm_cell(take(frames, index), state, weights)
    return state
