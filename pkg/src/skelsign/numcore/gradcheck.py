"""Finite-difference verification of analytic gradients."""
import logging

import numpy as np

from skelsign.exceptions import ContractError
from skelsign.numcore.tensor import Tensor

log = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-8


def grad_check(closure, params, eps=1e-4):
    """Compare backpropagated gradients against central finite differences.

    Every coordinate of every tensor in ``params`` is perturbed by ``±eps`` in turn and the numeric derivative
    ``(f(x+eps) − f(x−eps)) / (2·eps)`` is compared with the gradient produced by ``closure().backward()``.

    Args:
        closure: A zero-argument callable building a scalar :class:`Tensor` from ``params``.
        params: The tensors to check. Their ``grad`` is reset.
        eps: Perturbation size.

    Returns:
        The largest relative error ``|a − n| / max(|a|, |n|, 1e-8)`` over all coordinates.

    Raises:
        ContractError: If ``eps`` is not positive or ``closure`` does not return a one-element tensor.
    """
    if eps <= 0:
        raise ContractError("grad_check needs a positive eps, got {}".format(eps))

    for param in params:
        param.zero_grad()
    output = _evaluate(closure)
    output.backward()
    analytic = [param.grad.copy() for param in params]

    worst = 0.0
    for param, grad in zip(params, analytic):
        for index in np.ndindex(param.shape):
            original = param.data[index]
            param.data[index] = original + eps
            plus = _evaluate(closure).item()
            param.data[index] = original - eps
            minus = _evaluate(closure).item()
            param.data[index] = original

            numeric = (plus - minus) / (2.0 * eps)
            denominator = max(abs(grad[index]), abs(numeric), DENOMINATOR_FLOOR)
            worst = max(worst, abs(grad[index] - numeric) / denominator)

    log.debug("grad_check over %s tensors: max relative error %.3e", len(params), worst)
    return worst


def _evaluate(closure):
    output = closure()
    if not isinstance(output, Tensor) or output.size != 1:
        shape = output.shape if isinstance(output, Tensor) else type(output).__name__
        raise ContractError("grad_check closure must return a scalar tensor, got {}".format(shape))
    return output
