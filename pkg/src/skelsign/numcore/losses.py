"""Classification and reconstruction objectives."""
import numpy as np
from scipy.special import logsumexp

from skelsign.exceptions import ContractError, ShapeError
from skelsign.numcore.tensor import Function, as_tensor


class SoftmaxCrossEntropy(Function):
    "Mean softmax cross-entropy of a batch of logit rows against integer targets."

    def forward(self, logits, targets):
        rows = logits[np.newaxis] if logits.ndim == 1 else logits
        shifted = rows - rows.max(axis=1, keepdims=True)
        log_probs = shifted - logsumexp(shifted, axis=1, keepdims=True)
        self.probs = np.exp(log_probs)
        self.targets = targets
        self.single = logits.ndim == 1
        return np.array(-log_probs[np.arange(len(targets)), targets].mean())

    def backward(self, grad_output):
        grad = self.probs.copy()
        grad[np.arange(len(self.targets)), self.targets] -= 1.0
        grad *= grad_output / len(self.targets)
        return (grad[0] if self.single else grad,)


def softmax_cross_entropy(logits, target):
    """Numerically stable softmax followed by the negative log-likelihood of ``target``.

    Args:
        logits: A length-K tensor, or an ``N×K`` batch.
        target: A class index, or a length-N sequence of them for a batch.

    Returns:
        ``(loss, probs)``: the scalar mean loss tensor and the softmax probabilities as an array shaped like
        ``logits``. The gradient with respect to the logits is ``probs − onehot(target)`` (divided by N).

    Raises:
        ContractError: If there are fewer than two classes.
        IndexError: If a target is outside ``[0, K)``.
    """
    logits = as_tensor(logits)
    if logits.ndim not in (1, 2):
        raise ShapeError("softmax_cross_entropy: expected K or N×K logits, got {}".format(logits.shape))
    classes = logits.shape[-1]
    if classes < 2:
        raise ContractError("softmax_cross_entropy needs at least two classes, got {}".format(classes))
    targets = np.atleast_1d(np.asarray(target, dtype=np.int64))
    expected = 1 if logits.ndim == 1 else logits.shape[0]
    if targets.shape != (expected,):
        raise ShapeError("softmax_cross_entropy: {} targets for logits {}".format(targets.shape, logits.shape))
    if np.any(targets < 0) or np.any(targets >= classes):
        raise IndexError("target {} out of range for {} classes".format(target, classes))

    loss = SoftmaxCrossEntropy.apply(logits, targets=targets)
    probs = _softmax(logits.data)
    return loss, probs[0] if logits.ndim == 1 else probs


def _softmax(logits):
    rows = logits[np.newaxis] if logits.ndim == 1 else logits
    shifted = rows - rows.max(axis=1, keepdims=True)
    return np.exp(shifted - logsumexp(shifted, axis=1, keepdims=True))


class MeanSquaredError(Function):
    "Mean of squared elementwise differences."

    def forward(self, pred, target):
        self.diff = pred - target
        return np.array(np.mean(self.diff**2))

    def backward(self, grad_output):
        grad = grad_output * 2.0 * self.diff / self.diff.size
        return grad, -grad


def mse_loss(pred, target):
    """Mean squared error between two tensors of identical shape.

    Raises:
        ShapeError: If the shapes differ.
    """
    pred, target = as_tensor(pred), as_tensor(target)
    if pred.shape != target.shape:
        raise ShapeError("mse_loss: prediction {} and target {} differ in shape".format(pred.shape, target.shape))
    return MeanSquaredError.apply(pred, target)
