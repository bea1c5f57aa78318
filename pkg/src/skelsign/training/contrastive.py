"""Label-selected contrastive loss on latent vectors.

For anchor ``i`` with positives ``P(i)`` (other samples with the same label) and candidates ``A(i)`` (all other
samples)::

    loss_i = −1/|P(i)| · Σ_{p∈P(i)} log( exp(cos(z_i, z_p)/τ) / Σ_{a∈A(i)} exp(cos(z_i, z_a)/τ) )

The loss is the mean of ``loss_i`` over the anchors that have at least one positive. It only depends on the
directions of the latents.
"""
import numpy as np
from scipy.special import logsumexp, softmax

from skelsign.exceptions import ContractError, ShapeError
from skelsign.numcore.tensor import Function, as_tensor


class SupervisedContrastive(Function):
    "Contrastive loss of an ``N×D`` latent matrix. The backward pass is derived by hand."

    def forward(self, latents, labels, temperature):
        norms = np.linalg.norm(latents, axis=1, keepdims=True)
        unit = latents / norms
        similarity = unit @ unit.T / temperature
        np.fill_diagonal(similarity, -np.inf)

        positives = (labels[:, np.newaxis] == labels[np.newaxis, :]).astype(float)
        np.fill_diagonal(positives, 0.0)
        counts = positives.sum(axis=1)
        anchors = counts > 0

        log_probs = similarity - logsumexp(similarity, axis=1, keepdims=True)
        np.fill_diagonal(log_probs, 0.0)
        per_anchor = -(positives * log_probs).sum(axis=1)[anchors] / counts[anchors]

        self.norms = norms
        self.unit = unit
        self.temperature = temperature
        self.probs = softmax(similarity, axis=1)
        self.targets = np.divide(
            positives, counts[:, np.newaxis], out=np.zeros_like(positives), where=anchors[:, np.newaxis]
        )
        self.anchors = anchors
        return np.array(per_anchor.mean())

    def backward(self, grad_output):
        count = self.anchors.sum()
        grad_similarity = (self.probs - self.targets) * self.anchors[:, np.newaxis] / count
        grad_unit = (grad_similarity + grad_similarity.T) @ self.unit / self.temperature
        radial = (self.unit * grad_unit).sum(axis=1, keepdims=True)
        grad_latents = (grad_unit - self.unit * radial) / self.norms
        return (grad_output * grad_latents,)


def has_positive_pair(labels):
    "Whether two of ``labels`` are equal."
    labels = list(labels)
    return len(set(labels)) < len(labels)


def contrastive_loss(latents, labels, temperature):
    """Supervised contrastive loss of a batch of latent vectors.

    Args:
        latents: ``N×D`` tensor, one latent per row.
        labels: N class labels.
        temperature: Positive softmax temperature τ.

    Returns:
        The scalar loss tensor.

    Raises:
        ContractError: With fewer than two samples, without a positive pair, for a zero latent vector or a
            non-positive temperature.
        ShapeError: If the latents are not a matrix with one row per label.
    """
    latents = as_tensor(latents)
    labels = np.asarray([int(label) for label in labels], dtype=np.int64)
    if latents.ndim != 2 or latents.shape[0] != len(labels):
        raise ShapeError("contrastive_loss: {} latents for {} labels".format(latents.shape, len(labels)))
    if len(labels) < 2:
        raise ContractError("contrastive_loss needs at least two samples")
    if temperature <= 0:
        raise ContractError("contrastive_loss needs a positive temperature, got {}".format(temperature))
    if not has_positive_pair(labels):
        raise ContractError("contrastive_loss needs a positive pair; build label-balanced batches")
    if np.any(np.linalg.norm(latents.data, axis=1) == 0):
        raise ContractError("contrastive_loss is undefined for a zero latent vector")
    return SupervisedContrastive.apply(latents, labels=labels, temperature=float(temperature))
