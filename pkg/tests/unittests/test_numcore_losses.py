"Tests for the losses and for the gradient checker itself."

# pylint: disable=C0111,W0621

import numpy as np
import pytest

from skelsign.exceptions import ContractError, ShapeError
from skelsign.numcore import Function, Tensor, grad_check, mse_loss, reduce_sum, softmax_cross_entropy


def test_cross_entropy_of_uniform_logits_is_log_k():
    loss, probs = softmax_cross_entropy(Tensor(np.zeros(2)), 1)
    assert np.isclose(loss.item(), np.log(2))
    assert np.allclose(probs, [0.5, 0.5])


def test_cross_entropy_is_stable_for_large_logits():
    loss, probs = softmax_cross_entropy(Tensor(np.array([1000.0, 0.0])), 0)
    assert np.isfinite(loss.item())
    assert np.isclose(loss.item(), 0.0)
    assert np.isclose(probs.sum(), 1.0)


def test_cross_entropy_gradient_is_probs_minus_onehot(rng):
    logits = Tensor(rng.normal(size=3), requires_grad=True)
    loss, probs = softmax_cross_entropy(logits, 2)
    loss.backward()
    assert np.allclose(logits.grad, probs - np.array([0.0, 0.0, 1.0]))


def test_batched_cross_entropy_is_the_mean(rng):
    logits = rng.normal(size=(4, 2))
    targets = [0, 1, 1, 0]
    batched, _ = softmax_cross_entropy(Tensor(logits), targets)
    singles = [softmax_cross_entropy(Tensor(row), t)[0].item() for row, t in zip(logits, targets)]
    assert np.isclose(batched.item(), np.mean(singles))


def test_cross_entropy_target_out_of_range_raises():
    with pytest.raises(IndexError):
        softmax_cross_entropy(Tensor(np.zeros(2)), 2)


def test_cross_entropy_needs_two_classes():
    with pytest.raises(ContractError):
        softmax_cross_entropy(Tensor(np.zeros(1)), 0)


@pytest.mark.parametrize("seed", range(10))
def test_cross_entropy_gradients(seed):
    rng = np.random.default_rng(seed)
    logits = Tensor(rng.normal(size=(3, 4)), requires_grad=True)
    targets = rng.integers(0, 4, size=3)
    assert grad_check(lambda: softmax_cross_entropy(logits, targets)[0], [logits]) < 1e-4


def test_mse_of_identical_tensors_is_zero(rng):
    x = rng.normal(size=(2, 3))
    assert mse_loss(Tensor(x), Tensor(x)).item() == 0.0


def test_mse_value():
    assert np.isclose(mse_loss(Tensor([1.0, 3.0]), Tensor([0.0, 0.0])).item(), 5.0)


def test_mse_shape_mismatch_raises():
    with pytest.raises(ShapeError):
        mse_loss(Tensor(np.zeros(3)), Tensor(np.zeros(4)))


@pytest.mark.parametrize("seed", range(10))
def test_mse_gradients(seed):
    rng = np.random.default_rng(seed)
    pred = Tensor(rng.normal(size=(2, 5)), requires_grad=True)
    target = Tensor(rng.normal(size=(2, 5)), requires_grad=True)
    assert grad_check(lambda: mse_loss(pred, target), [pred, target]) < 1e-4


class WrongSquare(Function):
    "x² with a gradient that is off by a factor of two."

    def forward(self, a):
        self.a = a
        return a**2

    def backward(self, grad_output):
        return (grad_output * self.a,)


def test_grad_check_detects_a_wrong_backward(rng):
    x = Tensor(rng.normal(size=4) + 3.0, requires_grad=True)
    assert grad_check(lambda: reduce_sum(WrongSquare.apply(x)), [x]) > 0.1


def test_grad_check_rejects_non_scalar_closure():
    x = Tensor(np.ones(3), requires_grad=True)
    with pytest.raises(ContractError):
        grad_check(lambda: WrongSquare.apply(x), [x])


def test_grad_check_rejects_non_positive_eps():
    x = Tensor(np.ones(1), requires_grad=True)
    with pytest.raises(ContractError):
        grad_check(lambda: reduce_sum(x), [x], eps=0.0)


def test_grad_check_restores_parameters(rng):
    values = rng.normal(size=(2, 2))
    x = Tensor(values, requires_grad=True)
    grad_check(lambda: mse_loss(x, Tensor(np.zeros((2, 2)))), [x])
    assert np.array_equal(x.data, values)
