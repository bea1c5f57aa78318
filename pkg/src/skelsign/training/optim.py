"""Gradient descent optimizers.

Optimizers update ``Tensor.data`` in place from the accumulated ``Tensor.grad``.
"""
from abc import ABC, abstractmethod

import numpy as np

from skelsign.training.params import OptimizerKind


class Optimizer(ABC):
    "Base class of optimizers over a fixed list of parameters."

    def __init__(self, params, learning_rate):
        self.params = list(params)
        self.learning_rate = learning_rate

    def zero_grad(self):
        "Reset the gradients of all parameters."
        for param in self.params:
            param.zero_grad()

    @abstractmethod
    def step(self):
        "Apply one update using the current gradients."


class SGD(Optimizer):
    "Plain gradient descent, ``p ← p − lr·g``."

    def step(self):
        for param in self.params:
            param.data -= self.learning_rate * param.grad


class Adam(Optimizer):
    "Adam with bias-corrected moment estimates."

    def __init__(self, params, learning_rate, beta1=0.9, beta2=0.999, epsilon=1e-8):
        super().__init__(params, learning_rate)
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.steps = 0
        self.first = [np.zeros_like(param.data) for param in self.params]
        self.second = [np.zeros_like(param.data) for param in self.params]

    def step(self):
        self.steps += 1
        correction1 = 1.0 - self.beta1 ** self.steps
        correction2 = 1.0 - self.beta2 ** self.steps
        for param, first, second in zip(self.params, self.first, self.second):
            first *= self.beta1
            first += (1.0 - self.beta1) * param.grad
            second *= self.beta2
            second += (1.0 - self.beta2) * param.grad ** 2
            param.data -= (
                self.learning_rate * (first / correction1) / (np.sqrt(second / correction2) + self.epsilon)
            )


def make_optimizer(params, hp):
    "The optimizer ``hp`` asks for, over ``params``."
    if hp.optimizer == OptimizerKind.SGD:
        return SGD(params, hp.learning_rate)
    return Adam(params, hp.learning_rate, beta1=hp.beta1, beta2=hp.beta2, epsilon=hp.epsilon)
