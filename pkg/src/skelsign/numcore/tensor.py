"""The differentiable array type and the tape it records onto.

Every operation in :mod:`skelsign.numcore` is a :class:`Function` subclass. Applying a function to tensors computes the
forward value with NumPy and, if any input requires a gradient, remembers the function instance on the output. Calling
:meth:`Tensor.backward` on a scalar walks that record in reverse topological order and asks each function for the
gradients of its inputs.

All arrays are double precision. Gradients are *accumulated*: ``backward`` adds into ``grad`` and it is up to the
caller to call :meth:`Tensor.zero_grad` (or the optimizer's ``zero_grad``) before each step.
"""
import numpy as np

from skelsign.exceptions import ContractError

DTYPE = np.float64


class Tensor:
    """An n-dimensional double precision array with a gradient slot of the same shape.

    Args:
        data: Anything ``numpy.array`` accepts. It is copied.
        requires_grad: Whether gradients should flow into this tensor.
        name: Optional label, used for model parameters.
    """

    __slots__ = ("data", "grad", "requires_grad", "name", "_ctx")

    def __init__(self, data, requires_grad=False, name=None, _ctx=None):
        self.data = np.array(data, dtype=DTYPE)
        self.grad = np.zeros_like(self.data)
        self.requires_grad = bool(requires_grad)
        self.name = name
        self._ctx = _ctx

    @property
    def shape(self):
        "The dimensions of the tensor."
        return self.data.shape

    @property
    def size(self):
        "The number of elements."
        return self.data.size

    @property
    def ndim(self):
        "The number of dimensions."
        return self.data.ndim

    def zero_grad(self):
        "Reset the accumulated gradient to zero."
        self.grad.fill(0.0)

    def detach(self):
        "A new tensor sharing no history with this one (the values are copied)."
        return Tensor(self.data, requires_grad=False, name=self.name)

    def item(self):
        "The value of a one-element tensor as a Python float."
        if self.data.size != 1:
            raise ContractError("item() needs a one-element tensor, got shape {}".format(self.shape))
        return float(self.data.reshape(()))

    def __getitem__(self, index):
        # Imported here, ops depends on this module.
        from skelsign.numcore.ops import take  # pylint: disable=import-outside-toplevel

        return take(self, index)

    def __repr__(self):
        return "Tensor(shape={}, requires_grad={}{})".format(
            self.shape, self.requires_grad, ", name={!r}".format(self.name) if self.name else ""
        )

    def backward(self, seed=None):
        """Backpropagate from this tensor, adding into the ``grad`` of every tensor that requires one.

        Args:
            seed: Gradient of the final objective with respect to this tensor. May be omitted for a
                one-element tensor, in which case it is 1.

        Raises:
            ContractError: If no seed is given for a tensor with more than one element.
        """
        if seed is None:
            if self.data.size != 1:
                raise ContractError("backward() without a seed needs a scalar, got shape {}".format(self.shape))
            seed = np.ones_like(self.data)
        seed = np.broadcast_to(np.asarray(seed, dtype=DTYPE), self.shape)

        order = _topological_order(self)
        pending = {id(self): np.array(seed)}
        for node in reversed(order):
            node_grad = pending.pop(id(node), None)
            if node_grad is None:
                continue
            if node.requires_grad:
                node.grad += node_grad
            ctx = node._ctx
            if ctx is None:
                continue
            for parent, parent_grad in zip(ctx.parents, ctx.backward(node_grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                key = id(parent)
                if key in pending:
                    pending[key] = pending[key] + parent_grad
                else:
                    pending[key] = np.asarray(parent_grad, dtype=DTYPE)


def _topological_order(root):
    "Iterative post-order walk; recurrent graphs are too deep for recursion."
    order = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        if node._ctx is not None:
            for parent in node._ctx.parents:
                if parent.requires_grad and id(parent) not in visited:
                    stack.append((parent, False))
    return order


def as_tensor(value):
    "Wrap ``value`` in a constant Tensor unless it already is one."
    if isinstance(value, Tensor):
        return value
    return Tensor(value)


class Function:
    """Base class for differentiable operations.

    Subclasses implement :meth:`forward` over NumPy arrays (stashing whatever the backward pass needs on ``self``)
    and :meth:`backward`, which maps the gradient of the output to one gradient per input (``None`` for inputs that
    cannot receive one).
    """

    parents = ()

    @classmethod
    def apply(cls, *inputs, **kwargs):
        """Run the operation on ``inputs`` and return the output tensor."""
        ctx = cls()
        tensors = tuple(as_tensor(t) for t in inputs)
        output = ctx.forward(*(t.data for t in tensors), **kwargs)
        requires_grad = any(t.requires_grad for t in tensors)
        if requires_grad:
            ctx.parents = tensors
            return Tensor(output, requires_grad=True, _ctx=ctx)
        return Tensor(output)

    def forward(self, *arrays, **kwargs):
        "Compute the output array."
        raise NotImplementedError()

    def backward(self, grad_output):
        "Return a sequence of input gradients, one per input."
        raise NotImplementedError()
