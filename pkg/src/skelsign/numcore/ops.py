"""Dense, convolutional and pooling operations with hand-written backward passes.

Image-like operations accept either a single ``C×H×W`` array or a batch shaped ``N×C×H×W``; the output keeps the
same batching as the input.
"""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from skelsign.exceptions import ShapeError
from skelsign.numcore.tensor import DTYPE, Function, as_tensor


def _unbroadcast(grad, shape):
    "Sum ``grad`` down to ``shape``, undoing NumPy broadcasting."
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, dim in enumerate(shape):
        if dim == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Add(Function):
    "Elementwise sum with broadcasting."

    def forward(self, a, b):
        self.shapes = (a.shape, b.shape)
        return a + b

    def backward(self, grad_output):
        shape_a, shape_b = self.shapes
        return _unbroadcast(grad_output, shape_a), _unbroadcast(grad_output, shape_b)


class Mul(Function):
    "Elementwise product with broadcasting."

    def forward(self, a, b):
        self.a, self.b = a, b
        return a * b

    def backward(self, grad_output):
        return _unbroadcast(grad_output * self.b, self.a.shape), _unbroadcast(grad_output * self.a, self.b.shape)


class Scale(Function):
    "Multiplication by a constant."

    def forward(self, a, factor):
        self.factor = float(factor)
        return a * self.factor

    def backward(self, grad_output):
        return (grad_output * self.factor,)


class ReduceSum(Function):
    "Sum of every element."

    def forward(self, a):
        self.shape = a.shape
        return np.array(a.sum())

    def backward(self, grad_output):
        return (np.broadcast_to(grad_output, self.shape).copy(),)


class MatMul(Function):
    "Matrix product of two 2-D arrays."

    def forward(self, a, b):
        if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
            raise ShapeError("matmul: cannot multiply {} by {}".format(a.shape, b.shape))
        self.a, self.b = a, b
        return a @ b

    def backward(self, grad_output):
        return grad_output @ self.b.T, self.a.T @ grad_output


class Relu(Function):
    "Elementwise ``max(0, x)``; the subgradient at 0 is 0."

    def forward(self, a):
        self.mask = a > 0
        return np.where(self.mask, a, 0.0)

    def backward(self, grad_output):
        return (grad_output * self.mask,)


class Reshape(Function):
    "View the input with a new shape."

    def forward(self, a, shape):
        self.shape = a.shape
        try:
            return a.reshape(shape)
        except ValueError as exc:
            raise ShapeError("reshape: cannot view {} as {}".format(a.shape, shape)) from exc

    def backward(self, grad_output):
        return (grad_output.reshape(self.shape),)


class Take(Function):
    "Indexing (basic or advanced); gradients scatter back to the indexed positions."

    def forward(self, a, index):
        self.shape = a.shape
        self.index = index
        return np.array(a[index])

    def backward(self, grad_output):
        grad = np.zeros(self.shape, dtype=DTYPE)
        if _is_basic_index(self.index):
            grad[self.index] += grad_output
        else:
            np.add.at(grad, self.index, grad_output)
        return (grad,)


def _is_basic_index(index):
    "Basic indices never select an element twice."
    parts = index if isinstance(index, tuple) else (index,)
    return all(isinstance(part, (int, np.integer, slice)) or part is Ellipsis or part is None for part in parts)


def _as_batch(x, name):
    if x.ndim == 3:
        return x[np.newaxis], True
    if x.ndim == 4:
        return x, False
    raise ShapeError("{}: expected C×H×W or N×C×H×W input, got {}".format(name, x.shape))


class Conv2d(Function):
    """Cross-correlation of an image with a bank of kernels (no kernel flip)."""

    def forward(self, x, kernels, bias, stride, padding):
        x, self.single = _as_batch(x, "conv2d")
        if kernels.ndim != 4 or kernels.shape[1] != x.shape[1]:
            raise ShapeError("conv2d: kernels {} do not match input {}".format(kernels.shape, x.shape))
        if bias.shape != (kernels.shape[0],):
            raise ShapeError("conv2d: bias {} does not match kernels {}".format(bias.shape, kernels.shape))
        if stride < 1 or padding < 0:
            raise ShapeError("conv2d: stride must be positive and padding non-negative")
        _, _, height, width = x.shape
        kh, kw = kernels.shape[2:]
        if height + 2 * padding < kh or width + 2 * padding < kw:
            raise ShapeError(
                "conv2d: kernel {}×{} larger than padded input {}×{}".format(
                    kh, kw, height + 2 * padding, width + 2 * padding
                )
            )

        padded = np.pad(x, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
        windows = sliding_window_view(padded, (kh, kw), axis=(2, 3))[:, :, ::stride, ::stride]
        out = np.tensordot(windows, kernels, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
        out = out + bias[np.newaxis, :, np.newaxis, np.newaxis]

        self.x_shape = x.shape
        self.padded_shape = padded.shape
        self.windows = windows
        self.kernels = kernels
        self.stride = stride
        self.padding = padding
        return out[0] if self.single else out

    def backward(self, grad_output):
        grad = grad_output[np.newaxis] if self.single else grad_output
        _, _, out_h, out_w = grad.shape
        kh, kw = self.kernels.shape[2:]
        stride, padding = self.stride, self.padding

        grad_bias = grad.sum(axis=(0, 2, 3))
        grad_kernels = np.tensordot(grad, self.windows, axes=([0, 2, 3], [0, 2, 3]))

        grad_padded = np.zeros(self.padded_shape, dtype=DTYPE)
        for i in range(kh):
            for j in range(kw):
                contribution = np.tensordot(grad, self.kernels[:, :, i, j], axes=([1], [0])).transpose(0, 3, 1, 2)
                grad_padded[
                    :, :, i : i + stride * (out_h - 1) + 1 : stride, j : j + stride * (out_w - 1) + 1 : stride
                ] += contribution
        height, width = self.x_shape[2:]
        grad_x = grad_padded[:, :, padding : padding + height, padding : padding + width]
        if self.single:
            grad_x = grad_x[0]
        return grad_x, grad_kernels, grad_bias


class MaxPool2d(Function):
    """Non-overlapping max pooling; trailing rows/columns that do not fill a window are dropped."""

    def forward(self, x, window):
        x, self.single = _as_batch(x, "max_pool2d")
        ph, pw = window
        batch, channels, height, width = x.shape
        if ph < 1 or pw < 1 or ph > height or pw > width:
            raise ShapeError("max_pool2d: window {}×{} does not fit input {}×{}".format(ph, pw, height, width))
        out_h, out_w = height // ph, width // pw
        blocks = (
            x[:, :, : out_h * ph, : out_w * pw]
            .reshape(batch, channels, out_h, ph, out_w, pw)
            .transpose(0, 1, 2, 4, 3, 5)
            .reshape(batch, channels, out_h, out_w, ph * pw)
        )
        # argmax returns the first maximum in row-major window order.
        self.argmax = blocks.argmax(axis=-1)
        out = np.take_along_axis(blocks, self.argmax[..., np.newaxis], axis=-1)[..., 0]
        self.x_shape = x.shape
        self.window = (ph, pw)
        return out[0] if self.single else out

    def backward(self, grad_output):
        grad = grad_output[np.newaxis] if self.single else grad_output
        batch, channels, out_h, out_w = grad.shape
        ph, pw = self.window
        blocks = np.zeros((batch, channels, out_h, out_w, ph * pw), dtype=DTYPE)
        np.put_along_axis(blocks, self.argmax[..., np.newaxis], grad[..., np.newaxis], axis=-1)
        grad_x = np.zeros(self.x_shape, dtype=DTYPE)
        grad_x[:, :, : out_h * ph, : out_w * pw] = (
            blocks.reshape(batch, channels, out_h, out_w, ph, pw)
            .transpose(0, 1, 2, 4, 3, 5)
            .reshape(batch, channels, out_h * ph, out_w * pw)
        )
        return (grad_x[0] if self.single else grad_x,)


class GlobalAvgPool(Function):
    "Per-channel mean over the two spatial axes."

    def forward(self, x):
        if x.ndim not in (3, 4) or x.shape[-1] < 1 or x.shape[-2] < 1:
            raise ShapeError("global_avg_pool: expected C×H×W or N×C×H×W input, got {}".format(x.shape))
        self.shape = x.shape
        return x.mean(axis=(-2, -1))

    def backward(self, grad_output):
        area = self.shape[-1] * self.shape[-2]
        return (np.broadcast_to(grad_output[..., np.newaxis, np.newaxis] / area, self.shape).copy(),)


class UpsampleNearest(Function):
    """Nearest-neighbour resize of the two spatial axes to an arbitrary size.

    Output pixel ``(r, c)`` copies input pixel ``(r·h // H, c·w // W)``.
    """

    def forward(self, x, size):
        x, self.single = _as_batch(x, "upsample_nearest")
        height, width = x.shape[2:]
        target_h, target_w = size
        if target_h < 1 or target_w < 1:
            raise ShapeError("upsample_nearest: invalid target size {}".format(size))
        self.rows = _nearest_matrix(height, target_h)
        self.cols = _nearest_matrix(width, target_w)
        out = self.rows @ x @ self.cols.T
        return out[0] if self.single else out

    def backward(self, grad_output):
        grad = grad_output[np.newaxis] if self.single else grad_output
        grad_x = self.rows.T @ grad @ self.cols
        return (grad_x[0] if self.single else grad_x,)


def _nearest_matrix(source, target):
    "A target×source one-hot selection matrix."
    matrix = np.zeros((target, source), dtype=DTYPE)
    matrix[np.arange(target), (np.arange(target) * source) // target] = 1.0
    return matrix


def add(a, b):
    "Elementwise ``a + b`` with broadcasting."
    return Add.apply(a, b)


def mul(a, b):
    "Elementwise ``a * b`` with broadcasting."
    return Mul.apply(a, b)


def scale(a, factor):
    "``factor * a`` for a constant ``factor``."
    return Scale.apply(a, factor=factor)


def reduce_sum(a):
    "Sum of all elements, as a scalar tensor."
    return ReduceSum.apply(a)


def matmul(a, b):
    """Matrix product of an ``M×K`` and a ``K×N`` tensor.

    Raises:
        ShapeError: If the inner dimensions differ or either operand is not 2-D.
    """
    return MatMul.apply(a, b)


def dense(x, weight, bias):
    "Affine map ``x·W + b`` for a batch of row vectors."
    return add(matmul(x, weight), bias)


def relu(a):
    "Elementwise ``max(0, x)``."
    return Relu.apply(a)


def reshape(a, shape):
    "The tensor viewed with a new shape."
    return Reshape.apply(a, shape=tuple(shape))


def take(a, index):
    "``a[index]`` as a differentiable operation."
    return Take.apply(a, index=index)


def conv2d(x, kernels, bias, stride=1, padding=0):
    """2-D cross-correlation.

    Args:
        x: Input of shape ``C_in×H×W`` (or a batch ``N×C_in×H×W``).
        kernels: ``C_out×C_in×kh×kw``.
        bias: ``C_out`` vector.
        stride: Positive step between windows.
        padding: Zero rows/columns added on every side.

    Returns:
        A tensor of shape ``C_out×H'×W'`` where ``H' = (H + 2·padding − kh) // stride + 1`` (same for ``W'``).

    Raises:
        ShapeError: If the kernel does not fit the padded input or the channel counts disagree.
    """
    return Conv2d.apply(x, kernels, bias, stride=int(stride), padding=int(padding))


def max_pool2d(x, window):
    """Max pooling with non-overlapping ``ph×pw`` windows.

    Gradients flow only to the first maximum of each window.
    """
    if isinstance(window, int):
        window = (window, window)
    return MaxPool2d.apply(x, window=tuple(int(w) for w in window))


def global_avg_pool(x):
    "Per-channel mean over all spatial positions."
    return GlobalAvgPool.apply(x)


def upsample_nearest(x, size):
    "Nearest-neighbour resize to ``size = (H, W)``."
    return UpsampleNearest.apply(x, size=tuple(int(s) for s in size))


def conv_output_size(size, kernel, stride=1, padding=0):
    "Length of one spatial axis after a convolution."
    return (size + 2 * padding - kernel) // stride + 1


def constant(value):
    "A tensor that never receives gradients."
    return as_tensor(value)
