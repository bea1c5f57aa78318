"""Convolutional classifier over the ``1×t_max×3n`` grid image.

Each stage is a same-padded convolution, a ReLU and a max pool. The pooled output of the last stage is flattened into
a two-layer dense head. Grad-CAM reads the post-ReLU activations of the last convolution, before its pool.
"""
from skelsign.models.architecture import Architecture
from skelsign.models.fc import dense_shapes, dense_stack
from skelsign.numcore import conv2d, max_pool2d, relu, reshape
from skelsign.numcore.tensor import as_tensor


def conv_name(index):
    "Name of the ``index``-th (1-based) convolution layer."
    return "conv{}".format(index)


def conv_shapes(spec):
    "Parameter shapes of the convolution stack."
    shapes = {}
    k = spec.kernel_size
    channels = (1,) + spec.conv_channels
    for index, (c_in, c_out) in enumerate(zip(channels, channels[1:]), start=1):
        fan_in, fan_out = c_in * k * k, c_out * k * k
        shapes[conv_name(index) + ".weight"] = ((c_out, c_in, k, k), fan_in, fan_out)
        shapes[conv_name(index) + ".bias"] = ((c_out,), fan_in, fan_out)
    return shapes


def encoded_size(spec):
    "Length of the flattened output of the convolution stack."
    height, width = spec.stage_sizes[-1]
    return spec.conv_channels[-1] * height * width


def encode(model, batch):
    """Run the convolution stack on a ``1×t_max×3n`` grid or an ``N×1×t_max×3n`` batch.

    Returns:
        ``(pooled, featuremaps)``: the output of the last pool and the activations of the last convolution.
    """
    spec = model.spec
    x = batch
    featuremaps = None
    for index in range(1, len(spec.conv_channels) + 1):
        name = conv_name(index)
        featuremaps = relu(
            conv2d(x, model.params[name + ".weight"], model.params[name + ".bias"], padding=spec.kernel_size // 2)
        )
        x = max_pool2d(featuremaps, spec.pool)
    return x, featuremaps


class Convolutional(Architecture):
    "Convolution stack with a dense head."

    def parameter_shapes(self, spec):
        shapes = conv_shapes(spec)
        shapes.update(dense_shapes((encoded_size(spec), spec.dense_width, spec.num_classes)))
        return shapes

    def input_shape(self, spec):
        return (1, spec.t_max, spec.input_width)

    def forward(self, model, inputs):
        logits, _ = self.forward_with_featuremaps(model, inputs)
        return logits

    def forward_with_featuremaps(self, model, inputs):
        """Logits together with the activations of the last convolution.

        A single ``1×t_max×3n`` grid gives a length-K logit vector and ``C×H'×W'`` featuremaps; a batch gives ``N×K``
        logits and ``N×C×H'×W'`` featuremaps. The featuremaps are part of the graph, so after ``backward`` their
        ``grad`` holds the gradient of the differentiated output.
        """
        spec = model.spec
        inputs = as_tensor(inputs)
        single = inputs.shape == tuple(self.input_shape(spec))
        if not single:
            self.check_input(spec, inputs)
        pooled, featuremaps = encode(model, inputs)
        flat = reshape(pooled, (1 if single else inputs.shape[0], encoded_size(spec)))
        logits = dense_stack(model.params, flat, 2)
        if single:
            logits = reshape(logits, (spec.num_classes,))
        return logits, featuremaps

    def encoder_parameters(self, spec):
        return tuple(conv_shapes(spec))

    def last_conv(self, spec):
        return conv_name(len(spec.conv_channels))
