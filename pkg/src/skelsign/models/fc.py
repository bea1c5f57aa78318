"""Fully connected classifier.

A flattened sample passes through ``len(hidden_sizes)`` ReLU layers and a linear output layer. Layers are named
``dense1`` to ``dense{L+1}``.
"""
from skelsign.models.architecture import Architecture
from skelsign.numcore import dense, relu, reshape


def layer_widths(spec):
    "Input, hidden and output widths of the FC stack."
    return (spec.flat_size,) + spec.hidden_sizes + (spec.num_classes,)


def dense_shapes(widths, prefix="dense"):
    "Parameter shapes of a chain of dense layers named ``{prefix}1``, ``{prefix}2``, ..."
    shapes = {}
    for index, (fan_in, fan_out) in enumerate(zip(widths, widths[1:]), start=1):
        shapes["{}{}.weight".format(prefix, index)] = ((fan_in, fan_out), fan_in, fan_out)
        shapes["{}{}.bias".format(prefix, index)] = ((fan_out,), fan_in, fan_out)
    return shapes


def dense_stack(params, x, count, prefix="dense", activate_last=False):
    "Apply ``count`` dense layers, with ReLU after each except (by default) the last."
    for index in range(1, count + 1):
        x = dense(x, params["{}{}.weight".format(prefix, index)], params["{}{}.bias".format(prefix, index)])
        if index < count or activate_last:
            x = relu(x)
    return x


class FullyConnected(Architecture):
    "Multi-layer perceptron over the flattened grid."

    def parameter_shapes(self, spec):
        return dense_shapes(layer_widths(spec))

    def input_shape(self, spec):
        return (spec.flat_size,)

    def forward(self, model, inputs):
        batch, single = self.as_batch(model.spec, inputs)
        logits = dense_stack(model.params, batch, len(model.spec.hidden_sizes) + 1)
        return reshape(logits, (model.spec.num_classes,)) if single else logits

    def encoder_parameters(self, spec):
        names = []
        for index in range(1, len(spec.hidden_sizes) + 1):
            names += ["dense{}.weight".format(index), "dense{}.bias".format(index)]
        return tuple(names)

    def encode(self, model, batch):
        "The activations of the last hidden layer."
        return dense_stack(model.params, batch, len(model.spec.hidden_sizes), activate_last=True)
