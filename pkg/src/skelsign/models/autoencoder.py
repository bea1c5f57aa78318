"""Reconstruction autoencoders used for pretraining.

The encoder is exactly the feature extractor of the backbone classifier, with the same parameter names, so that its
weights can be moved into a classifier after pretraining. The decoder mirrors it:

* ``cnn`` backbone: each decoder stage upsamples (nearest neighbour) to the size that entered the matching encoder
  stage and applies a same-padded convolution. All stages but the last, which maps back to one channel, use ReLU.
* ``fc`` backbone: dense layers with the hidden widths in reverse, ending in a linear layer of the input width.

The latent vector is the flattened encoder output.
"""
from skelsign.models import cnn, fc
from skelsign.models.architecture import Architecture
from skelsign.models.spec import ModelKind
from skelsign.numcore import conv2d, relu, reshape, upsample_nearest


def decoder_name(index):
    "Name of the ``index``-th (1-based) decoder layer."
    return "decoder{}".format(index)


class Autoencoder(Architecture):
    "Backbone encoder plus mirrored decoder."

    def parameter_shapes(self, spec):
        if spec.backbone == ModelKind.FC:
            shapes = fc.dense_shapes((spec.flat_size,) + spec.hidden_sizes)
            shapes.update(fc.dense_shapes(spec.hidden_sizes[::-1] + (spec.flat_size,), prefix="decoder"))
            return shapes

        shapes = cnn.conv_shapes(spec)
        k = spec.kernel_size
        channels = (1,) + spec.conv_channels
        for index in range(1, len(spec.conv_channels) + 1):
            c_in, c_out = channels[-index], channels[-index - 1]
            fan_in, fan_out = c_in * k * k, c_out * k * k
            shapes[decoder_name(index) + ".weight"] = ((c_out, c_in, k, k), fan_in, fan_out)
            shapes[decoder_name(index) + ".bias"] = ((c_out,), fan_in, fan_out)
        return shapes

    def input_shape(self, spec):
        if spec.backbone == ModelKind.FC:
            return (spec.flat_size,)
        return (1, spec.t_max, spec.input_width)

    def latent_size(self, spec):
        "Length of the latent vector."
        if spec.backbone == ModelKind.FC:
            return spec.hidden_sizes[-1]
        return cnn.encoded_size(spec)

    def forward(self, model, inputs):
        """Reconstruct ``inputs``.

        Returns:
            ``(reconstruction, latent)``. The reconstruction has the shape of ``inputs``; the latent is a vector for a
            single sample and an ``N×latent`` matrix for a batch.
        """
        spec = model.spec
        batch, single = self.as_batch(spec, inputs)
        count = batch.shape[0]
        if spec.backbone == ModelKind.FC:
            latent = fc.dense_stack(model.params, batch, len(spec.hidden_sizes), activate_last=True)
            reconstruction = fc.dense_stack(model.params, latent, len(spec.hidden_sizes), prefix="decoder")
        else:
            encoded, _ = cnn.encode(model, batch)
            latent = reshape(encoded, (count, self.latent_size(spec)))
            reconstruction = self._decode(model, encoded)

        if single:
            return (
                reshape(reconstruction, tuple(self.input_shape(spec))),
                reshape(latent, (self.latent_size(spec),)),
            )
        return reconstruction, latent

    def encoder_parameters(self, spec):
        if spec.backbone == ModelKind.FC:
            return tuple(fc.dense_shapes((spec.flat_size,) + spec.hidden_sizes))
        return tuple(cnn.conv_shapes(spec))

    @staticmethod
    def _decode(model, x):
        spec = model.spec
        stages = len(spec.conv_channels)
        for index in range(1, stages + 1):
            name = decoder_name(index)
            x = upsample_nearest(x, spec.stage_sizes[stages - index])
            x = conv2d(x, model.params[name + ".weight"], model.params[name + ".bias"], padding=spec.kernel_size // 2)
            if index < stages:
                x = relu(x)
        return x
