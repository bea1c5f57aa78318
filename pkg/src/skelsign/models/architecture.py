"Implementation of the architecture base class."

from abc import ABC, abstractmethod

from skelsign.exceptions import ShapeError
from skelsign.numcore import reshape
from skelsign.numcore.tensor import as_tensor


class Architecture(ABC):
    """The base class of architecture plugins.

    An architecture knows which parameters a :class:`ModelSpec` calls for, how to lay out a batch of padded grids
    for its first layer, and how to run the forward pass. It holds no state of its own; parameters live on the
    :class:`Model`.
    """

    @abstractmethod
    def parameter_shapes(self, spec):
        """The parameters of a model built from ``spec``.

        Returns:
            An ordered mapping from parameter name to ``(shape, fan_in, fan_out)``. Names ending in ``.bias`` are
            initialized to zero; all others are weights.
        """

    @abstractmethod
    def input_shape(self, spec):
        "Shape of one prepared sample (without the batch axis)."

    @abstractmethod
    def forward(self, model, inputs):
        """Run the model on a prepared batch and return the output tensor."""

    def prepare(self, spec, grids):
        """Reshape an ``N×t_max×3n`` array of grids into a batch of inputs.

        Raises:
            ShapeError: If the grids do not match ``spec``.
        """
        expected = (spec.t_max, spec.input_width)
        if grids.ndim != 3 or grids.shape[1:] != expected:
            raise ShapeError("Expected grids of shape N×{}×{}, got {}".format(*expected, grids.shape))
        return grids.reshape((grids.shape[0],) + tuple(self.input_shape(spec)))

    def encoder_parameters(self, spec):
        """Names of the parameters shared with an autoencoder of this backbone. Empty if none."""
        return ()

    def last_conv(self, spec):
        "Name of the convolution layer Grad-CAM reads, or ``None``."
        return None

    def as_batch(self, spec, inputs):
        """Add a batch axis to a single prepared sample.

        Returns:
            ``(batch, single)`` where ``single`` tells whether the axis was added.

        Raises:
            ShapeError: If ``inputs`` is neither one prepared sample nor a batch of them.
        """
        inputs = as_tensor(inputs)
        expected = tuple(self.input_shape(spec))
        if inputs.shape == expected:
            return reshape(inputs, (1,) + expected), True
        self.check_input(spec, inputs)
        return inputs, False

    def check_input(self, spec, inputs):
        """Raise ShapeError unless ``inputs`` is a batch of prepared samples."""
        expected = tuple(self.input_shape(spec))
        if inputs.ndim != len(expected) + 1 or inputs.shape[1:] != expected:
            raise ShapeError(
                "{} model expects inputs of shape N×{}, got {}".format(
                    spec.kind.value, "×".join(str(d) for d in expected), inputs.shape
                )
            )
