"""Model descriptions and their realized parameter sets."""
import dataclasses
import enum
from typing import Dict, Optional, Tuple

from skelsign.exceptions import SpecError
from skelsign.numcore import Tensor


class ModelKind(str, enum.Enum):
    "The available architectures."

    FC = "fc"
    CNN = "cnn"
    LSTM = "lstm"
    AUTOENCODER = "autoencoder"


@dataclasses.dataclass(frozen=True)
class ModelSpec:
    """Architecture description.

    Only the hyperparameters of ``kind`` are used; the others keep their defaults.

    Attributes:
        kind: The architecture.
        t_max: Padded sequence length.
        joint_count: Number of joints ``n``; an input frame has ``3·n`` values.
        seed: Seed for parameter initialization.
        num_classes: Number of output logits.
        hidden_sizes: FC hidden layer widths.
        conv_channels: Output channels of the CNN's convolution layers.
        kernel_size: Odd side length of the square convolution kernels.
        pool: Side of the square max-pool window after each convolution.
        dense_width: Width of the CNN head's hidden layer.
        lstm_hidden: LSTM hidden size.
        backbone: For autoencoders, the classifier kind whose encoder is pretrained (``cnn`` or ``fc``).
    """

    kind: ModelKind
    t_max: int
    joint_count: int
    seed: int = 0
    num_classes: int = 2
    hidden_sizes: Tuple[int, ...] = (256, 64)
    conv_channels: Tuple[int, ...] = (8, 16, 32)
    kernel_size: int = 3
    pool: int = 2
    dense_width: int = 64
    lstm_hidden: int = 128
    backbone: ModelKind = ModelKind.CNN

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", ModelKind(self.kind))
            object.__setattr__(self, "backbone", ModelKind(self.backbone))
        except ValueError as exc:
            raise SpecError(str(exc)) from exc
        object.__setattr__(self, "hidden_sizes", tuple(int(s) for s in self.hidden_sizes))
        object.__setattr__(self, "conv_channels", tuple(int(c) for c in self.conv_channels))

        _positive(t_max=self.t_max, joint_count=self.joint_count)
        if self.num_classes < 2:
            raise SpecError("num_classes must be at least 2, got {}".format(self.num_classes))
        if self.kind == ModelKind.AUTOENCODER and self.backbone not in (ModelKind.CNN, ModelKind.FC):
            raise SpecError("An autoencoder backbone must be cnn or fc, got {}".format(self.backbone.value))
        if self.uses(ModelKind.FC):
            if not self.hidden_sizes:
                raise SpecError("The FC model needs at least one hidden layer")
            _positive(**{"hidden_sizes[{}]".format(i): s for i, s in enumerate(self.hidden_sizes)})
        if self.uses(ModelKind.CNN):
            if not self.conv_channels:
                raise SpecError("The CNN needs at least one convolution layer")
            _positive(pool=self.pool, dense_width=self.dense_width, kernel_size=self.kernel_size)
            _positive(**{"conv_channels[{}]".format(i): c for i, c in enumerate(self.conv_channels)})
            if self.kernel_size % 2 == 0:
                raise SpecError("kernel_size must be odd, got {}".format(self.kernel_size))
            height, width = self.stage_sizes[-1]
            if height < 1 or width < 1:
                raise SpecError(
                    "Input {}×{} is too small for {} pooling stages of {}".format(
                        self.t_max, self.input_width, len(self.conv_channels), self.pool
                    )
                )
        if self.kind == ModelKind.LSTM:
            _positive(lstm_hidden=self.lstm_hidden)

    def uses(self, kind):
        "Whether the layers of ``kind`` are part of this model."
        if self.kind == ModelKind.AUTOENCODER:
            return self.backbone == kind
        return self.kind == kind

    @property
    def input_width(self):
        "Values per frame, ``3·n``."
        return 3 * self.joint_count

    @property
    def flat_size(self):
        "Length of a flattened sample, ``3·n·t_max``."
        return self.t_max * self.input_width

    @property
    def stage_sizes(self):
        """Spatial size entering each convolution stage, followed by the size after the last pool."""
        sizes = [(self.t_max, self.input_width)]
        for _ in self.conv_channels:
            height, width = sizes[-1]
            sizes.append((height // self.pool, width // self.pool))
        return tuple(sizes)

    def to_dict(self):
        "A JSON-compatible description."
        d = dataclasses.asdict(self)
        d["kind"] = self.kind.value
        d["backbone"] = self.backbone.value
        d["hidden_sizes"] = list(self.hidden_sizes)
        d["conv_channels"] = list(self.conv_channels)
        return d

    @classmethod
    def from_dict(cls, d):
        "Inverse of :meth:`to_dict`."
        try:
            return cls(**d)
        except TypeError as exc:
            raise SpecError("Invalid model description: {}".format(exc)) from exc


def _positive(**values):
    for name, value in values.items():
        if int(value) < 1:
            raise SpecError("{} must be positive, got {}".format(name, value))


@dataclasses.dataclass(eq=False)
class Model:
    """A realized architecture.

    Attributes:
        spec: The description the model was built from.
        params: Named parameter tensors, in construction order.
        architecture: The plugin implementing the forward pass.
        last_conv: For CNNs, the name of the convolution layer whose activations feed Grad-CAM.
    """

    spec: ModelSpec
    params: Dict[str, Tensor]
    architecture: object
    last_conv: Optional[str] = None

    @property
    def kind(self):
        "The model's :class:`ModelKind`."
        return self.spec.kind

    def parameters(self):
        "The parameter tensors as a list."
        return list(self.params.values())

    def zero_grad(self):
        "Reset every parameter gradient."
        for param in self.params.values():
            param.zero_grad()

    def prepare(self, grids):
        "Arrange an ``N×t_max×3n`` batch of grids the way this architecture consumes them."
        return self.architecture.prepare(self.spec, grids)

    def __call__(self, inputs):
        return self.architecture.forward(self, inputs)

    def frozen(self):
        """A view of this model whose parameters share values but never receive gradients."""
        params = {name: Tensor(param.data, name=name) for name, param in self.params.items()}
        for name, param in params.items():
            param.data = self.params[name].data
        return dataclasses.replace(self, params=params)
