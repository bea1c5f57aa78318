"""Training hyperparameters."""
import dataclasses
import enum

from skelsign.exceptions import SpecError


class OptimizerKind(str, enum.Enum):
    "The available optimizers."

    SGD = "sgd"
    ADAM = "adam"


@dataclasses.dataclass(frozen=True)
class HyperParams:
    """Settings of one training run.

    Attributes:
        epochs: Passes over the training set. Zero is allowed and trains nothing.
        batch_size: Samples per gradient step.
        learning_rate: Step size. Zero leaves the parameters untouched.
        optimizer: ``adam`` or ``sgd``.
        beta1: Adam's first-moment decay.
        beta2: Adam's second-moment decay.
        epsilon: Adam's denominator offset.
        contrastive_temperature: Temperature of the contrastive term.
        contrastive_weight: Weight of the contrastive term during reconstruction pretraining. Zero disables it.
        seed: Seed of the per-epoch shuffles.
    """

    epochs: int = 30
    batch_size: int = 8
    learning_rate: float = 1e-3
    optimizer: OptimizerKind = OptimizerKind.ADAM
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    contrastive_temperature: float = 0.5
    contrastive_weight: float = 0.0
    seed: int = 0

    def __post_init__(self):
        try:
            object.__setattr__(self, "optimizer", OptimizerKind(self.optimizer))
        except ValueError as exc:
            raise SpecError(str(exc)) from exc

        if self.epochs < 0:
            raise SpecError("epochs must be non-negative, got {}".format(self.epochs))
        if self.batch_size < 1:
            raise SpecError("batch_size must be positive, got {}".format(self.batch_size))
        if self.learning_rate < 0:
            raise SpecError("learning_rate must be non-negative, got {}".format(self.learning_rate))
        for name in ("beta1", "beta2"):
            if not 0 <= getattr(self, name) < 1:
                raise SpecError("{} must lie in [0, 1), got {}".format(name, getattr(self, name)))
        if self.epsilon <= 0:
            raise SpecError("epsilon must be positive, got {}".format(self.epsilon))
        if self.contrastive_temperature <= 0:
            raise SpecError("contrastive_temperature must be positive, got {}".format(self.contrastive_temperature))
        if self.contrastive_weight < 0:
            raise SpecError("contrastive_weight must be non-negative, got {}".format(self.contrastive_weight))

    def replace(self, **changes):
        "A copy with some fields changed."
        return dataclasses.replace(self, **changes)
