"""Classes for describing sweep jobs and their results.
"""
import dataclasses
import enum
from typing import Optional


class StrEnum(str, enum.Enum):
    "An Enum subclass with str values."


class Regime(StrEnum):
    """The training regimes a sweep can compare."""

    SL = "sl"  # supervised, 60/10/30 split
    SL_LOW = "sl-low"  # supervised on the 5+5 labelled samples of the SSL split
    SSL = "ssl"  # pretraining on the unsupervised set, then the 5+5 labelled samples


class JobOutcome(StrEnum):
    """Possible outcomes of a job."""

    NORMAL = "normal"  # The run finished and produced a report
    EXCEPTION = "exception"  # The run raised an exception


@dataclasses.dataclass(frozen=True)
class Job:
    """One training run of a sweep."""

    job_id: str
    regime: Regime
    model: str
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "seed", int(self.seed))

    @classmethod
    def for_run(cls, regime, model, seed):
        "A job whose id is derived from its settings."
        regime = Regime(regime)
        return cls("{}-{}-{}".format(regime.value, model, seed), regime, model, seed)


@dataclasses.dataclass(frozen=True)
class JobResult:
    """The result of a job.

    A normal result carries the test accuracy and the TOML report; an exceptional one carries the traceback.
    """

    outcome: JobOutcome
    test_accuracy: Optional[float] = None
    report: Optional[str] = None
    output: Optional[str] = None

    def __post_init__(self):
        if self.outcome is None:
            raise ValueError("Job outcome must always have a value.")
        object.__setattr__(self, "outcome", JobOutcome(self.outcome))
        if self.outcome == JobOutcome.NORMAL and self.test_accuracy is None:
            raise ValueError("A normal job result needs a test accuracy.")

    @property
    def succeeded(self):
        "Whether the run finished normally."
        return self.outcome == JobOutcome.NORMAL
