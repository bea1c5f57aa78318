"Tool for printing the mean test accuracy of a sweep session."

import math
import sys

import click

from skelsign.work_db import ExperimentDB, use_db
from skelsign.work_item import Regime

SUPPORTED_Z_SCORES = {800: 1.282, 900: 1.645, 950: 1.960, 980: 2.326, 990: 2.576, 995: 2.807, 998: 3.080, 999: 3.291}


@click.command()
@click.option("--regime", type=click.Choice([r.value for r in Regime]), default=None, help="Only count this regime")
@click.option(
    "--estimate/--no-estimate", default=False, help="Print the lower bound, mean and upper bound of the accuracy"
)
@click.option(
    "--confidence",
    type=click.Choice(sorted([str(z / 10) for z in SUPPORTED_Z_SCORES])),
    default="95.0",
    help="Specify the confidence levels for estimates",
)
@click.option(
    "--fail-under",
    type=click.FloatRange(0, 100),
    default=None,
    help="Exit with a non-zero code if the mean accuracy (or, with --estimate, the lower bound of its confidence "
    "interval) is below this percentage.",
)
@click.argument("session-file", type=click.Path(dir_okay=False, readable=True, exists=True))
def format_accuracy(regime, estimate, confidence, fail_under, session_file):
    """Calculate the mean test accuracy, in percent, of the completed jobs of a session."""
    z_score = SUPPORTED_Z_SCORES[int(float(confidence) * 10)]

    with use_db(session_file, ExperimentDB.Mode.open) as db:
        values = accuracies(db, regime)

    mean = mean_accuracy(values)
    if estimate:
        half_width = confidence_half_width(values, z_score)
        lower = mean - half_width
        print("{:.2f} {:.2f} {:.2f}".format(lower, mean, mean + half_width))
    else:
        print("{:.2f}".format(mean))
        lower = mean

    if fail_under is not None and lower < float(fail_under):
        sys.exit(1)


def accuracies(experiment_db, regime=None):
    """Test accuracies (percent) of the successful jobs, optionally of one regime."""
    return [
        result.test_accuracy * 100
        for job, result in experiment_db.completed_jobs
        if result.succeeded and (regime is None or job.regime == Regime(regime))
    ]


def mean_accuracy(values):
    "Mean of ``values``, 0 when there are none."
    return sum(values) / len(values) if values else 0.0


def confidence_half_width(values, z_score):
    "Normal-approximation half width of the confidence interval of the mean."
    if len(values) < 2:
        return 0.0
    mean = mean_accuracy(values)
    variance = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    return z_score * math.sqrt(variance / len(values))


if __name__ == "__main__":
    format_accuracy()  # no-qa: no-value-for-parameter
