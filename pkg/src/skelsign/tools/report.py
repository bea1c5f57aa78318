"Tool for printing reports on sweep sessions."

from collections import defaultdict

import click

from skelsign.tools.accuracy import mean_accuracy
from skelsign.work_db import ExperimentDB, use_db


@click.command()
@click.option("--show-output/--no-show-output", default=False, help="Display tracebacks of failed jobs")
@click.option("--show-report/--no-show-report", default=False, help="Display the training report of each job")
@click.option("--show-pending/--no-show-pending", default=False, help="Display incomplete jobs")
@click.argument("session-file", type=click.Path(dir_okay=False, readable=True, exists=True))
def report(show_output, show_report, show_pending, session_file):
    """Print the result of every job and the mean test accuracy of each regime."""

    per_regime = defaultdict(list)
    with use_db(session_file, ExperimentDB.Mode.open) as db:
        for job, result in db.completed_jobs:
            display_job(job)
            if result.succeeded:
                per_regime[job.regime.value].append(result.test_accuracy * 100)
                print("outcome: {}, test accuracy: {:.4f}".format(result.outcome.value, result.test_accuracy))
            else:
                print("outcome: {}".format(result.outcome.value))

            if show_output and result.output:
                print("=== OUTPUT ===")
                print(result.output)
                print("==============")

            if show_report and result.report:
                print("=== REPORT ===")
                print(result.report)
                print("==============")

        if show_pending:
            for job in db.pending_jobs:
                display_job(job)

        num_jobs = db.num_jobs
        num_complete = db.num_results

    print("total jobs: {}".format(num_jobs))
    if num_complete > 0:
        print("complete: {} ({:.2f}%)".format(num_complete, num_complete / num_jobs * 100))
        for regime in sorted(per_regime):
            values = per_regime[regime]
            print("{} mean test accuracy: {:.2f}% over {} runs".format(regime, mean_accuracy(values), len(values)))
    else:
        print("no jobs completed")


def display_job(job):
    "Print the identity of a job."
    print("[job-id] {}".format(job.job_id))
    print("regime: {}, model: {}, seed: {}".format(job.regime.value, job.model, job.seed))


if __name__ == "__main__":
    report()  # no-qa: no-value-for-parameter
