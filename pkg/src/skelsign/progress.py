"""Progress reporting for long-running training and sweeps.

Reporting is decoupled from updating: a running loop updates a :class:`Progress` record, and a reporter installed
with :func:`progress_reporter` prints that record whenever :func:`report_progress` is called, for instance from a
SIGINFO handler.

Example::

    progress = Progress("train")

    with progress_reporter(progress.report):
        for epoch in range(epochs):
            progress.update(epoch + 1, epochs, loss=loss)

    signal.signal(signal.SIGINFO, lambda *args: report_progress())

Reporters may be invoked asynchronously from the main thread; they only read state.
"""

from contextlib import contextmanager
import sys

# Installed one-argument callables taking the output stream.
_reporters = []


def report_progress(stream=None):
    """Report progress from every installed reporter.

    Args:
        stream: The text stream to write to. Defaults to ``sys.stderr``.
    """
    if stream is None:
        stream = sys.stderr
    for reporter in list(_reporters):
        reporter(stream)


@contextmanager
def progress_reporter(reporter):
    """Install ``reporter`` for the duration of the ``with`` block."""
    _reporters.append(reporter)
    try:
        yield
    finally:
        _reporters.remove(reporter)


class Progress:
    """The latest position of a loop.

    Args:
        task: Short name printed in front of the position.
    """

    def __init__(self, task):
        self.task = task
        self.done = 0
        self.total = 0
        self.values = {}

    def update(self, done, total, **values):
        "Record that ``done`` of ``total`` steps are finished, with optional named values."
        self.done = done
        self.total = total
        self.values = values

    @property
    def message(self):
        "One line describing the position."
        details = "".join(", {}={:.6g}".format(key, value) for key, value in sorted(self.values.items()))
        return "{}: {} of {} complete{}".format(self.task, self.done, self.total, details)

    def report(self, stream):
        "Print :attr:`message` to ``stream``."
        print(self.message, file=stream)
