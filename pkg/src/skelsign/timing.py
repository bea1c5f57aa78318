"""Wall-clock timing of training runs."""

import time


class Timer:
    """A context manager measuring elapsed seconds.

    .. code-block::

        with Timer() as timer:
            train()
        print(timer.elapsed)
    """

    def __init__(self):
        self._start = None
        self._stop = None
        self.reset()

    def reset(self):
        "Restart the measurement."
        self._start = time.perf_counter()
        self._stop = None

    @property
    def elapsed(self):
        "Seconds since the last reset, frozen once the ``with`` block exits."
        end = self._stop if self._stop is not None else time.perf_counter()
        return end - self._start

    def __enter__(self):
        self.reset()
        return self

    def __exit__(self, ex_type, ex_value, ex_traceback):
        self._stop = time.perf_counter()
