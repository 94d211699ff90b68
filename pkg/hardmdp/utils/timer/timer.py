import time


class Timer:
    """
    Wall-clock stopwatch on time.perf_counter.

    As a context manager it restarts on entry and stores the duration of the
    block in `elapsed` (seconds) on exit.
    """

    def __init__(self):
        self.elapsed = None
        self.reset()

    def reset(self):
        self.ref = time.perf_counter()

    def sec(self):
        """Seconds since the last reset."""
        return time.perf_counter() - self.ref

    def msec(self):
        return 1000.0 * self.sec()

    def __enter__(self):
        self.reset()
        return self

    def __exit__(self, *exc):
        self.elapsed = self.sec()
        return False
