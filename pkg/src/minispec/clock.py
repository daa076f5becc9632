"""Mission clocks.

The simulated clock makes every mission deterministic: skill durations and
token emission intervals advance it explicitly, and it never moves on its
own. A wall clock exists for running against a real LLM endpoint.
"""

import threading
import time


class SimClock:
    def __init__(self, start=0.0):
        self._t = float(start)
        self._lock = threading.Lock()

    def now(self):
        with self._lock:
            return self._t

    def advance(self, dt):
        if dt < 0:
            raise ValueError("clock cannot go backwards")
        with self._lock:
            self._t += dt

    def advance_to(self, t):
        """Move forward to t if t is in the future; never rewinds."""
        with self._lock:
            if t > self._t:
                self._t = t

    def sleep(self, dt):  # simulated sleep just advances time
        self.advance(dt)


class PacedClock(SimClock):
    """Simulated clock that also spends real time, scaled by ``pace``.

    pace=1.0 runs missions in real time; pace=0.1 at 10x speed. Timing
    semantics stay identical to SimClock; only wall pacing is added, so
    a live observer can watch the mission unfold.
    """

    def __init__(self, pace=1.0, start=0.0):
        super().__init__(start)
        self.pace = pace

    def advance(self, dt):
        super().advance(dt)
        if dt > 0 and self.pace > 0:
            time.sleep(dt * self.pace)

    def advance_to(self, t):
        delta = t - self.now()
        if delta > 0:
            self.advance(delta)


class WallClock:
    def __init__(self):
        self._t0 = time.monotonic()

    def now(self):
        return time.monotonic() - self._t0

    def advance(self, dt):
        time.sleep(dt)

    def advance_to(self, t):
        delta = t - self.now()
        if delta > 0:
            time.sleep(delta)

    def sleep(self, dt):
        time.sleep(dt)
