"""Stream interpretation: execute a plan while it is still being generated.

The producer side feeds text chunks into an IncrementalParser and publishes
executable units (elementary statements and composite headers) onto a FIFO,
stamping each with its arrival time on the mission clock. The consumer
drains the FIFO in parse order; composite statements with open bodies block
inside exec_body until the producer appends or closes them. Arrival stamps
are computed from token indices, so the trace is deterministic regardless
of thread scheduling.
"""

import threading
from collections import deque

from .errors import LexError, ParseError
from .parser import PLAN, IncrementalParser
from .printer import serialize
from .runtime import (REPLAN_SYNTAX, AbortSignal, ExecOutcome, Frame,
                      ReplanSignal, _ReturnSignal, exec_statement)


class StreamSession:
    """One-producer/one-consumer channel of executable units."""

    def __init__(self, mode=PLAN):
        self.parser = IncrementalParser(mode)
        self._units = deque()   # (stmt, stamp) top-level units in parse order
        self._cond = threading.Condition()
        self._done = False
        self._error = None      # LexError | ParseError once poisoned
        self.first_unit_stamp = None
        self.on_unit = None     # optional callback(stmt, stamp), producer side

    # -- producer side ---------------------------------------------------------

    def feed(self, chunk, stamp=0.0):
        """Parse one chunk that finished arriving at mission time ``stamp``."""
        try:
            self.parser.stamp = stamp
            events = self.parser.feed(chunk)
        except (LexError, ParseError) as exc:
            self._poison(exc)
            return
        self._publish(events, stamp)

    def finish(self, stamp=0.0):
        try:
            self.parser.stamp = stamp
            events = self.parser.finish()
        except (LexError, ParseError) as exc:
            self._poison(exc)
            return
        self._publish(events, stamp)
        with self._cond:
            self._done = True
            self._cond.notify_all()

    def _publish(self, events, stamp):
        with self._cond:
            for event in events:
                if event[0] == "close":
                    continue
                kind, stmt, depth = event
                if kind in ("stmt", "open") and depth == 0:
                    if self.first_unit_stamp is None:
                        self.first_unit_stamp = stamp
                    self._units.append((stmt, stamp))
                    if self.on_unit is not None:
                        self.on_unit(stmt, stamp)
            self._cond.notify_all()

    def _poison(self, exc):
        with self._cond:
            self._error = exc
            self._done = True
            self._cond.notify_all()

    # -- consumer side -----------------------------------------------------------

    def poisoned(self):
        return self._error is not None

    def next_unit(self, should_stop, timeout=0.05):
        """Next top-level unit, or None when the stream ended or must stop."""
        with self._cond:
            while True:
                if self._units:
                    return self._units.popleft()
                if self._done or should_stop():
                    return None
                self._cond.wait(timeout)

    @property
    def program(self):
        return self.parser.program


def run_stream(session, dsp, ctl):
    """Consume a StreamSession to completion; mirrors run_batch outcomes."""
    frame = Frame()
    ctl.poison_check = session.poisoned
    try:
        while True:
            unit = session.next_unit(lambda: ctl.aborted or session.poisoned())
            if unit is None:
                ctl.check_abort()
                if session.poisoned():
                    raise ReplanSignal(REPLAN_SYNTAX, str(session._error))
                if session._done:
                    return ExecOutcome("completed", value=None, trace=ctl.trace)
                continue
            stmt, stamp = unit
            ctl.clock.advance_to(stamp)
            exec_statement(stmt, frame, dsp, ctl)
    except _ReturnSignal as ret:
        return ExecOutcome("completed", value=ret.value, trace=ctl.trace)
    except ReplanSignal as sig:
        return ExecOutcome("replan", reason=sig.reason, message=sig.message,
                           trace=ctl.trace)
    except AbortSignal:
        return ExecOutcome("aborted", trace=ctl.trace)
    except Exception as exc:  # runtime faults mirror run_batch's error path
        return ExecOutcome("error", message=str(exc), trace=ctl.trace)
    finally:
        ctl.poison_check = None


def canonical_text(session):
    """Canonical plan text once the stream has fully arrived."""
    return serialize(session.program)
