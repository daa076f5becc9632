"""Mission event log: append-only, sequenced, mission-clock timestamps.

The log is the single source of truth for observers. Producers (the mission
loop, the interpreter, the backend) call it like a plain ``emit(kind,
payload)`` callback; consumers (WebSocket fan-out, the CLI event printer)
replay from any sequence number and then follow live.
"""

import json
import threading
from dataclasses import dataclass

EVENT_KINDS = frozenset({
    "mission_started", "token_received", "unit_parsed",
    "statement_started", "statement_finished", "drone_state",
    "scene_updated", "probe_issued", "probe_answered", "replan_triggered",
    "log_emitted", "mission_done", "mission_failed", "aborted",
})


@dataclass(frozen=True)
class Event:
    seq: int
    at_ms: int
    kind: str
    payload: dict

    def to_dict(self):
        return {"seq": self.seq, "at_ms": self.at_ms, "kind": self.kind,
                "payload": self.payload}

    def to_json(self):
        return json.dumps(self.to_dict())


class EventLog:
    """Append-only per-mission event store with blocking reads.

    Callable so it can stand in anywhere an ``emit(kind, payload)``
    callback is expected; the mission loop binds its clock via
    ``bind_clock`` so timestamps are mission-clock milliseconds.
    """

    def __init__(self, clock=None):
        self.clock = clock
        self._events = []
        self._cond = threading.Condition()

    def bind_clock(self, clock):
        self.clock = clock

    def emit(self, kind, payload):
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        at_ms = int(round(self.clock.now() * 1000)) if self.clock else 0
        with self._cond:
            self._events.append(Event(len(self._events), at_ms, kind,
                                      dict(payload)))
            self._cond.notify_all()

    __call__ = emit

    def __len__(self):
        with self._cond:
            return len(self._events)

    def __bool__(self):
        return True  # an empty log is still a valid emit target

    def snapshot(self, from_seq=0):
        """Events with seq >= from_seq, in order."""
        with self._cond:
            return self._events[from_seq:]

    def wait_beyond(self, seq, timeout=0.1):
        """Block until an event with seq >= ``seq`` exists; return new ones."""
        with self._cond:
            if len(self._events) <= seq:
                self._cond.wait(timeout)
            return self._events[seq:]

    def kinds(self):
        return [e.kind for e in self.snapshot()]


def format_event(event):
    """One human-readable line per event, for CLI output and replay."""
    detail = ""
    p = event.payload
    if event.kind == "token_received":
        detail = repr(p.get("text", ""))
    elif event.kind in ("probe_issued", "probe_answered"):
        detail = f"{p.get('question')!r}"
        if "answer" in p:
            detail += f" -> {p['answer']!r}"
    elif event.kind in ("statement_started", "statement_finished"):
        detail = p.get("text", "")
    elif event.kind == "replan_triggered":
        detail = f"reason={p.get('reason')}"
    elif event.kind == "mission_done":
        detail = f"success={p.get('success')} answer={p.get('answer')!r}"
    elif event.kind == "mission_failed":
        detail = p.get("reason", "")
    elif event.kind == "log_emitted":
        detail = p.get("line", "")
    elif event.kind == "drone_state":
        detail = (f"x={p.get('x'):.0f} y={p.get('y'):.0f} "
                  f"z={p.get('z'):.0f} yaw={p.get('yaw'):.0f}")
    return f"[{event.at_ms / 1000:8.2f}s] #{event.seq:<4} " \
           f"{event.kind:<19} {detail}".rstrip()


def read_event_file(text):
    """Parse a JSON-lines event trace back into Event objects."""
    events = []
    for line in text.splitlines():
        if not line.strip():
            continue
        data = json.loads(line)
        events.append(Event(data["seq"], data["at_ms"], data["kind"],
                            data.get("payload", {})))
    return events
