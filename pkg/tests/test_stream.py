"""Stream interpretation: units, stamps, blocking, poisoning, threads."""

import threading

import pytest

from minispec.clock import SimClock
from minispec.parser import PLAN
from minispec.runtime import RunControl, SkillDispatcher
from minispec.streaming import StreamSession, canonical_text, run_stream
from minispec.tokens import HeuristicTokenizer

from test_interpreter import StubBackend, stub_registry


def make_ctl():
    return RunControl(clock=SimClock())


def make_dsp(returns=None):
    backend = StubBackend(returns)
    return SkillDispatcher(stub_registry(), backend), backend


def feed_tokens(session, text, rate=20.0, t0=0.0):
    tokens = HeuristicTokenizer().segment(text)
    for i, tok in enumerate(tokens, 1):
        session.feed(tok, stamp=t0 + i / rate)
    session.finish(stamp=t0 + len(tokens) / rate)
    return len(tokens)


def test_units_arrive_in_parse_order():
    session = StreamSession(PLAN)
    seen = []
    session.on_unit = lambda stmt, stamp: seen.append(stamp)
    feed_tokens(session, "mf(10);tc(20)")
    assert len(seen) == 2
    assert seen == sorted(seen)


def test_first_unit_stamp_set_once():
    session = StreamSession(PLAN)
    n = feed_tokens(session, "mf(10);tc(20)", rate=10.0)
    assert session.first_unit_stamp is not None
    assert 0 < session.first_unit_stamp <= n / 10.0


def test_composite_header_is_one_unit():
    session = StreamSession(PLAN)
    feed_tokens(session, "3{mf(1);tc(2)}")
    units = []
    while True:
        u = session.next_unit(lambda: False)
        if u is None:
            break
        units.append(u[0])
    assert len(units) == 1  # the loop header; body statements nest inside


def test_run_stream_executes_all_statements():
    session = StreamSession(PLAN)
    feed_tokens(session, "mf(10);3{tc(5)};mf(1)")
    dsp, backend = make_dsp()
    out = run_stream(session, dsp, make_ctl())
    assert out.completed
    assert [c[0] for c in backend.calls] == \
        ["move_forward", "turn_cw", "turn_cw", "turn_cw", "move_forward"]


def test_clock_respects_arrival_stamps():
    session = StreamSession(PLAN)
    feed_tokens(session, "mf(10)", rate=2.0)  # 4 tokens: mf ( 10 )
    dsp, _ = make_dsp()
    ctl = make_ctl()
    out = run_stream(session, dsp, ctl)
    assert out.completed
    assert ctl.first_dispatch_at == pytest.approx(2.0)  # unit done at ')'


def test_return_value_propagates():
    session = StreamSession(PLAN)
    feed_tokens(session, "->'answer'")
    out = run_stream(session, make_dsp()[0], make_ctl())
    assert out.completed
    assert out.value == "answer"


def test_poisoned_stream_becomes_syntax_replan():
    session = StreamSession(PLAN)
    session.feed("mf(10);", stamp=0.1)
    session.feed("}", stamp=0.2)  # stray closing brace
    assert session.poisoned()
    out = run_stream(session, make_dsp()[0], make_ctl())
    assert out.kind == "replan"
    assert out.reason == "syntax_error"


def test_poison_inside_open_body_unblocks_consumer():
    session = StreamSession(PLAN)
    dsp, _ = make_dsp()
    ctl = make_ctl()
    done = []

    def consume():
        done.append(run_stream(session, dsp, ctl))

    t = threading.Thread(target=consume)
    t.start()
    session.feed("3{mf(1);", stamp=0.1)
    session.feed("#", stamp=0.2)  # illegal inside the body
    t.join(timeout=5)
    assert not t.is_alive()
    assert done[0].kind == "replan"
    assert done[0].reason == "syntax_error"


def test_consumer_blocks_until_body_closes():
    session = StreamSession(PLAN)
    dsp, backend = make_dsp()
    ctl = make_ctl()
    results = []
    t = threading.Thread(target=lambda: results.append(
        run_stream(session, dsp, ctl)))
    t.start()
    session.feed("2{mf(5)", stamp=0.1)
    # body open: the loop cannot finish its first pass beyond mf yet
    session.feed(";tc(7)}", stamp=0.4)
    session.finish(stamp=0.5)
    t.join(timeout=5)
    assert not t.is_alive()
    assert results[0].completed
    assert [c[0] for c in backend.calls] == ["move_forward", "turn_cw"] * 2


def test_abort_unblocks_waiting_consumer():
    session = StreamSession(PLAN)
    dsp, _ = make_dsp()
    ctl = make_ctl()
    results = []
    t = threading.Thread(target=lambda: results.append(
        run_stream(session, dsp, ctl)))
    t.start()
    session.feed("2{mf(5)", stamp=0.1)  # never closed
    ctl.abort()
    t.join(timeout=5)
    assert not t.is_alive()
    assert results[0].kind == "aborted"


def test_canonical_text_after_finish():
    session = StreamSession(PLAN)
    feed_tokens(session, "?_1==True{->True}" .replace("_1", "iv('cup')"))
    assert canonical_text(session) == "?iv('cup')==True{->True}"


def test_stream_equals_batch_trace():
    from minispec.parser import parse_program
    from minispec.runtime import run_batch
    text = "_1=iv('cup');?_1==True{mf(10);->True}tc(45)"
    session = StreamSession(PLAN)
    feed_tokens(session, text)
    dsp_s, be_s = make_dsp({"is_visible": True})
    out_s = run_stream(session, dsp_s, make_ctl())
    dsp_b, be_b = make_dsp({"is_visible": True})
    out_b = run_batch(parse_program(text, PLAN), dsp_b, make_ctl())
    assert out_s.kind == out_b.kind == "completed"
    assert be_s.calls == be_b.calls
    assert [r.statement_text for r in out_s.trace] == \
        [r.statement_text for r in out_b.trace]
