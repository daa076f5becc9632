"""The mission loop: task -> prompt -> token stream -> interpreter ->
replan rounds -> result.

Everything runs on a simulated clock. Token arrival times are computed from
token indices and the emission rate, and skill durations advance the same
clock, so R-Time and C-Time are exact and reproducible.
"""

from dataclasses import dataclass, field

from .clock import PacedClock, SimClock
from .errors import MiniSpecError, NoFixture, ParseError
from .llm import DEFAULT_RATE_TPS
from .parser import PLAN, parse_program
from .printer import serialize
from .prompts import (build_planning_prompt, build_query_prompt,
                      format_error_history)
from .runtime import (ReplanPolicy, RunControl, SkillDispatcher, run_batch)
from .streaming import StreamSession, run_stream
from .tokens import HeuristicTokenizer
from .validator import validate
from .world import SimBackend, evaluate_success

TOKEN_EVENT_BATCH = 5
PROBE_SECONDS = 0.4  # simulated round trip of the lightweight query prompt


@dataclass
class MissionOptions:
    stream: bool = True
    replan_limit: int = 3
    rate_tps: float = None       # None: take the client's rate, else 20
    policy: bool = None          # None: follow the world file
    snapshot_dir: str = None
    step_budget: int = None
    pace: float = 0.0            # wall seconds per simulated second; 0 = fast


@dataclass
class RoundRecord:
    round_no: int
    plan_text: str
    prompt_tokens: int
    output_tokens: int
    outcome_kind: str
    reason: str = None
    trace: list = field(default_factory=list)


@dataclass
class MissionState:
    task: str
    world_id: str
    phase: str = "Idle"     # Idle Planning Executing Replanning Done Failed
    replan_count: int = 0
    rounds: list = field(default_factory=list)
    success: bool = False
    answer: object = None
    failure_reason: str = None
    r_time_s: float = None
    c_time_s: float = None
    output_tokens: int = 0
    prompt_tokens: int = 0
    log_lines: list = field(default_factory=list)

    @property
    def terminal(self):
        return self.phase in ("Done", "Failed")

    def summary(self):
        return {
            "task": self.task,
            "world": self.world_id,
            "phase": self.phase,
            "replan_count": self.replan_count,
            "success": self.success,
            "answer": self.answer,
            "failure_reason": self.failure_reason,
            "r_time_s": self.r_time_s,
            "c_time_s": self.c_time_s,
            "output_tokens": self.output_tokens,
            "prompt_tokens": self.prompt_tokens,
            "log_lines": list(self.log_lines),
            "rounds": [{"round": r.round_no, "plan": r.plan_text,
                        "outcome": r.outcome_kind, "reason": r.reason}
                       for r in self.rounds],
        }


def make_probe(world, client, ctl):
    """The `query` skill's backend: ask the LLM over the current scene."""
    def probe(question):
        scene = world.scene_description()
        prompt = build_query_prompt(scene, question)
        ctl.emit("probe_issued", {"question": question})
        raw = client.complete(prompt, {"question": question,
                                       "world_state": world})
        ctl.clock.advance(PROBE_SECONDS)
        answer = {"True": True, "False": False}.get(raw.strip(), raw.strip())
        ctl.emit("probe_answered", {"question": question, "answer": answer})
        return answer
    return probe


def run_mission(task, world, client, registry, options=None, emit=None,
                ctl_out=None, state_out=None):
    options = options or MissionOptions()
    if emit is None:
        emit = lambda kind, payload: None
    state = MissionState(task=task, world_id=world.world_id)
    if state_out is not None:
        state_out.append(state)  # live view for the service
    clock = PacedClock(options.pace) if options.pace else SimClock()
    bind = getattr(emit, "bind_clock", None)
    if bind is not None:
        bind(clock)

    policy_on = (world.policy_enabled if options.policy is None
                 else options.policy)
    ctl = RunControl(clock=clock, emit=emit,
                     policy=ReplanPolicy() if policy_on else None)
    if options.step_budget:
        ctl.step_budget = options.step_budget
    if ctl_out is not None:
        ctl_out.append(ctl)  # expose the control for abort callers

    backend = SimBackend(world, ctl, snapshot_dir=options.snapshot_dir)
    backend.probe = make_probe(world, client, ctl)
    dsp = SkillDispatcher(registry, backend)
    tokenizer = getattr(client, "tokenizer", None) or HeuristicTokenizer()
    rate = options.rate_tps or getattr(client, "rate_tps", DEFAULT_RATE_TPS)

    d = world.drone
    emit("mission_started", {
        "task": task, "world": world.world_id, "stream": options.stream,
        "hfov": world.hfov,
        "drone": {"x": d.x, "y": d.y, "z": d.z, "yaw": d.yaw},
        "objects": [{"label": o.label, "x": o.position[0],
                     "y": o.position[1], "z": o.position[2],
                     "color": o.color, "radius": o.obstacle_radius}
                    for o in world.objects]})
    emit("scene_updated", {"scene": world.scene_description()})

    error_history = ""
    for round_no in range(options.replan_limit + 1):
        state.phase = "Planning" if round_no == 0 else f"Replanning({round_no})"
        prompt = build_planning_prompt(task, world.scene_description(),
                                       registry, error_history)
        try:
            tokens, np_count, no_count = client.stream_complete(
                prompt, {"task": task, "world": world.world_id,
                         "round": round_no})
        except NoFixture as exc:
            _fail(state, ctl, emit, f"no plan available: {exc}")
            break
        state.prompt_tokens += np_count
        state.output_tokens += no_count

        t0 = clock.now()
        ctl.reset_policy_counters()
        state.phase = "Executing"
        outcome, plan_text = _execute_round(
            tokens, t0, rate, dsp, ctl, emit, options.stream, tokenizer)
        record = RoundRecord(round_no, plan_text, np_count, no_count,
                             outcome.kind, outcome.reason, outcome.trace)
        state.rounds.append(record)
        state.log_lines = list(backend.log_lines)
        if state.r_time_s is None and ctl.first_dispatch_at is not None:
            state.r_time_s = ctl.first_dispatch_at

        if outcome.kind == "completed":
            state.phase = "Done"
            state.answer = _mission_answer(task, outcome.value, backend)
            state.c_time_s = clock.now()
            state.success = evaluate_success(world, backend)
            emit("mission_done", {"answer": state.answer,
                                  "success": state.success,
                                  "c_time_s": state.c_time_s})
            break
        if outcome.kind == "replan":
            emit("replan_triggered", {"reason": outcome.reason,
                                      "round": round_no,
                                      "message": outcome.message})
            state.replan_count += 1
            if round_no == options.replan_limit:
                _fail(state, ctl, emit, "replan limit exhausted")
                break
            error_history = format_error_history(plan_text, outcome.trace,
                                                 outcome.reason)
            emit("scene_updated", {"scene": world.scene_description()})
            continue
        if outcome.kind == "aborted":
            state.phase = "Failed"
            state.failure_reason = "aborted"
            state.c_time_s = clock.now()
            emit("aborted", {})
            emit("mission_failed", {"reason": "aborted"})
            break
        _fail(state, ctl, emit, outcome.message or "runtime error")
        break

    if state.c_time_s is None:
        state.c_time_s = clock.now()
    return state


def _execute_round(tokens, t0, rate, dsp, ctl, emit, stream, tokenizer):
    """Run one plan round; returns (ExecOutcome, canonical plan text)."""
    raw = "".join(tokens)
    if stream:
        session = StreamSession(PLAN)
        session.on_unit = lambda stmt, stamp: emit(
            "unit_parsed", {"at_s": stamp})
        pending = []
        for i, tok in enumerate(tokens, 1):
            pending.append(tok)
            if len(pending) == TOKEN_EVENT_BATCH or i == len(tokens):
                emit("token_received", {"text": "".join(pending), "upto": i})
                pending.clear()
            session.feed(tok, stamp=t0 + i / rate)
            if session.poisoned():
                break
        session.finish(stamp=t0 + len(tokens) / rate)
        outcome = run_stream(session, dsp, ctl)
        try:
            text = serialize(session.program)
        except MiniSpecError:
            text = raw
        return outcome, text

    # batch: wait for the whole plan, then parse, validate and execute
    ctl.clock.advance_to(t0 + len(tokens) / rate)
    emit("token_received", {"text": raw, "upto": len(tokens)})
    try:
        program = parse_program(raw, PLAN)
    except MiniSpecError as exc:
        from .runtime import ExecOutcome
        return ExecOutcome("replan", reason="syntax_error",
                           message=str(exc)), raw
    problems = [d for d in validate(program, dsp.registry, PLAN)
                if d.level == "ERROR"]
    if problems:
        from .runtime import ExecOutcome
        return ExecOutcome(
            "replan", reason="syntax_error",
            message="; ".join(d.format() for d in problems)), serialize(program)
    outcome = run_batch(program, dsp, ctl)
    return outcome, serialize(program)


def _mission_answer(task, value, backend):
    """[Q] tasks answer via log; otherwise the plan's return value stands."""
    if task.strip().startswith("[Q]") and backend.log_lines:
        return backend.log_lines[-1]
    return value


def _fail(state, ctl, emit, reason):
    state.phase = "Failed"
    state.failure_reason = reason
    state.c_time_s = ctl.clock.now()
    emit("mission_failed", {"reason": reason})
