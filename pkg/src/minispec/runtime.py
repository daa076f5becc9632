"""Batch execution of MiniSpec programs: frames, skill dispatch, bounded
loops, returns, replan signaling, aborts and traces.

The stream interpreter in ``streaming.py`` reuses everything here; the only
difference is where statements come from and how the clock advances.
"""

from dataclasses import dataclass, field

from . import ast
from .clock import SimClock
from .errors import (ArgTypeError, ArityMismatch, MiniSpecError,
                     MissingPositionalArg, SkillFault, StepBudgetExceeded,
                     TypeMismatch, UnboundVariable, UnknownSkill)
from .printer import serialize_statement
from .values import compare_values

DEFAULT_STEP_BUDGET = 1_000_000

REPLAN_EXPLICIT = "explicit_statement"
REPLAN_SYNTAX = "syntax_error"
REPLAN_SKILL_FAULT = "skill_fault"
REPLAN_POLICY = "policy_trigger"


class _ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class ReplanSignal(Exception):
    def __init__(self, reason, message=""):
        self.reason = reason
        self.message = message
        super().__init__(f"replan requested ({reason}): {message}")


class AbortSignal(Exception):
    pass


@dataclass
class TraceRecord:
    statement_text: str
    started_at: float  # mission-clock milliseconds
    finished_at: float
    result: object

    def format(self):
        res = "None" if self.result is None else repr(self.result)
        return (f"{self.started_at:.1f} {self.finished_at:.1f} "
                f"{self.statement_text} => {res}")


def format_trace(records):
    return "\n".join(r.format() for r in records)


class Frame:
    """Variable bindings for one plan or high-level-skill invocation."""

    def __init__(self, positional_args=()):
        self.vars = {}
        self.positional_args = list(positional_args)

    def load(self, index):
        if index not in self.vars:
            raise UnboundVariable(index)
        return self.vars[index]

    def positional(self, index):
        if index > len(self.positional_args):
            raise MissingPositionalArg(index, len(self.positional_args))
        return self.positional_args[index - 1]


@dataclass
class ReplanPolicy:
    """Optional exception-handling trigger on large scene changes."""
    rotation_deg: float = 180.0
    forward_cm: float = 1000.0


class RunControl:
    """Shared run state: clock, abort flag, trace, step budget, policy."""

    def __init__(self, clock=None, emit=None, step_budget=DEFAULT_STEP_BUDGET,
                 policy=None):
        self.clock = clock or SimClock()
        self.emit = emit or (lambda kind, payload: None)
        self.step_budget = step_budget
        self.steps = 0
        self.policy = policy
        self.trace = []
        self.dispatches = []  # (kind, resolved name, args) for every dispatch
        self._aborted = False
        self._policy_tripped = False
        self._rotation = 0.0
        self._forward = 0.0
        self.poison_check = None  # set by the stream session
        self.first_dispatch_at = None

    def abort(self):
        self._aborted = True

    @property
    def aborted(self):
        return self._aborted

    def check_abort(self):
        if self._aborted:
            raise AbortSignal()

    def note_step(self):
        self.steps += 1
        if self.steps > self.step_budget:
            raise StepBudgetExceeded(f"step budget {self.step_budget} exceeded")

    def reset_policy_counters(self):
        self._rotation = 0.0
        self._forward = 0.0
        self._policy_tripped = False

    def note_rotation(self, degrees):
        self._rotation += abs(degrees)
        if self.policy and self._rotation > self.policy.rotation_deg:
            self._policy_tripped = True

    def note_forward(self, distance_cm):
        self._forward += distance_cm
        if self.policy and self._forward > self.policy.forward_cm:
            self._policy_tripped = True

    def check_policy(self):
        if self._policy_tripped:
            self._policy_tripped = False
            raise ReplanSignal(REPLAN_POLICY, "scene-change policy tripped")

    def note_dispatch(self, kind, name, args):
        if self.first_dispatch_at is None:
            self.first_dispatch_at = self.clock.now()
        self.dispatches.append((kind, name, tuple(args)))


@dataclass
class ExecOutcome:
    kind: str                  # completed | replan | aborted | error
    value: object = None
    reason: str = None
    message: str = ""
    trace: list = field(default_factory=list)

    @property
    def completed(self):
        return self.kind == "completed"


class SkillDispatcher:
    """Resolves callees against the registry and invokes the backend."""

    def __init__(self, registry, backend):
        self.registry = registry
        self.backend = backend

    def call(self, callee, args, ctl):
        skill = self.registry.find(callee)
        if skill is None:
            raise UnknownSkill(callee)
        if len(args) != skill.arity:
            raise ArityMismatch(skill.name, skill.arity, len(args))
        ctl.check_abort()
        ctl.note_dispatch(skill.kind, skill.name, args)
        if skill.kind == "low":
            coerced = [self._coerce(a, decl, skill.name)
                       for a, decl in zip(args, skill.args)]
            fn = getattr(self.backend, skill.callable_id)
            return fn(*coerced)
        return call_high_level(skill, args, self, ctl)

    @staticmethod
    def _coerce(value, decl, skill_name):
        want = decl.py_type
        if want is float and isinstance(value, int) and not isinstance(value, bool):
            return float(value)
        if want is int and isinstance(value, bool):
            raise ArgTypeError(f"{skill_name}({decl.name}): expected int, got bool")
        if not isinstance(value, want):
            raise ArgTypeError(f"{skill_name}({decl.name}): expected "
                               f"{decl.type}, got {value!r}")
        return value


def call_high_level(skill, args, dsp, ctl):
    """Run a high-level skill definition in a fresh, isolated frame."""
    if skill.arity > len(args):
        raise MissingPositionalArg(skill.arity, len(args))
    frame = Frame(positional_args=args)
    return run_frame(skill.definition_ast.body, frame, dsp, ctl)


# -- evaluation ---------------------------------------------------------------

def eval_operand(op, frame, dsp, ctl):
    if isinstance(op, ast.Lit):
        return op.value
    if isinstance(op, ast.VarRef):
        return frame.load(op.index)
    if isinstance(op, ast.PosRef):
        return frame.positional(op.index)
    if isinstance(op, ast.Call):
        return _dispatch_call(op, frame, dsp, ctl)
    raise TypeError(f"not an operand: {op!r}")


def eval_condition(cond, frame, dsp, ctl):
    if isinstance(cond, ast.Compare):
        lhs = eval_operand(cond.lhs, frame, dsp, ctl)
        rhs = eval_operand(cond.rhs, frame, dsp, ctl)
        return compare_values(cond.op, lhs, rhs)
    if isinstance(cond, ast.And):
        return (eval_condition(cond.left, frame, dsp, ctl)
                and eval_condition(cond.right, frame, dsp, ctl))
    if isinstance(cond, ast.Or):
        return (eval_condition(cond.left, frame, dsp, ctl)
                or eval_condition(cond.right, frame, dsp, ctl))
    raise TypeError(f"not a condition: {cond!r}")


def _dispatch_call(call, frame, dsp, ctl):
    args = [eval_operand(a, frame, dsp, ctl) for a in call.args]
    try:
        return dsp.call(call.callee, args, ctl)
    except SkillFault as exc:
        raise ReplanSignal(REPLAN_SKILL_FAULT, str(exc)) from exc
    except UnknownSkill as exc:
        raise ReplanSignal(REPLAN_SYNTAX, str(exc)) from exc


# -- statement execution -------------------------------------------------------

def exec_statement(stmt, frame, dsp, ctl):
    ctl.check_abort()
    ctl.note_step()
    if isinstance(stmt, ast.ELEMENTARY):
        _exec_elementary(stmt, frame, dsp, ctl)
    elif isinstance(stmt, ast.LoopStmt):
        for _ in range(stmt.count):
            exec_body(stmt.body, frame, dsp, ctl)
    elif isinstance(stmt, ast.IfStmt):
        if eval_condition(stmt.cond, frame, dsp, ctl):
            exec_body(stmt.body, frame, dsp, ctl)
        # a false branch is never executed; streamed statements simply
        # accumulate in the (ignored) body until it closes
    else:
        raise TypeError(f"not a statement: {stmt!r}")


def _exec_elementary(stmt, frame, dsp, ctl):
    text = serialize_statement(stmt)
    started = ctl.clock.now() * 1000.0
    ctl.emit("statement_started", {"text": text})

    def record(result):
        rec = TraceRecord(text, started, ctl.clock.now() * 1000.0, result)
        ctl.trace.append(rec)
        ctl.emit("statement_finished", {"text": text, "result": result})

    if isinstance(stmt, ast.ReplanStmt):
        record("replan")
        raise ReplanSignal(REPLAN_EXPLICIT, "plan statement")
    try:
        if isinstance(stmt, ast.CallStmt):
            result = _dispatch_call(stmt.call, frame, dsp, ctl)
            record(result)
        elif isinstance(stmt, ast.AssignStmt):
            result = _dispatch_call(stmt.call, frame, dsp, ctl)
            frame.vars[stmt.var_index] = result
            record(result)
        elif isinstance(stmt, ast.ReturnStmt):
            value = eval_operand(stmt.operand, frame, dsp, ctl)
            record(value)
            raise _ReturnSignal(value)
    except ReplanSignal:
        record("fault")
        raise
    ctl.check_policy()


def exec_body(body, frame, dsp, ctl):
    """Execute a body in order, blocking on open bodies in stream mode."""
    index = 0
    while True:
        poisoned = ctl.poison_check or (lambda: False)
        entry = body.wait_entry(index, lambda: ctl.aborted or poisoned())
        if entry is None:
            if body.closed and index >= len(body.statements):
                return
            ctl.check_abort()
            if poisoned():
                raise ReplanSignal(REPLAN_SYNTAX, "plan stream failed mid-body")
            continue  # spurious wake: re-check
        stmt, stamp = entry
        ctl.clock.advance_to(stamp)
        exec_statement(stmt, frame, dsp, ctl)
        index += 1


def run_frame(body, frame, dsp, ctl):
    """Run a body to completion in its own frame; returns the `->` value."""
    try:
        exec_body(body, frame, dsp, ctl)
        return None
    except _ReturnSignal as ret:
        return ret.value


def run_batch(program, dsp, ctl=None):
    """Execute a fully parsed, closed program and classify the outcome."""
    ctl = ctl or RunControl()
    try:
        value = run_frame(program.body, Frame(), dsp, ctl)
        return ExecOutcome("completed", value=value, trace=ctl.trace)
    except ReplanSignal as sig:
        return ExecOutcome("replan", reason=sig.reason, message=sig.message,
                           trace=ctl.trace)
    except AbortSignal:
        return ExecOutcome("aborted", trace=ctl.trace)
    except (UnboundVariable, TypeMismatch, ArityMismatch, ArgTypeError,
            MissingPositionalArg, StepBudgetExceeded, MiniSpecError) as exc:
        return ExecOutcome("error", message=str(exc), trace=ctl.trace)
