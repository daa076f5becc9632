"""MiniSpec: a token-efficient plan language for LLM-driven robots, with a
streaming interpreter, a simulated drone world, a mission control loop, and
a benchmark harness.

Typical use:

    from minispec import (build_default_registry, load_bundled_world,
                          MockLLM, run_mission, MissionOptions)

    world = load_bundled_world("task_01")
    client = MockLLM.from_fixture_file(open("plans.json").read())
    state = run_mission("Go and take a picture of the chair.", world,
                        client, build_default_registry())
"""

from .ast import (AssignStmt, Call, CallStmt, Compare, IfStmt, Lit,
                  LoopStmt, PosRef, Program, ReplanStmt, ReturnStmt,
                  VarRef)
from .bench import (BenchmarkReport, load_bundled_world, load_fixtures,
                    load_tasks, render_report, report_to_csv,
                    run_benchmark, token_comparison)
from .clock import PacedClock, SimClock, WallClock
from .default_skills import build_default_registry
from .errors import (ArityMismatch, LexError, MiniSpecError, ParseError,
                     SkillFault, UnknownSkill)
from .events import Event, EventLog
from .latency import (LatencyModel, LatencySample, fit_latency,
                      generate_samples)
from .llm import HTTPLLM, MockLLM
from .mission import MissionOptions, MissionState, run_mission
from .parser import PLAN, SKILL_DEFINITION, IncrementalParser, parse_program
from .printer import serialize, serialize_statement
from .runtime import ExecOutcome, ReplanSignal, RunControl, SkillDispatcher, \
    run_batch
from .skills import SkillRegistry, generate_abbr
from .streaming import StreamSession, run_stream
from .tokens import HeuristicTokenizer
from .validator import Diagnostic, validate
from .world import SimBackend, WorldState, evaluate_success, load_world

__version__ = "0.1.0"

__all__ = [
    "AssignStmt", "Call", "CallStmt", "Compare", "IfStmt", "Lit",
    "LoopStmt", "PosRef", "Program", "ReplanStmt", "ReturnStmt", "VarRef",
    "BenchmarkReport", "load_bundled_world", "load_fixtures", "load_tasks",
    "render_report", "report_to_csv", "run_benchmark", "token_comparison",
    "PacedClock", "SimClock", "WallClock",
    "build_default_registry",
    "ArityMismatch", "LexError", "MiniSpecError", "ParseError",
    "SkillFault", "UnknownSkill",
    "Event", "EventLog",
    "LatencyModel", "LatencySample", "fit_latency", "generate_samples",
    "HTTPLLM", "MockLLM",
    "MissionOptions", "MissionState", "run_mission",
    "PLAN", "SKILL_DEFINITION", "IncrementalParser", "parse_program",
    "serialize", "serialize_statement",
    "ExecOutcome", "ReplanSignal", "RunControl", "SkillDispatcher",
    "run_batch",
    "SkillRegistry", "generate_abbr",
    "StreamSession", "run_stream",
    "HeuristicTokenizer",
    "Diagnostic", "validate",
    "SimBackend", "WorldState", "evaluate_success", "load_world",
    "__version__",
]
