"""Benchmark harness over the 11 bundled tasks.

Runs each task through the full mission loop on the simulated clock, in
stream and batch interpretation modes, and aggregates success, R-Time,
C-Time, and output token counts. Also computes the MiniSpec-vs-verbose
token comparison from the bundled plan pairs.
"""

import csv
import io
import json
import random
from dataclasses import dataclass, field

from .baseline import translate_baseline
from .default_skills import build_default_registry
from .errors import MissingFixture
from .llm import MockLLM
from .mission import MissionOptions, run_mission
from .prompts import load_asset
from .tokens import HeuristicTokenizer
from .world import load_world

ALL_TASK_IDS = tuple(range(1, 12))


@dataclass
class BenchRow:
    task_id: int
    mode: str
    success: bool
    r_time_s: float
    c_time_s: float
    output_tokens: int
    repeat: int = 0
    skip_reason: str = None


@dataclass
class TokenPair:
    task_id: object
    minispec_tokens: int
    baseline_tokens: int

    @property
    def ratio(self):
        return self.minispec_tokens / self.baseline_tokens

    @property
    def reduction_pct(self):
        return 100.0 * (1.0 - self.ratio)


@dataclass
class BenchmarkReport:
    rows: list = field(default_factory=list)
    token_pairs: list = field(default_factory=list)

    def rows_for(self, task_id, mode):
        return [r for r in self.rows if r.task_id == task_id and r.mode == mode]

    def success_count(self, task_id, mode):
        return sum(1 for r in self.rows_for(task_id, mode) if r.success)


def load_tasks():
    return json.loads(load_asset("fixtures/tasks.json"))["tasks"]


def load_bundled_world(world_id):
    return load_world(load_asset(f"worlds/{world_id}.json"), world_id)


def load_fixtures(name="plans.json", path=None):
    if path:
        with open(path) as fh:
            return json.load(fh)
    return json.loads(load_asset(f"fixtures/{name}"))


def run_benchmark(task_ids=ALL_TASK_IDS, modes=("stream", "batch"),
                  fixtures=None, repeat=10, jitter=0.0, seed=7,
                  replan_limit=3):
    fixtures = fixtures or load_fixtures()
    tasks = {t["id"]: t for t in load_tasks()}
    rng = random.Random(seed)
    report = BenchmarkReport()

    for task_id in task_ids:
        if task_id not in tasks:
            raise MissingFixture(f"no such task id {task_id}")
        spec = tasks[task_id]
        for mode in modes:
            for rep in range(repeat):
                rate = fixtures.get("rate_tps", 20)
                if jitter:
                    rate *= 1.0 + rng.uniform(-jitter, jitter)
                client = MockLLM(fixtures["plans"], rate_tps=rate)
                world = load_bundled_world(spec["world"])
                state = run_mission(
                    spec["task"], world, client, build_default_registry(),
                    MissionOptions(stream=(mode == "stream"),
                                   replan_limit=replan_limit))
                report.rows.append(BenchRow(
                    task_id, mode, state.success,
                    state.r_time_s if state.r_time_s is not None else
                    state.c_time_s,
                    state.c_time_s, state.output_tokens, rep,
                    skip_reason=state.failure_reason))
    report.token_pairs = token_comparison(task_ids, fixtures)
    return report


def token_comparison(task_ids=ALL_TASK_IDS, fixtures=None):
    """MiniSpec round-0 fixture vs verbose baseline, bundled tokenizer."""
    fixtures = fixtures or load_fixtures()
    tasks = {t["id"]: t for t in load_tasks()}
    tok = HeuristicTokenizer()
    pairs = []
    for task_id in task_ids:
        spec = tasks[task_id]
        plan = _round0_plan(fixtures, spec["world"])
        if plan is None:
            continue
        baseline = load_asset(f"baselines/{spec['world']}.txt")
        pairs.append(TokenPair(task_id, tok.count(plan), tok.count(baseline)))
    return pairs


def scan_pair_tokens():
    tok = HeuristicTokenizer()
    mini = load_asset("baselines/scan_minispec.txt")
    verbose = load_asset("baselines/scan_python.txt")
    return TokenPair("scan", tok.count(mini), tok.count(verbose))


def _round0_plan(fixtures, world_id):
    for fx in fixtures["plans"]:
        if fx.get("world") == world_id and fx.get("round", 0) == 0:
            return fx["plan"]
    return None


def baseline_program(world_id):
    return translate_baseline(load_asset(f"baselines/{world_id}.txt"))


# -- rendering ------------------------------------------------------------------

def render_report(report, repeat=None):
    out = ["benchmark report"]
    modes = sorted({r.mode for r in report.rows})
    task_ids = sorted({r.task_id for r in report.rows})
    for mode in modes:
        out.append(f"\nmode: {mode}")
        out.append(f"{'ID':>3} | {'Success':>8} | {'R-Time':>8} | "
                   f"{'C-Time':>8} | {'O.Token#':>8}")
        out.append("-" * 48)
        for task_id in task_ids:
            rows = report.rows_for(task_id, mode)
            n = len(rows)
            succ = report.success_count(task_id, mode)
            r_mean = sum(r.r_time_s for r in rows) / n
            c_mean = sum(r.c_time_s for r in rows) / n
            tok = rows[0].output_tokens
            out.append(f"{task_id:>3} | {succ:>4}/{n:<3} | {r_mean:>8.2f} | "
                       f"{c_mean:>8.2f} | {tok:>8}")
    if report.token_pairs:
        out.append("\ntoken comparison (MiniSpec vs verbose baseline)")
        out.append(f"{'ID':>4} | {'MiniSpec':>8} | {'Baseline':>8} | "
                   f"{'Reduction':>9}")
        out.append("-" * 40)
        for pair in report.token_pairs:
            out.append(f"{pair.task_id!s:>4} | {pair.minispec_tokens:>8} | "
                       f"{pair.baseline_tokens:>8} | "
                       f"{pair.reduction_pct:>8.1f}%")
        mean = sum(p.reduction_pct for p in report.token_pairs) \
            / len(report.token_pairs)
        out.append(f"mean reduction: {mean:.1f}%")
    return "\n".join(out) + "\n"


def report_to_csv(report):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["task", "mode", "success", "r_time", "c_time", "tokens"])
    for r in report.rows:
        writer.writerow([r.task_id, r.mode, str(r.success).lower(),
                         f"{r.r_time_s:.4f}", f"{r.c_time_s:.4f}",
                         r.output_tokens])
    return buf.getvalue()
