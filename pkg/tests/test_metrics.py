"""Metrics: tokenizer rules, latency fit, benchmark harness, baselines."""

import math

import pytest
from hypothesis import given, strategies as st

from minispec.bench import (BenchmarkReport, BenchRow, baseline_program,
                            load_fixtures, render_report, report_to_csv,
                            run_benchmark, scan_pair_tokens,
                            token_comparison)
from minispec.clock import SimClock
from minispec.errors import DegenerateDesign
from minispec.latency import (LatencySample, fit_latency, generate_samples,
                              read_samples_csv)
from minispec.parser import PLAN, parse_program
from minispec.runtime import RunControl, SkillDispatcher, run_batch
from minispec.tokens import HeuristicTokenizer

TOK = HeuristicTokenizer()


# -- tokenizer -----------------------------------------------------------------

def test_two_char_words_one_token():
    assert TOK.count("tc") == 1
    assert TOK.count("mf") == 1
    assert TOK.count("_1") == 1


def test_empty_is_zero():
    assert TOK.count("") == 0


def test_punctuation_each_one_token():
    assert TOK.count("();{}") == 5


def test_run_length_cost():
    assert TOK.count("word") == 1       # 4 chars
    assert TOK.count("words") == 2      # 5 chars -> ceil(5/4)
    assert TOK.count("abcdefgh") == 2
    assert TOK.count("abcdefghi") == 3


def test_newline_and_space_runs():
    assert TOK.count("\n") == 1
    assert TOK.count("    ") == 1
    assert TOK.count("     ") == 2      # 5 spaces


def test_call_token_count():
    # g ( ' cha ir ' ) ;
    assert TOK.count("g('chair');") == 8


@given(st.text(alphabet=st.characters(min_codepoint=32, max_codepoint=126),
               max_size=120))
def test_segment_concat_and_count_consistent(text):
    seg = TOK.segment(text)
    assert "".join(seg) == text
    assert TOK.count(text) == len(seg)


# -- latency fit ---------------------------------------------------------------

PAIRS = [(np_t, no_t) for np_t in (500, 1500, 4000, 8000)
         for no_t in (10, 40, 90, 200)]


def test_noise_free_recovery():
    samples = generate_samples(0.00025, 0.7, 0.3, PAIRS)
    model = fit_latency(samples)
    assert model.a == pytest.approx(0.00025, rel=1e-6)
    assert model.b == pytest.approx(0.7, rel=1e-6)
    assert model.c == pytest.approx(0.3, rel=1e-6)
    assert model.rms_residual < 1e-9
    assert model.b / model.a == pytest.approx(2800, abs=1e-3)


def test_prediction():
    samples = generate_samples(0.001, 0.5, 0.2, PAIRS)
    model = fit_latency(samples)
    assert model.predict(1000, 100) == pytest.approx(1.0 + 50 + 0.2,
                                                     rel=1e-6)


def test_too_few_samples():
    with pytest.raises(DegenerateDesign):
        fit_latency([LatencySample(1, 1, 1.0)] * 2)


def test_identical_samples_degenerate():
    with pytest.raises(DegenerateDesign):
        fit_latency([LatencySample(100, 10, 7.3)] * 8)


def test_no_np_variation_degenerate_unless_a_fixed():
    samples = [LatencySample(1000, no, 0.3 + 0.7 * no)
               for no in (10, 20, 40, 80)]
    with pytest.raises(DegenerateDesign):
        fit_latency(samples)
    model = fit_latency(samples, fix_a_zero=True)
    assert model.a == 0.0
    assert model.b == pytest.approx(0.7, rel=1e-6)
    assert model.c == pytest.approx(0.3, rel=1e-6)


def test_noisy_recovery_within_three_stderr():
    hits = 0
    for seed in range(100):
        samples = generate_samples(0.00025, 0.7, 0.3, PAIRS,
                                   noise_sigma=0.05, seed=seed)
        model = fit_latency(samples)
        ok = (abs(model.b - 0.7) <= 3 * model.stderr[1]
              and abs(model.c - 0.3) <= 3 * model.stderr[2])
        hits += ok
    assert hits >= 95


def test_read_samples_csv():
    text = "np,no,latency_s\n100,10,7.5\n200,20,14.2\n"
    out = read_samples_csv(text)
    assert out == [LatencySample(100, 10, 7.5), LatencySample(200, 20, 14.2)]


# -- benchmark harness ---------------------------------------------------------

def test_run_benchmark_rows_and_determinism():
    report = run_benchmark(task_ids=(1, 3), repeat=3)
    for task_id in (1, 3):
        for mode in ("stream", "batch"):
            rows = report.rows_for(task_id, mode)
            assert len(rows) == 3
            assert report.success_count(task_id, mode) == 3
            # deterministic mock: identical repetitions
            assert len({(r.r_time_s, r.c_time_s) for r in rows}) == 1


def test_jitter_produces_spread():
    report = run_benchmark(task_ids=(1,), modes=("stream",), repeat=5,
                           jitter=0.1, seed=3)
    times = {r.c_time_s for r in report.rows}
    assert len(times) > 1


def test_stream_r_time_never_worse():
    report = run_benchmark(repeat=1)
    for task_id in range(1, 12):
        (s,) = report.rows_for(task_id, "stream")
        (b,) = report.rows_for(task_id, "batch")
        assert s.r_time_s <= b.r_time_s + 1e-9


def test_batch_r_time_linear_in_tokens():
    # batch R-Time is an affine function of output tokens; slope == 1/rate
    report = run_benchmark(repeat=1)
    pts = sorted((r.output_tokens, r.r_time_s) for r in report.rows
                 if r.mode == "batch" and r.task_id not in (9, 10))
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    n = len(pts)
    sx, sy = sum(xs), sum(ys)
    sxx = sum(x * x for x in xs)
    sxy = sum(x * y for x, y in pts)
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx)
    assert slope == pytest.approx(1 / 20.0, rel=0.01)


def test_token_comparison_reduction():
    pairs = token_comparison()
    assert len(pairs) == 11
    for pair in pairs:
        assert pair.minispec_tokens < pair.baseline_tokens
    mean = sum(p.reduction_pct for p in pairs) / len(pairs)
    assert mean >= 30.0


def test_scan_pair():
    pair = scan_pair_tokens()
    assert pair.minispec_tokens < pair.baseline_tokens
    assert pair.ratio <= 0.6


def test_render_report_layout():
    report = run_benchmark(task_ids=(1,), repeat=1)
    text = render_report(report)
    assert "ID" in text and "R-Time" in text and "O.Token#" in text
    assert "mode: stream" in text and "mode: batch" in text
    assert "mean reduction" in text


def test_render_empty_report():
    text = render_report(BenchmarkReport())
    assert text.startswith("benchmark report")


def test_report_to_csv():
    report = BenchmarkReport(rows=[
        BenchRow(1, "stream", True, 0.25, 3.5, 11)])
    csv_text = report_to_csv(report)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "task,mode,success,r_time,c_time,tokens"
    assert lines[1] == "1,stream,true,0.2500,3.5000,11"


# -- verbose baselines ---------------------------------------------------------

def dispatches_for(program, world_id):
    from minispec.bench import load_bundled_world
    from minispec.default_skills import build_default_registry
    from minispec.llm import answer_query
    from minispec.world import SimBackend

    world = load_bundled_world(world_id)
    ctl = RunControl(clock=SimClock())
    backend = SimBackend(world, ctl)
    backend.probe = lambda q: answer_query(q, world)
    dsp = SkillDispatcher(build_default_registry(), backend)
    run_batch(program, dsp, ctl)
    return ctl.dispatches


@pytest.mark.parametrize("task_id", range(1, 12))
def test_baseline_trace_equivalence(task_id):
    world_id = f"task_{task_id:02d}"
    fixtures = load_fixtures()
    plan = next(fx["plan"] for fx in fixtures["plans"]
                if fx.get("world") == world_id and fx.get("round", 0) == 0)
    mini = dispatches_for(parse_program(plan, PLAN), world_id)
    verbose = dispatches_for(baseline_program(world_id), world_id)
    assert mini == verbose
