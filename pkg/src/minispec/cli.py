"""The minispec command line: repl, run, bench, tokens, parse, replay,
serve, fit.

Exit codes: 0 success, 1 mission/parse failure, 2 usage error (click's
default for bad flags).
"""

import os
import sys

import click

from .bench import (load_bundled_world, load_fixtures, render_report,
                    report_to_csv, run_benchmark)
from .clock import SimClock
from .default_skills import build_default_registry
from .errors import MiniSpecError
from .events import EventLog, format_event, read_event_file
from .latency import fit_latency, read_samples_csv
from .llm import MockLLM
from .mission import MissionOptions, run_mission
from .parser import PLAN, SKILL_DEFINITION, parse_program
from .printer import serialize
from .prompts import build_planning_prompt
from .runtime import (Frame, ReplanSignal, RunControl, SkillDispatcher,
                      _ReturnSignal, exec_statement)
from .tokens import HeuristicTokenizer
from .validator import format_diagnostics, validate
from .world import SimBackend


@click.group()
def main():
    """MiniSpec: plan language, stream interpreter, drone simulator."""


def _parse_task_spec(spec):
    """'1..11' or '1,3,9' -> tuple of task ids."""
    spec = spec.strip()
    if ".." in spec:
        lo, hi = spec.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(p) for p in spec.split(",") if p.strip())


def _client(fixtures_path, rate):
    fixtures = load_fixtures(path=fixtures_path)
    return MockLLM(fixtures["plans"],
                   rate_tps=rate or fixtures.get("rate_tps", 20))


@main.command()
@click.option("--task", required=True, help="Task in natural language.")
@click.option("--world", "world_id", required=True,
              help="Bundled world id, e.g. task_01.")
@click.option("--batch", is_flag=True,
              help="Wait for the full plan before executing.")
@click.option("--rate", type=float, default=None,
              help="Token emission rate (tokens/s).")
@click.option("--fixtures", "fixtures_path", type=click.Path(exists=True),
              default=None, help="Plan fixture file overriding the bundle.")
@click.option("--replan-limit", type=int, default=3)
@click.option("--trace", "trace_path", type=click.Path(), default=None,
              help="Write the event log as JSON lines.")
def run(task, world_id, batch, rate, fixtures_path, replan_limit,
        trace_path):
    """Run one mission and print its event log and final state."""
    try:
        world = load_bundled_world(world_id)
    except MiniSpecError as exc:
        raise click.ClickException(str(exc))
    log = EventLog()
    state = run_mission(task, world, _client(fixtures_path, rate),
                        build_default_registry(),
                        MissionOptions(stream=not batch, rate_tps=rate,
                                       replan_limit=replan_limit),
                        emit=log)
    for event in log.snapshot():
        click.echo(format_event(event))
    if trace_path:
        with open(trace_path, "w") as fh:
            for event in log.snapshot():
                fh.write(event.to_json() + "\n")
    click.echo("")
    click.echo(f"phase:    {state.phase}")
    click.echo(f"success:  {state.success}")
    click.echo(f"answer:   {state.answer!r}")
    click.echo(f"r_time:   {state.r_time_s}")
    click.echo(f"c_time:   {state.c_time_s}")
    click.echo(f"tokens:   {state.output_tokens}")
    click.echo(f"replans:  {state.replan_count}")
    if not state.success:
        if state.failure_reason:
            click.echo(f"reason:   {state.failure_reason}")
        sys.exit(1)


@main.command()
@click.option("--tasks", "task_spec", default="1..11",
              help="Task ids, '1..11' or '1,3,9'.")
@click.option("--repeat", type=int, default=10)
@click.option("--csv", "csv_path", type=click.Path(), default=None,
              help="Write rows as CSV; figures render next to it.")
@click.option("--jitter", type=float, default=0.0,
              help="Uniform emission rate jitter fraction, e.g. 0.1.")
@click.option("--seed", type=int, default=7)
@click.option("--fixtures", "fixtures_path", type=click.Path(exists=True),
              default=None)
def bench(task_spec, repeat, csv_path, jitter, seed, fixtures_path):
    """Stream-vs-batch benchmark over the bundled tasks."""
    task_ids = _parse_task_spec(task_spec)
    fixtures = load_fixtures(path=fixtures_path) if fixtures_path else None
    report = run_benchmark(task_ids, repeat=repeat, jitter=jitter,
                           seed=seed, fixtures=fixtures)
    click.echo(render_report(report), nl=False)
    if csv_path:
        with open(csv_path, "w") as fh:
            fh.write(report_to_csv(report))
        from .figures import render_figures
        out_dir = os.path.dirname(os.path.abspath(csv_path))
        for path in render_figures(report, out_dir):
            click.echo(f"wrote {path}")
        click.echo(f"wrote {csv_path}")


@main.command()
@click.argument("path", type=click.Path(exists=True))
def tokens(path):
    """Token count of a file under the bundled tokenizer."""
    with open(path) as fh:
        click.echo(HeuristicTokenizer().count(fh.read()))


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--skill-mode", is_flag=True,
              help="Parse as a skill definition (comma calls, $n refs).")
def parse(path, skill_mode):
    """Parse and validate a plan file; print its canonical form."""
    mode = SKILL_DEFINITION if skill_mode else PLAN
    with open(path) as fh:
        text = fh.read()
    try:
        program = parse_program(text.strip(), mode)
    except MiniSpecError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    diags = validate(program, build_default_registry(), mode)
    if diags:
        click.echo(format_diagnostics(diags), err=True)
    click.echo(serialize(program))
    if any(d.level == "ERROR" for d in diags):
        sys.exit(1)


@main.command()
@click.argument("path", type=click.Path(exists=True))
def replay(path):
    """Pretty-print a recorded event trace (JSON lines)."""
    with open(path) as fh:
        for event in read_event_file(fh.read()):
            click.echo(format_event(event))


@main.command()
@click.option("--port", type=int, default=8008)
@click.option("--host", default="127.0.0.1")
def serve(port, host):
    """Start the mission HTTP + WebSocket gateway."""
    from .service import serve as _serve
    _serve(host=host, port=port)


@main.command()
@click.argument("path", type=click.Path(exists=True))
@click.option("--fix-a-zero", is_flag=True,
              help="Pin the input-token coefficient a to 0.")
@click.option("--figure", "figure_path", type=click.Path(), default=None,
              help="Render samples and fit line to a PNG.")
def fit(path, fix_a_zero, figure_path):
    """Fit latency = a*Np + b*No + c to a CSV of np,no,latency_s rows."""
    with open(path) as fh:
        samples = read_samples_csv(fh.read())
    try:
        model = fit_latency(samples, fix_a_zero=fix_a_zero)
    except MiniSpecError as exc:
        raise click.ClickException(str(exc))
    click.echo(f"a = {model.a:.6g} +/- {model.stderr[0]:.3g}")
    click.echo(f"b = {model.b:.6g} +/- {model.stderr[1]:.3g}")
    click.echo(f"c = {model.c:.6g} +/- {model.stderr[2]:.3g}")
    click.echo(f"rms residual = {model.rms_residual:.6g}")
    if model.a > 0:
        click.echo(f"b/a = {model.b / model.a:.4g}")
    if figure_path:
        from .figures import render_latency_figure
        render_latency_figure(samples, model, figure_path)
        click.echo(f"wrote {figure_path}")


@main.command()
@click.option("--world", "world_id", default="task_01")
@click.option("--skill-mode", is_flag=True,
              help="Accept skill-definition syntax (comma calls).")
def repl(world_id, skill_mode):
    """Interactive MiniSpec session against a simulated world."""
    world = load_bundled_world(world_id)
    registry = build_default_registry()
    ctl = RunControl(clock=SimClock(), emit=lambda k, p: None)
    backend = SimBackend(world, ctl)
    backend.probe = lambda question: "False"  # no LLM in the repl
    dsp = SkillDispatcher(registry, backend)
    frame = Frame()
    mode = SKILL_DEFINITION if skill_mode else PLAN
    click.echo(f"world {world_id}; :scene :pose :reset :quit")
    buffer = ""
    while True:
        try:
            line = input("... " if buffer else ">>> ")
        except (EOFError, KeyboardInterrupt):
            break
        if not buffer and line.strip() in (":quit", ":q"):
            break
        if not buffer and line.strip() == ":scene":
            click.echo(world.scene_description())
            continue
        if not buffer and line.strip() == ":pose":
            p = world.drone
            click.echo(f"x={p.x:.1f} y={p.y:.1f} z={p.z:.1f} "
                       f"yaw={p.yaw:.1f}")
            continue
        if not buffer and line.strip() == ":reset":
            world = load_bundled_world(world_id)
            backend = SimBackend(world, ctl)
            backend.probe = lambda question: "False"
            dsp = SkillDispatcher(registry, backend)
            frame = Frame()
            continue
        buffer += line
        if buffer.count("{") > buffer.count("}"):
            continue  # composite still open, keep reading
        text, buffer = buffer.strip(), ""
        if not text:
            continue
        try:
            program = parse_program(text, mode)
        except MiniSpecError as exc:
            click.echo(str(exc), err=True)
            continue
        try:
            for stmt in program.body.statements:
                exec_statement(stmt, frame, dsp, ctl)
        except _ReturnSignal as ret:
            click.echo(f"-> {ret.value!r}")
        except ReplanSignal as sig:
            click.echo(f"replan requested: {sig.reason} ({sig.message})")
        except MiniSpecError as exc:
            click.echo(str(exc), err=True)
    click.echo("bye")


@main.command("prompt")
@click.option("--task", required=True)
@click.option("--world", "world_id", required=True)
def prompt_cmd(task, world_id):
    """Print the planning prompt the mission loop would send."""
    world = load_bundled_world(world_id)
    click.echo(build_planning_prompt(task, world.scene_description(),
                                     build_default_registry(), ""))


if __name__ == "__main__":
    main()
