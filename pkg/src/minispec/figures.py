"""Benchmark figures, rendered to PNG files next to the CSV report."""

import os

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt


def render_figures(report, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    paths.append(_response_time_figure(report, out_dir))
    if report.token_pairs:
        paths.append(_token_figure(report, out_dir))
    return [p for p in paths if p]


def _response_time_figure(report, out_dir):
    task_ids = sorted({r.task_id for r in report.rows})
    modes = sorted({r.mode for r in report.rows})
    if not task_ids:
        return None
    fig, ax = plt.subplots(figsize=(8, 4))
    width = 0.8 / max(len(modes), 1)
    for i, mode in enumerate(modes):
        means = []
        for task_id in task_ids:
            rows = report.rows_for(task_id, mode)
            means.append(sum(r.r_time_s for r in rows) / len(rows))
        xs = [t + (i - (len(modes) - 1) / 2) * width for t in task_ids]
        ax.bar(xs, means, width=width, label=mode)
    ax.set_xlabel("task")
    ax.set_ylabel("R-Time (simulated s)")
    ax.set_title("Response time by interpretation mode")
    ax.set_xticks(task_ids)
    ax.legend()
    path = os.path.join(out_dir, "response_time.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def _token_figure(report, out_dir):
    pairs = report.token_pairs
    labels = [str(p.task_id) for p in pairs]
    xs = range(len(pairs))
    fig, ax = plt.subplots(figsize=(8, 4))
    width = 0.4
    ax.bar([x - width / 2 for x in xs],
           [p.minispec_tokens for p in pairs], width=width, label="MiniSpec")
    ax.bar([x + width / 2 for x in xs],
           [p.baseline_tokens for p in pairs], width=width, label="verbose")
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels)
    ax.set_xlabel("task")
    ax.set_ylabel("plan tokens")
    ax.set_title("Plan token counts")
    ax.legend()
    path = os.path.join(out_dir, "token_comparison.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def render_latency_figure(samples, model, out_path):
    fig, ax = plt.subplots(figsize=(6, 4))
    nos = [s.no_tokens for s in samples]
    ax.scatter(nos, [s.latency_s for s in samples], s=12, label="samples")
    span = sorted(set(nos))
    mean_np = sum(s.np_tokens for s in samples) / len(samples)
    ax.plot(span, [model.predict(mean_np, n) for n in span],
            color="tab:red", label="fit at mean Np")
    ax.set_xlabel("output tokens")
    ax.set_ylabel("latency (s)")
    ax.legend()
    fig.savefig(out_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return out_path
