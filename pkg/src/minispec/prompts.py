"""Prompt assembly for planning and probe queries.

Templates live under assets/prompts and are rendered by straight placeholder
substitution; rendering fails loudly if a placeholder is left unfilled.
"""

import re
from importlib import resources

from .errors import UnfilledPlaceholder

_PLACEHOLDER = re.compile(r"\{[a-z_]+\}")


def load_asset(relpath):
    root = resources.files("minispec") / "assets"
    return (root / relpath).read_text()


def _render(template, fields):
    text = template
    for key, value in fields.items():
        text = text.replace("{" + key + "}", value)
    leftover = _PLACEHOLDER.search(text)
    if leftover:
        raise UnfilledPlaceholder(leftover.group(0))
    return text


def build_planning_prompt(task_description, scene_description, registry,
                          error_history=""):
    if not task_description:
        raise ValueError("task_description must be non-empty")
    return _render(load_asset("prompts/planning.txt"), {
        "minispec_syntax": load_asset("prompts/syntax.txt").rstrip("\n"),
        "system_skill_description_high": registry.describe_for_prompt("high"),
        "system_skill_description_low": registry.describe_for_prompt("low"),
        "rules": load_asset("prompts/rules.txt").rstrip("\n"),
        "plan_examples": load_asset("prompts/examples.txt").rstrip("\n"),
        "error_message": error_history or "empty",
        "scene_description": scene_description,
        "task_description": task_description,
    })


def build_query_prompt(scene_description, question):
    if not question:
        raise ValueError("question must be non-empty")
    return _render(load_asset("prompts/query.txt"), {
        "scene_description": scene_description,
        "question": question,
    })


def format_error_history(plan_text, trace, reason):
    lines = "\n".join(rec.format() for rec in trace)
    return (f"previous plan:\n{plan_text}\nexecuted:\n{lines}\n"
            f"reason: {reason}")
