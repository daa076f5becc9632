"""Skill registry: low-level skills bound to a backend, high-level skills
defined in MiniSpec, automatic <=2-letter abbreviations, and the bit-exact
prompt serialization of both skill sets."""

import json
import re
from dataclasses import dataclass, field

from . import ast
from .errors import AbbrExhausted, DuplicateName, UnknownSkill
from .parser import SKILL_DEFINITION, parse_program

RESERVED = {"rp", "replan"}

_ARG_TYPES = {"int": int, "float": float, "str": str, "bool": bool}


@dataclass(frozen=True)
class SkillArg:
    name: str
    type: str  # "int" | "float" | "str" | "bool"

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z_]\w*", self.name):
            raise ValueError(f"bad argument name {self.name!r}")
        if self.type not in _ARG_TYPES:
            raise ValueError(f"bad argument type {self.type!r}")

    @property
    def py_type(self):
        return _ARG_TYPES[self.type]


@dataclass
class LowLevelSkill:
    name: str
    abbr: str
    description: str
    args: list
    callable_id: str  # backend method name

    kind = "low"

    @property
    def arity(self):
        return len(self.args)


@dataclass
class HighLevelSkill:
    name: str
    abbr: str
    description: str
    definition_text: str
    definition_ast: object
    args: list = field(default_factory=list)  # display metadata for prompts

    kind = "high"

    @property
    def arity(self):
        """Maximum $n index used by the definition (0 if none)."""
        top = 0
        def scan_operand(op):
            nonlocal top
            if isinstance(op, ast.PosRef):
                top = max(top, op.index)
            elif isinstance(op, ast.Call):
                for a in op.args:
                    scan_operand(a)
        def scan_cond(c):
            if isinstance(c, ast.Compare):
                scan_operand(c.lhs)
                scan_operand(c.rhs)
            else:
                scan_cond(c.left)
                scan_cond(c.right)
        def scan_body(body):
            for s in body.statements:
                if isinstance(s, ast.CallStmt):
                    scan_operand(s.call)
                elif isinstance(s, ast.AssignStmt):
                    scan_operand(s.call)
                elif isinstance(s, ast.ReturnStmt):
                    scan_operand(s.operand)
                elif isinstance(s, ast.LoopStmt):
                    scan_body(s.body)
                elif isinstance(s, ast.IfStmt):
                    scan_cond(s.cond)
                    scan_body(s.body)
        scan_body(self.definition_ast.body)
        return top


def generate_abbr(name, taken):
    """Pick a unique 1-2 letter abbreviation for a snake_case skill name.

    Multi-word names try the initials of the first two words, then the first
    two letters of the first word; single-word names try the bare first
    letter before two letters. Both fall back to first-letter + each later
    letter of the name. The default drone skill set resolves without the
    fallback."""
    words = [w for w in name.split("_") if w]
    candidates = []
    if len(words) >= 2:
        candidates.append(words[0][0] + words[1][0])
        candidates.append(words[0][:2])
    else:
        candidates.append(words[0][0])
        candidates.append(words[0][:2])
    flat = "".join(words)
    candidates += [flat[0] + c for c in flat[1:]]
    for cand in candidates:
        cand = cand.lower()
        if cand.isalpha() and cand not in taken and cand not in RESERVED:
            return cand
    raise AbbrExhausted(f"no free abbreviation for {name!r}")


class SkillRegistry:
    """Name/abbr-indexed skill set; built once, read-only afterwards."""

    def __init__(self):
        self.low = []
        self.high = []
        self._by_name = {}
        self._by_abbr = {}

    # -- registration -------------------------------------------------------

    def register_low(self, name, description, args, callable_id, abbr=None):
        self._check_name(name)
        abbr = self._assign_abbr(name, abbr)
        skill = LowLevelSkill(name, abbr, description, list(args), callable_id)
        self.low.append(skill)
        self._index(skill)
        return skill

    def register_high(self, name, description, definition_text, args=(),
                      abbr=None):
        self._check_name(name)
        program = parse_program(definition_text, SKILL_DEFINITION)
        from .validator import validate  # late import: validator needs registry
        problems = [d for d in validate(program, self, SKILL_DEFINITION)
                    if d.code == "UNKNOWN_SKILL"]
        if problems:
            raise UnknownSkill(problems[0].message.split("'")[1])
        abbr = self._assign_abbr(name, abbr)
        skill = HighLevelSkill(name, abbr, description, definition_text,
                               program, list(args))
        self.high.append(skill)
        self._index(skill)
        return skill

    def register_alias(self, alias, existing_name):
        """Extra lookup name for an already registered skill (same abbr)."""
        self._check_name(alias)
        self._by_name[alias] = self._by_name[existing_name]

    def _check_name(self, name):
        if name in self._by_name or name in RESERVED:
            raise DuplicateName(f"skill name {name!r} already registered")

    def _assign_abbr(self, name, abbr):
        if abbr is None:
            abbr = generate_abbr(name, set(self._by_abbr) | set(self._by_name))
        elif abbr in self._by_abbr or abbr in RESERVED:
            raise DuplicateName(f"abbreviation {abbr!r} already taken")
        return abbr

    def _index(self, skill):
        self._by_name[skill.name] = skill
        self._by_abbr[skill.abbr] = skill

    # -- lookup ---------------------------------------------------------------

    def find(self, callee):
        return self._by_name.get(callee) or self._by_abbr.get(callee)

    def __iter__(self):
        return iter(self.low + self.high)

    # -- prompt serialization ---------------------------------------------------

    def describe_for_prompt(self, which):
        lines = []
        if which == "low":
            for s in self.low:
                lines.append(f"abbr:{s.abbr},name:{s.name},"
                             f"args:[{_args_text(s.args)}],"
                             f"description:{s.description}")
        elif which == "high":
            for s in self.high:
                lines.append(f"abbr:{s.abbr},name:{s.name},"
                             f"definition:{s.definition_text},"
                             f"args:[{_args_text(s.args)}],"
                             f"description:{s.description}")
        else:
            raise ValueError(which)
        return "\n".join(lines)

    # -- manifest ---------------------------------------------------------------

    def to_manifest(self):
        return {
            "low": [{"name": s.name, "abbr": s.abbr, "description": s.description,
                     "args": [{"name": a.name, "type": a.type} for a in s.args],
                     "callable_id": s.callable_id} for s in self.low],
            "high": [{"name": s.name, "abbr": s.abbr, "description": s.description,
                      "definition": s.definition_text,
                      "args": [{"name": a.name, "type": a.type} for a in s.args]}
                     for s in self.high],
        }

    @classmethod
    def from_manifest(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        reg = cls()
        for s in data.get("low", []):
            reg.register_low(s["name"], s.get("description", ""),
                             [SkillArg(a["name"], a["type"]) for a in s.get("args", [])],
                             s.get("callable_id", s["name"]),
                             abbr=s.get("abbr"))
        for s in data.get("high", []):
            reg.register_high(s["name"], s.get("description", ""),
                              s["definition"],
                              [SkillArg(a["name"], a["type"]) for a in s.get("args", [])],
                              abbr=s.get("abbr"))
        return reg


def _args_text(args):
    return ",".join(f"{a.name}:{a.type}" for a in args)
