"""Static checks of a parsed program against a skill registry.

Checks: unknown callees, arity mismatches against the registry, variables
read before any textually preceding assignment, and loop counts above the
safety cap. Results are diagnostics, not exceptions.
"""

from dataclasses import dataclass

from . import ast
from .parser import PLAN, SKILL_DEFINITION

LOOP_CAP = 100


@dataclass(frozen=True)
class Diagnostic:
    level: str      # "ERROR" | "WARN"
    span: tuple
    code: str
    message: str

    def format(self):
        return f"{self.level} {self.span[0]}..{self.span[1]} {self.code} {self.message}"


def format_diagnostics(diags):
    return "\n".join(d.format() for d in diags)


def validate(program, registry, mode=PLAN):
    """Return a list of diagnostics for ``program`` (empty when clean)."""
    diags = []
    assigned = set()

    def err(span, code, message):
        diags.append(Diagnostic("ERROR", span, code, message))

    def check_call(call):
        skill = registry.find(call.callee)
        if skill is None:
            err(call.span, "UNKNOWN_SKILL", f"unknown skill {call.callee!r}")
        else:
            if len(call.args) != skill.arity:
                err(call.span, "ARITY_MISMATCH",
                    f"{skill.name} expects {skill.arity} got {len(call.args)}")
        for arg in call.args:
            check_operand(arg)

    def check_operand(op):
        if isinstance(op, ast.VarRef):
            if op.index not in assigned:
                err((0, 0), "UNBOUND_VARIABLE",
                    f"variable _{op.index} read before assignment")
        elif isinstance(op, ast.PosRef) and mode != SKILL_DEFINITION:
            err((0, 0), "POSITIONAL_REF", f"${op.index} outside a skill definition")
        elif isinstance(op, ast.Call):
            check_call(op)

    def check_cond(cond):
        if isinstance(cond, ast.Compare):
            check_operand(cond.lhs)
            check_operand(cond.rhs)
        else:
            check_cond(cond.left)
            check_cond(cond.right)

    def check_body(body):
        for stmt in body.statements:
            if isinstance(stmt, ast.CallStmt):
                check_call(stmt.call)
            elif isinstance(stmt, ast.AssignStmt):
                check_call(stmt.call)
                assigned.add(stmt.var_index)
            elif isinstance(stmt, ast.ReturnStmt):
                check_operand(stmt.operand)
            elif isinstance(stmt, ast.LoopStmt):
                if stmt.count > LOOP_CAP:
                    err(stmt.span, "LOOP_CAP",
                        f"loop count {stmt.count} exceeds the cap of {LOOP_CAP}")
                check_body(stmt.body)
            elif isinstance(stmt, ast.IfStmt):
                check_cond(stmt.cond)
                check_body(stmt.body)

    check_body(program.body)
    return diags
